#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include "grandlab/bitvec.hpp"
#include "grandlab/linear_code.hpp"

using namespace grandlab;

namespace {

BitVec message_from_index(std::size_t k, std::uint64_t idx) {
    BitVec u(k);
    for (std::size_t i = 0; i < k; ++i) u.set(i, (idx >> i) & 1u);
    return u;
}

}  // namespace

TEST_CASE("ebch_16_11 structure") {
    const LinearCode code = build_ebch_16_11();
    CHECK(code.n() == 16);
    CHECK(code.k() == 11);
    CHECK(code.is_even());
    CHECK(is_even_code(code));
    CHECK(code.min_distance() == 4);

    const auto words = code.codewords();
    REQUIRE(words.size() == 2048);
    std::set<BitVec> distinct(words.begin(), words.end());
    CHECK(distinct.size() == 2048);
    for (const auto& c : words) {
        CHECK(c.parity() == 0);
        CHECK(code.is_codeword(c));
        CHECK(code.syndrome(c) == 0);
    }
}

TEST_CASE("bch_15_11 is odd with distance 3") {
    const LinearCode code = build_bch_15_11();
    CHECK(code.n() == 15);
    CHECK(code.k() == 11);
    CHECK_FALSE(code.is_even());
    CHECK(code.min_distance() == 3);
    bool any_odd = false;
    for (const auto& c : code.codewords())
        if (c.parity() != 0) any_odd = true;
    CHECK(any_odd);
}

TEST_CASE("ehamming_8_4 structure") {
    const LinearCode code = build_ehamming_8_4();
    CHECK(code.n() == 8);
    CHECK(code.k() == 4);
    CHECK(code.is_even());
    CHECK(code.min_distance() == 4);
    CHECK(code.codewords().size() == 16);
}

TEST_CASE("repetition code") {
    const LinearCode code = build_repetition(5);
    CHECK(code.n() == 5);
    CHECK(code.k() == 1);
    CHECK_FALSE(code.is_even());  // odd length, all-ones word has odd weight
    const auto words = code.codewords();
    REQUIRE(words.size() == 2);
    CHECK(words[0].is_zero());
    CHECK(words[1].popcount() == 5);
    CHECK(build_repetition(4).is_even());
}

TEST_CASE("encode is linear and systematic on info positions") {
    const LinearCode code = build_ebch_16_11();
    const auto& info = code.info_positions();
    REQUIRE(info.size() == 11);
    for (std::uint64_t idx : {std::uint64_t(0), std::uint64_t(1), std::uint64_t(1025),
                              std::uint64_t(2047), std::uint64_t(777)}) {
        const BitVec u = message_from_index(11, idx);
        const BitVec c = code.encode(u);
        CHECK(code.is_codeword(c));
        for (std::size_t i = 0; i < 11; ++i) CHECK(c.get(info[i]) == u.get(i));
    }
    // Unit messages reproduce the generator rows.
    for (std::size_t i = 0; i < 11; ++i) {
        BitVec e(11);
        e.set(i, true);
        CHECK(code.encode(e) == code.generator_rows()[i]);
    }
    // Linearity on a few pairs.
    const BitVec a = message_from_index(11, 0x2F5);
    const BitVec b = message_from_index(11, 0x51C);
    CHECK(code.encode(a ^ b) == (code.encode(a) ^ code.encode(b)));
}

TEST_CASE("generator and parity check matrices are orthogonal") {
    for (const LinearCode& code :
         {build_ebch_16_11(), build_bch_15_11(), build_ehamming_8_4(), build_repetition(6)}) {
        REQUIRE(code.parity_rows().size() == code.n() - code.k());
        for (const auto& g : code.generator_rows())
            for (const auto& h : code.parity_rows()) CHECK(g.dot_parity(h) == 0);
    }
}

TEST_CASE("membership agrees with brute force codebook") {
    const LinearCode code = build_ehamming_8_4();
    const auto words = code.codewords();
    const std::set<BitVec> book(words.begin(), words.end());
    for (std::uint64_t v = 0; v < 256; ++v) {
        BitVec x(8);
        for (std::size_t i = 0; i < 8; ++i) x.set(i, (v >> i) & 1u);
        CHECK(code.is_codeword(x) == (book.count(x) != 0));
        CHECK((code.syndrome(x) == 0) == (book.count(x) != 0));
    }
}

TEST_CASE("single flips leave the code") {
    const LinearCode code = build_ebch_16_11();
    const BitVec c = code.encode(message_from_index(11, 1234));
    for (std::size_t i = 0; i < 16; ++i) {
        BitVec x = c;
        x.flip(i);
        CHECK_FALSE(code.is_codeword(x));  // d = 4 > 1
    }
}

TEST_CASE("permuted code preserves weights and membership structure") {
    const LinearCode code = build_ehamming_8_4();
    std::vector<std::size_t> perm = {3, 1, 4, 0, 6, 2, 7, 5};
    const LinearCode pcode = code.permuted(perm);
    CHECK(pcode.n() == 8);
    CHECK(pcode.k() == 4);
    CHECK(pcode.min_distance() == 4);
    // Permuting each codeword of the original gives exactly the new codebook.
    std::set<BitVec> expect;
    for (const auto& c : code.codewords()) {
        BitVec p(8);
        for (std::size_t i = 0; i < 8; ++i) p.set(i, c.get(perm[i]));
        expect.insert(p);
    }
    for (const auto& c : pcode.codewords()) CHECK(expect.count(c) == 1);
}

TEST_CASE("from_generator rejects rank deficient rows") {
    std::vector<BitVec> rows = {BitVec::from_string("1100"), BitVec::from_string("0110"),
                                BitVec::from_string("1010")};
    CHECK_THROWS_AS(LinearCode::from_generator(4, rows), std::invalid_argument);
}

TEST_CASE("code file parsing") {
    const char* path = "test_code_tmp.gm";
    {
        std::ofstream f(path);
        f << "4 2\n1100\n0011\n";
    }
    const LinearCode code = load_code_file(path);
    CHECK(code.n() == 4);
    CHECK(code.k() == 2);
    CHECK(code.is_even());
    CHECK(code.codewords().size() == 4);
    std::remove(path);

    CHECK_THROWS(load_code_file("does_not_exist.gm"));
}

TEST_CASE("resolve_code knows the built-in names") {
    CHECK(resolve_code("ebch_16_11").n() == 16);
    CHECK(resolve_code("bch_15_11").n() == 15);
    CHECK(resolve_code("ehamming_8_4").n() == 8);
    CHECK(resolve_code("repetition_3").n() == 3);
    CHECK_THROWS(resolve_code("no_such_code"));
}
