// Binary linear block codes: generator/parity-check matrices over GF(2),
// systematic information set, membership and structural predicates.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grandlab/bitvec.hpp"

namespace grandlab {

constexpr std::size_t kEnumerationLimit = 24;  // max k for exhaustive codebook walks

class LinearCode {
public:
    // Builds a code from k generator rows of length n. Rows are reduced to
    // row-reduced echelon form (same row space), the pivot columns become the
    // systematic information set, and H is computed as a basis of the dual.
    // Throws std::invalid_argument if the rows are rank-deficient.
    static LinearCode from_generator(std::size_t n, const std::vector<BitVec>& rows);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    bool is_even() const { return is_even_; }

    const std::vector<BitVec>& generator_rows() const { return g_; }
    const std::vector<BitVec>& parity_rows() const { return h_; }
    const std::vector<std::size_t>& info_positions() const { return info_; }

    // u * G; bits at info_positions equal u.
    BitVec encode(const BitVec& u) const;

    // True iff H v^T = 0.
    bool is_codeword(const BitVec& v) const;

    // Syndrome bits of v, one per H row, packed into a word (n-k <= 64).
    std::uint64_t syndrome(const BitVec& v) const;

    // All 2^k codewords in message-index order. Throws if k exceeds the limit.
    std::vector<BitVec> codewords(std::size_t limit = kEnumerationLimit) const;

    // Minimum Hamming distance by exhaustive enumeration.
    std::size_t min_distance(std::size_t limit = kEnumerationLimit) const;

    // Column permutation: result coordinate i is this code's coordinate perm[i].
    LinearCode permuted(const std::vector<std::size_t>& perm) const;

private:
    LinearCode() = default;

    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<BitVec> g_;               // k rows, RREF
    std::vector<BitVec> h_;               // n-k rows
    std::vector<std::size_t> info_;       // pivot columns, ascending
    bool is_even_ = false;
};

// Every row of G has even weight, equivalently all codewords do.
bool is_even_code(const LinearCode& code);

// Extended BCH(16,11): cyclic BCH(15,11) with g(x) = x^4 + x + 1, plus an
// overall parity bit appended as the last coordinate.
LinearCode build_ebch_16_11();

// Unextended BCH(15,11), g(x) = x^4 + x + 1.
LinearCode build_bch_15_11();

// Extended Hamming(8,4): cyclic Hamming(7,4) with g(x) = x^3 + x + 1 plus
// overall parity. Even, distance 4.
LinearCode build_ehamming_8_4();

// Length-n repetition code {0...0, 1...1}.
LinearCode build_repetition(std::size_t n);

// Code definition file: first line "n k", then k rows of n characters in {0,1}.
LinearCode load_code_file(const std::string& path);

// Built-in name or file path.
LinearCode resolve_code(const std::string& spec);

}  // namespace grandlab
