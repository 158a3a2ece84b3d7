#include "grandlab/linear_code.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace grandlab {

LinearCode LinearCode::from_generator(std::size_t n, const std::vector<BitVec>& rows) {
    if (n == 0 || rows.empty()) throw std::invalid_argument("from_generator: empty matrix");
    for (const BitVec& r : rows)
        if (r.size() != n) throw std::invalid_argument("from_generator: row length mismatch");

    const std::size_t k = rows.size();
    if (k > n) throw std::invalid_argument("from_generator: k > n");

    // Gaussian elimination with leftmost pivot selection.
    std::vector<BitVec> g = rows;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < k; ++col) {
        std::size_t sel = row;
        while (sel < k && !g[sel].get(col)) ++sel;
        if (sel == k) continue;
        std::swap(g[row], g[sel]);
        for (std::size_t r = 0; r < k; ++r)
            if (r != row && g[r].get(col)) g[r] ^= g[row];
        pivots.push_back(col);
        ++row;
    }
    if (row < k) throw std::invalid_argument("from_generator: rank-deficient generator matrix");

    LinearCode code;
    code.n_ = n;
    code.k_ = k;
    code.g_ = std::move(g);
    code.info_ = std::move(pivots);

    // Dual basis: one H row per non-pivot column f, with h[f] = 1 and
    // h[pivot_j] = G[j][f].
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : code.info_) is_pivot[p] = true;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BitVec h(n);
        h.set(f, true);
        for (std::size_t j = 0; j < k; ++j)
            if (code.g_[j].get(f)) h.set(code.info_[j], true);
        code.h_.push_back(std::move(h));
    }

    code.is_even_ = true;
    for (const BitVec& r : code.g_)
        if (r.parity() != 0) code.is_even_ = false;
    return code;
}

BitVec LinearCode::encode(const BitVec& u) const {
    if (u.size() != k_) throw std::invalid_argument("encode: message length != k");
    BitVec x(n_);
    for (std::size_t i = 0; i < k_; ++i)
        if (u.get(i)) x ^= g_[i];
    return x;
}

bool LinearCode::is_codeword(const BitVec& v) const {
    if (v.size() != n_) throw std::invalid_argument("is_codeword: word length != n");
    for (const BitVec& h : h_)
        if (v.dot_parity(h)) return false;
    return true;
}

std::uint64_t LinearCode::syndrome(const BitVec& v) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < h_.size(); ++i)
        s |= std::uint64_t(v.dot_parity(h_[i])) << i;
    return s;
}

std::vector<BitVec> LinearCode::codewords(std::size_t limit) const {
    if (k_ > limit) throw std::invalid_argument("codewords: k exceeds enumeration limit");
    std::vector<BitVec> out;
    out.reserve(std::size_t(1) << k_);
    BitVec u(k_);
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << k_); ++m) {
        for (std::size_t i = 0; i < k_; ++i) u.set(i, (m >> i) & 1);
        out.push_back(encode(u));
    }
    return out;
}

std::size_t LinearCode::min_distance(std::size_t limit) const {
    if (k_ > limit) throw std::invalid_argument("min_distance: k exceeds enumeration limit");
    std::size_t d = n_;
    BitVec u(k_);
    for (std::uint64_t m = 1; m < (std::uint64_t(1) << k_); ++m) {
        for (std::size_t i = 0; i < k_; ++i) u.set(i, (m >> i) & 1);
        d = std::min(d, encode(u).popcount());
    }
    return d;
}

LinearCode LinearCode::permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != n_) throw std::invalid_argument("permuted: permutation length != n");
    std::vector<BitVec> rows;
    rows.reserve(k_);
    for (const BitVec& g : g_) {
        BitVec r(n_);
        for (std::size_t i = 0; i < n_; ++i) r.set(i, g.get(perm[i]));
        rows.push_back(std::move(r));
    }
    return from_generator(n_, rows);
}

bool is_even_code(const LinearCode& code) { return code.is_even(); }

namespace {

// k shifts of the generator polynomial, coefficients low degree first.
std::vector<BitVec> cyclic_generator_rows(std::size_t n, std::size_t k,
                                          const std::vector<int>& g_coeffs) {
    std::vector<BitVec> rows;
    for (std::size_t i = 0; i < k; ++i) {
        BitVec r(n);
        for (std::size_t j = 0; j < g_coeffs.size(); ++j)
            if (g_coeffs[j]) r.set(i + j, true);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<BitVec> extend_with_overall_parity(const std::vector<BitVec>& rows) {
    std::vector<BitVec> out;
    for (const BitVec& r : rows) {
        BitVec e(r.size() + 1);
        for (std::size_t i = 0; i < r.size(); ++i) e.set(i, r.get(i));
        e.set(r.size(), r.parity() != 0);
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

LinearCode build_bch_15_11() {
    // g(x) = 1 + x + x^4
    return LinearCode::from_generator(15, cyclic_generator_rows(15, 11, {1, 1, 0, 0, 1}));
}

LinearCode build_ebch_16_11() {
    return LinearCode::from_generator(
        16, extend_with_overall_parity(cyclic_generator_rows(15, 11, {1, 1, 0, 0, 1})));
}

LinearCode build_ehamming_8_4() {
    // g(x) = 1 + x + x^3
    return LinearCode::from_generator(
        8, extend_with_overall_parity(cyclic_generator_rows(7, 4, {1, 1, 0, 1})));
}

LinearCode build_repetition(std::size_t n) {
    BitVec row(n);
    for (std::size_t i = 0; i < n; ++i) row.set(i, true);
    return LinearCode::from_generator(n, {row});
}

LinearCode load_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    std::size_t n = 0, k = 0;
    if (!(in >> n >> k)) throw std::invalid_argument("code file: expected \"n k\" header");
    if (n == 0 || k == 0 || k > n) throw std::invalid_argument("code file: bad dimensions");
    std::vector<BitVec> rows;
    for (std::size_t i = 0; i < k; ++i) {
        std::string line;
        if (!(in >> line)) throw std::invalid_argument("code file: missing generator row");
        if (line.size() != n) throw std::invalid_argument("code file: row length != n");
        rows.push_back(BitVec::from_string(line));
    }
    return LinearCode::from_generator(n, rows);
}

LinearCode resolve_code(const std::string& spec) {
    if (spec == "ebch_16_11") return build_ebch_16_11();
    if (spec == "bch_15_11") return build_bch_15_11();
    if (spec == "ehamming_8_4") return build_ehamming_8_4();
    if (spec.rfind("repetition_", 0) == 0) {
        const std::size_t n = std::stoul(spec.substr(11));
        return build_repetition(n);
    }
    return load_code_file(spec);
}

}  // namespace grandlab
