// Distinct-partition counting behind the even-code residual error analysis.
//
// Delta = 2 psi - 2 cum_phi_matching - 1 + cum_phi measures how far the
// even-code residual model is from exact. Under the linear reliability model
// Gamma_i = beta * rank_i, every pattern at Logistic Weight w has posterior
// Theta(w) = exp(-beta w) * prod(1 - B_i), and Delta collapses to signed sums
// of Theta(w) times partition parity counts.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "grandlab/grand.hpp"

namespace grandlab {

struct PentagonalEntry {
    std::uint64_t value;  // k(3k -+ 1)/2
    std::int64_t k;
    int sign;  // (-1)^k
};

// All generalized pentagonal numbers <= limit, ascending.
std::vector<PentagonalEntry> generalized_pentagonal(std::uint64_t limit);

struct ParityCounts {
    std::uint64_t w = 0;
    std::size_t n = 0;
    std::int64_t rho0 = 0;  // distinct partitions of w, parts <= n, even part count
    std::int64_t rho1 = 0;  // odd part count
    std::int64_t diff() const { return rho0 - rho1; }
    std::int64_t total() const { return rho0 + rho1; }
};

// Exact counts for all weights 0..min(n(n+1)/2, w_cap) at once; immutable
// once built. Full-range tables stay within int64 for n <= 64; larger n needs
// a cap that keeps the counts small.
class ParityCountTable {
public:
    explicit ParityCountTable(std::size_t n, std::uint64_t w_cap = ~std::uint64_t{0});

    std::size_t n() const { return n_; }
    std::uint64_t w_max() const { return w_max_; }

    // Weights above w_max have no partitions; counts are zero there.
    ParityCounts at(std::uint64_t w) const;
    std::int64_t diff(std::uint64_t w) const;

private:
    std::size_t n_;
    std::uint64_t w_max_;
    std::vector<std::int64_t> even_, odd_;
};

ParityCounts partition_parity_counts(std::uint64_t w, std::size_t n);

// Theta(w) = exp(-beta w) * prod(1 - b_i).
double theta(std::uint64_t w, double beta, const std::vector<double>& b);

double delta_observed(const DecodeOutcome& outcome, double psi);

// Exact Delta under the linear model with level-complete stopping at w_star:
// +- sum over w > w_star of Theta(w) (rho0 - rho1), sign by the parity of y.
double delta_closed_form(std::uint64_t w_star, double beta, const std::vector<double>& b,
                         std::size_t n, bool y_parity);

// 2 Theta(w_star) + | sum over w in (n, n(n+1)/2] of Theta(w) (rho0 - rho1) |.
// Requires w_star <= n; beyond that the premise of the bound fails.
double delta_bound(std::uint64_t w_star, double beta, const std::vector<double>& b,
                   std::size_t n);

// Tighter first term: Theta at the first two generalized pentagonal numbers
// above w_star (only those <= n contribute). Signs between the two terms are
// not pinned down, so they are added, which stays an upper bound.
double delta_bound_pentagonal(std::uint64_t w_star, double beta, const std::vector<double>& b,
                              std::size_t n);

// Zero-intercept least squares of sorted reliabilities against rank.
double fit_beta(const std::vector<double>& gamma);

}  // namespace grandlab
