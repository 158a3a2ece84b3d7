// Blockwise soft output: the probability that the decoded word is the
// transmitted one, estimated from decode-time posterior accumulators.
//
// All list methods share one structure: s_i = phi_i / (sum of list phis +
// residual mass assigned to unvisited codewords). They differ only in the
// residual model. Residuals are clamped at zero; accumulated mass can
// overshoot its analytic ceiling by a few ulps.
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "grandlab/bitvec.hpp"
#include "grandlab/channel.hpp"
#include "grandlab/gcd.hpp"
#include "grandlab/grand.hpp"
#include "grandlab/linear_code.hpp"

namespace grandlab {

struct SoftDecision {
    BitVec chosen;
    double s = 0.0;                      // correctness probability of chosen
    std::vector<double> per_candidate_s; // aligned with the decode list
    std::string method;
};

// Probability that a set of independent bit errors with probabilities b has
// the given total parity: (1 +- prod(1 - 2 b_i)) / 2.
double gallager_parity_prob(const std::vector<double>& b, bool target_parity);

// Exact blockwise MAP over the full codebook. Requires k <= kEnumerationLimit.
SoftDecision so_map(const LinearCode& code, const Observation& obs);

// Same, against a caller-cached codebook (order defines tie-breaking).
SoftDecision so_map(const LinearCode& code, const Observation& obs,
                    const std::vector<BitVec>& codebook);

// List-conditional posterior: s_i = phi_i / sum of list phis.
SoftDecision so_forney(const std::vector<std::pair<BitVec, double>>& list);

// Residual: unqueried mass spread uniformly over n-bit words, codeword
// fraction (2^k - 1)/(2^n - 1).
SoftDecision so_grand(const DecodeOutcome& outcome, const LinearCode& code);

// Even-code refinement: candidates live on the parity-matching half, so the
// residual is (psi - queried matching mass) times (2^k - 1)/(2^(n-1) - 1),
// with psi = gallager_parity_prob(obs.b, parity of y).
SoftDecision so_grand_even(const DecodeOutcome& outcome, double psi, const LinearCode& code);

// c disjoint parity constraints: psi_product = product of per-group parity
// probabilities, matching mass from outcome.cum_phi_tracked, denominator
// fraction (2^k - 1)/(2^(n-c) - 1).
SoftDecision so_grand_constrained(const DecodeOutcome& outcome, double psi_product,
                                  double matching_mass, std::size_t constraint_count,
                                  const LinearCode& code);

// GCD analogues. Baseline spreads (1 - cum_prefix_mass) over (2^n - 1) words;
// even mode spreads (psi - cum_prefix_parity_mass) over the matching half.
SoftDecision so_gcd(const GcdOutcome& outcome, const LinearCode& code, bool even_mode,
                    double psi);

struct MultiParity {
    double psi;                    // product over groups
    std::size_t constraint_count;  // c
};

// Disjoint coordinate groups, each with a target parity. psi factorizes over
// groups because the groups share no bits.
MultiParity multi_parity_psi(const std::vector<std::pair<BitVec, bool>>& groups,
                             const std::vector<double>& b);

}  // namespace grandlab
