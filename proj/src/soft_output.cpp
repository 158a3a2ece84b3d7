#include "grandlab/soft_output.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "grandlab/logsum.hpp"

namespace grandlab {

double gallager_parity_prob(const std::vector<double>& b, bool target_parity) {
    double prod = 1.0;
    for (double bi : b) {
        if (bi < 0.0 || bi > 1.0) {
            throw std::invalid_argument("gallager_parity_prob: b must lie in [0, 1]");
        }
        prod *= 1.0 - 2.0 * bi;
    }
    return 0.5 * (1.0 + (target_parity ? -prod : prod));
}

namespace {

double codeword_fraction(std::size_t k, std::size_t pool_log2) {
    return (std::exp2(static_cast<double>(k)) - 1.0) /
           (std::exp2(static_cast<double>(pool_log2)) - 1.0);
}

// Shared list scoring: s_i = exp(log_phi_i - log(denominator)). The
// denominator is the summed list mass plus extra_mass, or, when
// log_base_mass is given, that base (which already covers the list) plus
// extra_mass.
SoftDecision score_list(const std::vector<std::pair<BitVec, double>>& list, double extra_mass,
                        std::string method, const double* log_base_mass = nullptr) {
    if (list.empty()) throw std::invalid_argument("soft output: empty candidate list");
    LogAccum den;
    std::size_t best = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (!log_base_mass) den.add_log(list[i].second);
        if (list[i].second > list[best].second) best = i;
    }
    if (log_base_mass && std::isfinite(*log_base_mass)) den.add_log(*log_base_mass);
    if (extra_mass > 0.0) den.add_log(std::log(extra_mass));
    double log_den = den.log_sum();
    SoftDecision sd;
    sd.method = std::move(method);
    sd.per_candidate_s.resize(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        sd.per_candidate_s[i] = std::exp(list[i].second - log_den);
    }
    sd.chosen = list[best].first;
    sd.s = sd.per_candidate_s[best];
    return sd;
}

}  // namespace

SoftDecision so_map(const LinearCode& code, const Observation& obs) {
    return so_map(code, obs, code.codewords());
}

SoftDecision so_map(const LinearCode& code, const Observation& obs,
                    const std::vector<BitVec>& codebook) {
    if (code.k() > kEnumerationLimit) {
        throw std::invalid_argument("so_map: dimension exceeds the enumeration limit");
    }
    if (codebook.empty()) throw std::invalid_argument("so_map: empty codebook");
    std::size_t n = code.n();

    // Per-byte tables of summed gamma make each codeword's log likelihood a
    // handful of lookups. n <= 64 keeps noise effects in one word.
    std::size_t nbytes = (n + 7) / 8;
    std::vector<double> table(nbytes * 256, 0.0);
    for (std::size_t bpos = 0; bpos < nbytes; ++bpos) {
        double* t = table.data() + bpos * 256;
        for (unsigned v = 1; v < 256; ++v) {
            unsigned low = v & (v - 1);
            unsigned bit = static_cast<unsigned>(__builtin_ctz(v));
            std::size_t idx = bpos * 8 + bit;
            t[v] = t[low] + (idx < n ? obs.gamma[idx] : 0.0);
        }
    }

    std::uint64_t yw = obs.y.low_word();
    std::vector<double> neg(codebook.size());
    double best_log = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t c = 0; c < codebook.size(); ++c) {
        std::uint64_t z = codebook[c].low_word() ^ yw;
        double g = 0.0;
        for (std::size_t bpos = 0; bpos < nbytes; ++bpos) {
            g += table[bpos * 256 + ((z >> (bpos * 8)) & 0xff)];
        }
        neg[c] = -g;  // log likelihood up to the shared log1mb_sum constant
        if (neg[c] > best_log) {
            best_log = neg[c];
            best = c;
        }
    }
    double acc = 0.0;
    for (double v : neg) acc += std::exp(v - best_log);

    SoftDecision sd;
    sd.method = "map";
    sd.chosen = codebook[best];
    sd.s = 1.0 / acc;
    return sd;
}

SoftDecision so_forney(const std::vector<std::pair<BitVec, double>>& list) {
    return score_list(list, 0.0, "forney");
}

SoftDecision so_grand(const DecodeOutcome& outcome, const LinearCode& code) {
    double residual = 1.0 - outcome.cum_phi;
    if (residual < 0.0) residual = 0.0;
    double extra = residual * codeword_fraction(code.k(), code.n());
    return score_list(outcome.scored_list(), extra, "so_grand");
}

SoftDecision so_grand_even(const DecodeOutcome& outcome, double psi, const LinearCode& code) {
    if (!code.is_even()) {
        throw std::invalid_argument("so_grand_even: code is not even");
    }
    return so_grand_constrained(outcome, psi, outcome.cum_phi_matching, 1, code);
}

SoftDecision so_grand_constrained(const DecodeOutcome& outcome, double psi_product,
                                  double matching_mass, std::size_t constraint_count,
                                  const LinearCode& code) {
    double residual = psi_product - matching_mass;
    if (residual < 0.0) residual = 0.0;
    double extra = residual * codeword_fraction(code.k(), code.n() - constraint_count);
    SoftDecision sd = score_list(outcome.scored_list(), extra,
                                 constraint_count == 1 ? "so_grand_even" : "so_grand_multi");
    return sd;
}

SoftDecision so_gcd(const GcdOutcome& outcome, const LinearCode& code, bool even_mode,
                    double psi) {
    if (even_mode && !code.is_even()) {
        throw std::invalid_argument("so_gcd: even mode on a non-even code");
    }
    std::vector<std::pair<BitVec, double>> list;
    list.reserve(outcome.candidates.size());
    for (const auto& c : outcome.candidates) list.emplace_back(c.x, c.log_phi);
    double residual;
    double fraction;
    if (even_mode) {
        residual = psi - outcome.cum_prefix_parity_mass;
        fraction = codeword_fraction(code.k(), code.n() - 1);
    } else {
        residual = 1.0 - outcome.cum_prefix_mass;
        fraction = codeword_fraction(code.k(), code.n());
    }
    if (residual < 0.0) residual = 0.0;
    return score_list(list, residual * fraction, even_mode ? "so_gcd_even" : "so_gcd",
                      &outcome.log_cum_phi);
}

MultiParity multi_parity_psi(const std::vector<std::pair<BitVec, bool>>& groups,
                             const std::vector<double>& b) {
    MultiParity out{1.0, groups.size()};
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            if (groups[i].first.intersects(groups[j].first)) {
                throw std::invalid_argument("multi_parity_psi: groups must be disjoint");
            }
        }
    }
    for (const auto& [mask, target] : groups) {
        if (mask.size() != b.size()) {
            throw std::invalid_argument("multi_parity_psi: mask length mismatch");
        }
        std::vector<double> sub;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask.get(i)) sub.push_back(b[i]);
        }
        out.psi *= gallager_parity_prob(sub, target);
    }
    return out;
}

}  // namespace grandlab
