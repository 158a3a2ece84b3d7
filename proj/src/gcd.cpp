#include "grandlab/gcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "grandlab/grand.hpp"
#include "grandlab/logsum.hpp"

namespace grandlab {

Observation permute_observation(const Observation& obs, const std::vector<std::size_t>& perm) {
    if (perm.size() != obs.n()) {
        throw std::invalid_argument("permute_observation: permutation length mismatch");
    }
    std::size_t n = obs.n();
    Observation out;
    out.r.resize(n);
    out.llr.resize(n);
    out.gamma.resize(n);
    out.b.resize(n);
    out.log1mb.resize(n);
    out.y = BitVec(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = perm[i];
        out.r[i] = obs.r[j];
        out.llr[i] = obs.llr[j];
        out.gamma[i] = obs.gamma[j];
        out.b[i] = obs.b[j];
        out.log1mb[i] = obs.log1mb[j];
        out.y.set(i, obs.y.get(j));
    }
    out.log1mb_sum = obs.log1mb_sum;
    return out;
}

BitVec unpermute(const BitVec& v, const std::vector<std::size_t>& perm) {
    BitVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.get(i)) out.set(perm[i], true);
    }
    return out;
}

Systematized systematize(const LinearCode& code, const Observation& obs) {
    std::size_t n = code.n();
    std::vector<bool> is_info(n, false);
    for (std::size_t p : code.info_positions()) is_info[p] = true;
    std::vector<std::size_t> perm;
    perm.reserve(n);
    for (std::size_t p : code.info_positions()) perm.push_back(p);
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_info[i]) perm.push_back(i);
    }
    Systematized sys{code.permuted(perm), permute_observation(obs, perm), perm};
    return sys;
}

InfoPatternIterator::InfoPatternIterator(const std::vector<double>& b) : k_(b.size()) {
    if (k_ > 64) throw std::invalid_argument("InfoPatternIterator: at most 64 coordinates");
    std::vector<double> gamma(k_);
    for (std::size_t i = 0; i < k_; ++i) {
        if (!(b[i] > 0.0) || b[i] > 0.5) {
            throw std::invalid_argument("InfoPatternIterator: b must lie in (0, 1/2]");
        }
        gamma[i] = std::log(1.0 / b[i] - 1.0);
    }
    pos_of_rank_.resize(k_);
    std::iota(pos_of_rank_.begin(), pos_of_rank_.end(), std::size_t{0});
    std::stable_sort(pos_of_rank_.begin(), pos_of_rank_.end(),
                     [&gamma](std::size_t a, std::size_t b2) { return gamma[a] < gamma[b2]; });
    gamma_sorted_.resize(k_);
    for (std::size_t r = 0; r < k_; ++r) gamma_sorted_[r] = gamma[pos_of_rank_[r]];
}

bool InfoPatternIterator::next(BitVec& pattern) {
    if (pattern.size() != k_) pattern = BitVec(k_);
    pattern.clear();
    if (!emitted_empty_) {
        emitted_empty_ = true;
        last_weight_ = 0.0;
        if (k_ > 0) frontier_.push(Node{gamma_sorted_[0], 1});
        return true;
    }
    if (frontier_.empty()) return false;
    Node cur = frontier_.top();
    frontier_.pop();
    last_weight_ = cur.weight;
    std::uint64_t m = cur.mask;
    for (std::size_t r = 0; r < k_; ++r) {
        if ((m >> r) & 1u) pattern.set(pos_of_rank_[r], true);
    }
    // Successors: append the next rank, or shift the top rank up. Weights are
    // recomputed from the mask so equal sets always carry equal weights.
    std::size_t top = 63 - static_cast<std::size_t>(__builtin_clzll(m));
    if (top + 1 < k_) {
        auto weight_of = [this](std::uint64_t mask) {
            double w = 0.0;
            while (mask) {
                std::size_t r = static_cast<std::size_t>(__builtin_ctzll(mask));
                w += gamma_sorted_[r];
                mask &= mask - 1;
            }
            return w;
        };
        std::uint64_t ext = m | (std::uint64_t{1} << (top + 1));
        frontier_.push(Node{weight_of(ext), ext});
        std::uint64_t shf = (m ^ (std::uint64_t{1} << top)) | (std::uint64_t{1} << (top + 1));
        frontier_.push(Node{weight_of(shf), shf});
    }
    return true;
}

GcdOutcome gcd_decode(const LinearCode& code, const Observation& obs, const GcdOptions& opts) {
    if (opts.list_size < 1) throw std::invalid_argument("gcd_decode: list_size must be >= 1");
    if (obs.n() != code.n()) throw std::invalid_argument("gcd_decode: observation length mismatch");
    std::size_t n = code.n();
    std::size_t k = code.k();

    Systematized sys = systematize(code, obs);

    std::uint64_t cap = opts.p_max ? opts.p_max : ~std::uint64_t{0};
    if (k < 64) cap = std::min<std::uint64_t>(cap, std::uint64_t{1} << k);

    double prefix_log1mb_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) prefix_log1mb_sum += sys.obs.log1mb[i];
    // No parity-segment pattern can beat this, so it caps every future phi.
    double log_parity_max = obs.log1mb_sum - prefix_log1mb_sum;

    double parity_prod = 1.0;
    for (std::size_t i = k; i < n; ++i) parity_prod *= 1.0 - 2.0 * sys.obs.b[i];

    bool y_parity = obs.y.parity() != 0;
    BitVec y_prefix(k);
    for (std::size_t i = 0; i < k; ++i) y_prefix.set(i, sys.obs.y.get(i));

    std::vector<double> prefix_b(sys.obs.b.begin(), sys.obs.b.begin() + k);
    std::vector<double> prefix_gamma(sys.obs.gamma.begin(), sys.obs.gamma.begin() + k);

    InfoPatternIterator exact(prefix_b);
    QuerySchedule logistic(reliability_ranks(prefix_gamma));

    struct Held {
        GcdCandidate cand;
        std::uint64_t emitted;
    };
    // Weakest list member on top; equal-phi members are never displaced, so
    // the earliest emission wins ties.
    auto weaker = [](const Held& a, const Held& b2) {
        if (a.cand.log_phi != b2.cand.log_phi) return a.cand.log_phi > b2.cand.log_phi;
        return a.emitted < b2.emitted;
    };
    std::vector<Held> list;
    list.reserve(std::min<std::uint64_t>(opts.list_size, cap));

    GcdOutcome out;
    LogAccum acc_phi, acc_mass, acc_parity_mass;
    BitVec zk(k);

    while (out.num_patterns < cap) {
        double weight = 0.0;
        if (opts.order == GcdOrder::exact_posterior) {
            if (!exact.next(zk)) break;
            weight = exact.last_weight();
        } else {
            if (!logistic.next(zk)) break;
            for (std::uint64_t p : logistic.parts()) {
                weight += prefix_gamma[logistic.position_of_rank(p)];
            }
        }
        double log_prefix_mass = prefix_log1mb_sum - weight;
        if (opts.order == GcdOrder::exact_posterior && list.size() == opts.list_size &&
            log_prefix_mass + log_parity_max <= list.front().cand.log_phi) {
            // Prefix masses only fall from here on, so the list is final.
            break;
        }
        ++out.num_patterns;

        GcdCandidate cand;
        cand.z_prefix = zk;
        BitVec x_sys = sys.code.encode(zk ^ y_prefix);
        BitVec z_sys = x_sys ^ sys.obs.y;
        cand.log_phi = log_noise_effect_posterior(sys.obs, z_sys);
        cand.log_prefix_mass = log_prefix_mass;
        cand.prefix_mass = std::exp(cand.log_prefix_mass);
        bool target = (zk.parity() != 0) != y_parity;
        cand.psi_prime = 0.5 * (1.0 + (target ? -parity_prod : parity_prod));
        cand.x = unpermute(x_sys, sys.perm);
        cand.z = unpermute(z_sys, sys.perm);

        acc_phi.add_log(cand.log_phi);
        acc_mass.add_log(cand.log_prefix_mass);
        if (cand.psi_prime > 0.0) {
            acc_parity_mass.add_log(cand.log_prefix_mass + std::log(cand.psi_prime));
        }

        Held h{std::move(cand), out.num_patterns};
        if (list.size() < opts.list_size) {
            list.push_back(std::move(h));
            std::push_heap(list.begin(), list.end(), weaker);
        } else if (h.cand.log_phi > list.front().cand.log_phi) {
            std::pop_heap(list.begin(), list.end(), weaker);
            list.back() = std::move(h);
            std::push_heap(list.begin(), list.end(), weaker);
        }
    }

    std::sort(list.begin(), list.end(), [](const Held& a, const Held& b2) {
        if (a.cand.log_phi != b2.cand.log_phi) return a.cand.log_phi > b2.cand.log_phi;
        return a.emitted < b2.emitted;
    });
    out.candidates.reserve(list.size());
    for (auto& h : list) out.candidates.push_back(std::move(h.cand));
    out.cum_phi = acc_phi.sum();
    out.log_cum_phi = acc_phi.empty() ? -std::numeric_limits<double>::infinity()
                                      : acc_phi.log_sum();
    out.cum_prefix_mass = acc_mass.sum();
    out.cum_prefix_parity_mass = acc_parity_mass.sum();
    return out;
}

}  // namespace grandlab
