#include "grandlab/grand.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "grandlab/logsum.hpp"

namespace grandlab {

std::vector<std::size_t> reliability_ranks(const std::vector<double>& gamma) {
    std::vector<std::size_t> order(gamma.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&gamma](std::size_t a, std::size_t b) { return gamma[a] < gamma[b]; });
    std::vector<std::size_t> ranks(gamma.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r + 1;
    return ranks;
}

std::uint64_t logistic_weight(const BitVec& z, const std::vector<std::size_t>& ranks) {
    if (z.size() != ranks.size()) {
        throw std::invalid_argument("logistic_weight: size mismatch");
    }
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z.get(i)) w += ranks[i];
    }
    return w;
}

QuerySchedule::QuerySchedule(std::vector<std::size_t> ranks) : n_(ranks.size()) {
    pos_of_rank_.assign(n_, 0);
    std::vector<bool> seen(n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t r = ranks[i];
        if (r < 1 || r > n_ || seen[r - 1]) {
            throw std::invalid_argument("QuerySchedule: ranks must be a permutation of 1..n");
        }
        seen[r - 1] = true;
        pos_of_rank_[r - 1] = i;
    }
    w_max_ = static_cast<std::uint64_t>(n_) * (n_ + 1) / 2;
}

void QuerySchedule::set_parity_filter(bool odd_flip_count) {
    has_parity_filter_ = true;
    parity_target_ = odd_flip_count;
}

// Appends the reverse-lex-first partition of rem with parts <= bound, all
// distinct. Requires rem <= bound(bound+1)/2.
void QuerySchedule::fill_greedy(std::uint64_t rem, std::uint64_t bound) {
    while (rem > 0) {
        std::uint64_t v = std::min<std::uint64_t>(bound, rem);
        parts_.push_back(v);
        rem -= v;
        bound = v - 1;
    }
}

bool QuerySchedule::advance_partition() {
    if (!started_) {
        started_ = true;
        w_ = 0;
        parts_.clear();
        return true;  // empty partition, all-zero pattern
    }
    // Successor within the level: find the deepest part that can shrink by
    // one while the freed sum stays representable below it, then refill
    // greedily. v-1 feasible iff (v-1)v/2 >= rem; smaller values only lose
    // capacity, so a single check per frame suffices.
    std::uint64_t rem = 0;
    std::size_t i = parts_.size();
    while (i > 0) {
        --i;
        std::uint64_t v = parts_[i];
        rem += v;
        std::uint64_t vp = v - 1;
        if (vp >= 1 && vp * (vp + 1) / 2 >= rem) {
            parts_.resize(i);
            parts_.push_back(vp);
            fill_greedy(rem - vp, vp - 1);
            return true;
        }
    }
    // Level exhausted.
    if (w_ >= w_max_) return false;
    ++w_;
    parts_.clear();
    fill_greedy(w_, n_);
    return true;
}

bool QuerySchedule::advance() {
    for (;;) {
        if (!advance_partition()) return false;
        if (!has_parity_filter_) return true;
        if ((parts_.size() & 1u) == static_cast<std::size_t>(parity_target_)) return true;
    }
}

void QuerySchedule::emit(BitVec& z) const {
    if (z.size() != n_) z = BitVec(n_);
    z.clear();
    for (std::uint64_t p : parts_) z.set(pos_of_rank_[p - 1], true);
}

bool QuerySchedule::next(BitVec& z) {
    if (!advance()) return false;
    emit(z);
    return true;
}

std::uint64_t default_query_budget(std::size_t n) {
    if (n <= 20) return std::uint64_t{1} << n;
    return std::uint64_t{1} << 22;
}

DecodeOutcome grand_decode(const LinearCode& code, const Observation& obs,
                           const GrandOptions& opts) {
    if (opts.list_size < 1) throw std::invalid_argument("grand_decode: list_size must be >= 1");
    if (obs.n() != code.n()) throw std::invalid_argument("grand_decode: observation length mismatch");
    if (opts.even_filter && !code.is_even()) {
        throw std::invalid_argument("grand_decode: even_filter requires an even code");
    }
    std::size_t n = code.n();
    std::uint64_t q_max = opts.q_max ? opts.q_max : default_query_budget(n);

    std::vector<std::uint64_t> col_syndrome(n);
    {
        BitVec e(n);
        for (std::size_t i = 0; i < n; ++i) {
            e.set(i, true);
            col_syndrome[i] = code.syndrome(e);
            e.set(i, false);
        }
    }
    std::uint64_t target = code.syndrome(obs.y);
    bool y_parity = obs.y.parity() != 0;

    QuerySchedule schedule(reliability_ranks(obs.gamma));
    if (opts.even_filter) schedule.set_parity_filter(y_parity);

    DecodeOutcome out;
    LogAccum acc_all, acc_match, acc_tracked;
    BitVec z(n);
    bool level_finishing = false;
    std::uint64_t finish_level = 0;
    out.stop_reason = StopReason::query_budget;

    while (out.num_queries < q_max && schedule.advance()) {
        std::uint64_t w = schedule.weight();
        if (level_finishing && w > finish_level) {
            out.stop_reason = StopReason::level_complete;
            break;
        }
        ++out.num_queries;
        out.w_star = w;

        const auto& parts = schedule.parts();
        double log_phi = obs.log1mb_sum;
        std::uint64_t syn = 0;
        bool parity = parts.size() & 1u;
        for (std::uint64_t p : parts) {
            std::size_t pos = schedule.position_of_rank(p);
            log_phi -= obs.gamma[pos];
            syn ^= col_syndrome[pos];
        }

        acc_all.add_log(log_phi);
        bool match = parity == y_parity;
        if (match) acc_match.add_log(log_phi);
        if (!opts.tracked_constraints.empty()) {
            bool all_ok = true;
            for (const auto& [mask, want] : opts.tracked_constraints) {
                bool par = false;
                for (std::uint64_t p : parts) {
                    if (mask.get(schedule.position_of_rank(p))) par = !par;
                }
                if (par != want) {
                    all_ok = false;
                    break;
                }
            }
            if (all_ok) acc_tracked.add_log(log_phi);
        }

        if (syn == target && out.candidates.size() < opts.list_size) {
            schedule.emit(z);
            CandidateRecord rec;
            rec.x = z ^ obs.y;
            rec.query_index = out.num_queries;
            rec.log_phi = log_phi;
            rec.parity_match = match;
            out.candidates.push_back(std::move(rec));
            if (out.candidates.size() == opts.list_size) {
                if (opts.stop_policy == StopPolicy::list_full) {
                    out.stop_reason = StopReason::list_full;
                    break;
                }
                level_finishing = true;
                finish_level = w;
            }
        }
    }
    if (level_finishing && out.stop_reason == StopReason::query_budget &&
        out.num_queries < q_max) {
        // Schedule exhausted while finishing the last level.
        out.stop_reason = StopReason::level_complete;
    }

    out.cum_phi = acc_all.sum();
    out.cum_phi_matching = acc_match.sum();
    out.cum_phi_tracked = acc_tracked.sum();
    return out;
}

}  // namespace grandlab
