// ORBGRAND: noise effects guessed in non-decreasing Logistic Weight order.
//
// W(z) = sum over flipped positions of the bit's reliability rank (1 = least
// reliable). Patterns at weight w correspond one-to-one with partitions of w
// into distinct parts at most n, so a schedule that walks every partition of
// every level emits each n-bit pattern exactly once.
#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "grandlab/bitvec.hpp"
#include "grandlab/channel.hpp"
#include "grandlab/linear_code.hpp"

namespace grandlab {

// ranks[i] = reliability rank of position i, 1 = smallest gamma. Ties broken
// by position index so schedules are deterministic.
std::vector<std::size_t> reliability_ranks(const std::vector<double>& gamma);

std::uint64_t logistic_weight(const BitVec& z, const std::vector<std::size_t>& ranks);

// Emits all 2^n noise effects in non-decreasing Logistic Weight. Within a
// level, partitions are emitted largest-first-part first (reverse
// lexicographic on the descending part sequence).
class QuerySchedule {
public:
    explicit QuerySchedule(std::vector<std::size_t> ranks);

    // Restrict emissions to patterns whose flip count has the given parity.
    void set_parity_filter(bool odd_flip_count);

    // Moves to the next pattern; false once all patterns have been emitted.
    bool advance();

    // Parts (= flipped ranks, descending) of the current partition.
    const std::vector<std::uint64_t>& parts() const { return parts_; }

    std::uint64_t weight() const { return w_; }

    std::size_t position_of_rank(std::uint64_t rank) const { return pos_of_rank_[rank - 1]; }

    // Materializes the current pattern.
    void emit(BitVec& z) const;

    // advance() + emit(); the usual query loop.
    bool next(BitVec& z);

private:
    bool advance_partition();
    void fill_greedy(std::uint64_t rem, std::uint64_t bound);

    std::size_t n_;
    std::vector<std::size_t> pos_of_rank_;
    std::vector<std::uint64_t> parts_;
    std::uint64_t w_ = 0;
    std::uint64_t w_max_ = 0;
    bool started_ = false;
    bool has_parity_filter_ = false;
    bool parity_target_ = false;
};

enum class StopPolicy {
    list_full,      // stop at the query that completes the list
    level_complete  // finish the Logistic-Weight level of the final hit
};

enum class StopReason { list_full, level_complete, query_budget };

struct CandidateRecord {
    BitVec x;                  // codeword y xor z
    std::uint64_t query_index; // 1-based position in the query sequence
    double log_phi;            // log p(z | r)
    bool parity_match;         // flip-count parity of z equals parity of y
};

struct DecodeOutcome {
    std::vector<CandidateRecord> candidates;
    double cum_phi = 0.0;           // posterior mass of every queried pattern
    double cum_phi_matching = 0.0;  // same, restricted to parity-matching patterns
    double cum_phi_tracked = 0.0;   // same, restricted to patterns satisfying all tracked constraints
    std::uint64_t num_queries = 0;
    std::uint64_t w_star = 0;       // weight level of the last query
    StopReason stop_reason = StopReason::query_budget;

    std::vector<std::pair<BitVec, double>> scored_list() const {
        std::vector<std::pair<BitVec, double>> out;
        out.reserve(candidates.size());
        for (const auto& c : candidates) out.emplace_back(c.x, c.log_phi);
        return out;
    }
};

struct GrandOptions {
    std::size_t list_size = 1;
    std::uint64_t q_max = 0;  // 0 = 2^n for n <= 20, else 2^22
    StopPolicy stop_policy = StopPolicy::list_full;
    bool even_filter = false;  // skip queries whose flip-count parity differs from y's

    // Extra parity constraints to accumulate mass over: (coordinate mask,
    // target parity). Feeds the multi-constraint soft output.
    std::vector<std::pair<BitVec, bool>> tracked_constraints;
};

std::uint64_t default_query_budget(std::size_t n);

DecodeOutcome grand_decode(const LinearCode& code, const Observation& obs,
                           const GrandOptions& opts);

}  // namespace grandlab
