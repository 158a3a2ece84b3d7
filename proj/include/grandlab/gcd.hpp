// Guessing Codeword Decoding: enumerate information-prefix error patterns in
// non-increasing prefix posterior, re-encode each to a full codeword.
//
// Coordinates are permuted so the information set occupies positions 0..k-1;
// outputs are mapped back to the original order.
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "grandlab/bitvec.hpp"
#include "grandlab/channel.hpp"
#include "grandlab/linear_code.hpp"

namespace grandlab {

struct Systematized {
    LinearCode code;                 // info positions are 0..k-1
    Observation obs;                 // same permutation applied
    std::vector<std::size_t> perm;   // perm[new] = old
};

Observation permute_observation(const Observation& obs, const std::vector<std::size_t>& perm);

// v in permuted order -> original order.
BitVec unpermute(const BitVec& v, const std::vector<std::size_t>& perm);

Systematized systematize(const LinearCode& code, const Observation& obs);

// Emits all 2^k k-bit patterns in exactly non-increasing prefix posterior.
// Best-first frontier over flip sets of reliability-sorted coordinates; each
// set's successors are append-next-rank and shift-top-rank, which reach every
// set exactly once.
class InfoPatternIterator {
public:
    explicit InfoPatternIterator(const std::vector<double>& b);

    // false once all 2^k patterns have been emitted.
    bool next(BitVec& pattern);

    // Sum of gamma over flipped coordinates for the last pattern; the
    // pattern's log posterior is the all-zero log posterior minus this.
    double last_weight() const { return last_weight_; }

private:
    struct Node {
        double weight;
        std::uint64_t mask;  // over rank indices, bit r = flip of r-th least reliable
        bool operator>(const Node& o) const {
            if (weight != o.weight) return weight > o.weight;
            return mask > o.mask;
        }
    };

    std::size_t k_;
    std::vector<double> gamma_sorted_;     // ascending
    std::vector<std::size_t> pos_of_rank_;
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> frontier_;
    bool emitted_empty_ = false;
    double last_weight_ = 0.0;
};

enum class GcdOrder {
    exact_posterior,  // non-increasing prefix posterior (default)
    logistic_weight   // ORBGRAND-style schedule over the k prefix bits
};

struct GcdCandidate {
    BitVec x;             // codeword, original coordinate order
    BitVec z;             // full noise effect x xor y, original order
    BitVec z_prefix;      // k-bit info pattern, systematic order
    double log_phi;       // log p(z^n | r^n)
    double log_prefix_mass;
    double prefix_mass;   // p(z^k | r^k)
    double psi_prime;     // parity-bit completion probability for this prefix
};

struct GcdOutcome {
    // The L highest-phi codewords seen, phi descending; ties keep the earlier
    // emission. Under the exact order enumeration stops once no later prefix
    // can beat the weakest member, making this the true top-L list.
    std::vector<GcdCandidate> candidates;
    // Accumulators run over every evaluated pattern, list member or not;
    // every evaluated pattern is a codeword, so cum_phi accounts the full
    // codeword mass seen. log_cum_phi carries the same sum in log domain for
    // scoring when the masses underflow.
    double cum_phi = 0.0;
    double log_cum_phi = -std::numeric_limits<double>::infinity();
    double cum_prefix_mass = 0.0;
    double cum_prefix_parity_mass = 0.0;  // sum of prefix_mass * psi_prime
    std::uint64_t num_patterns = 0;       // patterns evaluated before stopping
};

struct GcdOptions {
    std::size_t list_size = 1;
    std::uint64_t p_max = 0;  // 0 = no cap beyond 2^k; the logistic order has
                              // no sound early stop and runs to this cap
    GcdOrder order = GcdOrder::exact_posterior;
};

GcdOutcome gcd_decode(const LinearCode& code, const Observation& obs, const GcdOptions& opts);

}  // namespace grandlab
