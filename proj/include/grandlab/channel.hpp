// BPSK over AWGN: modulation, LLR extraction, and noise-effect posteriors.
//
// Bit-to-symbol map is 0 -> +1, 1 -> -1, so LLR(r) = log f(r|1)/f(r|0)
// = -2 r / sigma^2 and positive r favors bit 0.
#pragma once

#include <cstddef>
#include <vector>

#include "grandlab/bitvec.hpp"
#include "grandlab/rng.hpp"

namespace grandlab {

struct ChannelParams {
    double eb_n0_db = 0.0;
    double rate = 1.0;
    double sigma = 1.0;  // noise std dev per real dimension
};

// One channel use: received reals and everything derived from them.
struct Observation {
    std::vector<double> r;      // received values
    std::vector<double> llr;    // log f(r|1)/f(r|0)
    std::vector<double> gamma;  // reliabilities |llr|
    BitVec y;                   // hard decisions
    std::vector<double> b;      // bit-error probabilities, clamped to (0, 1/2]

    std::vector<double> log1mb;  // log(1 - b), cached for posterior evaluation
    double log1mb_sum = 0.0;     // log of the all-zero noise-effect posterior

    std::size_t n() const { return r.size(); }
};

// sigma^2 = 1 / (2 * rate * 10^(eb_n0_db/10)), unit symbol energy.
ChannelParams awgn_params(double eb_n0_db, double rate);

std::vector<double> transmit(const BitVec& x, const ChannelParams& params, Rng& rng);

Observation demodulate(const std::vector<double>& r, double sigma);

// Observation with prescribed reliabilities and hard decisions (no reals drawn
// from a channel; r is back-filled as -llr/2). Used by the synthetic
// linear-reliability mode.
Observation observation_from_reliabilities(const std::vector<double>& gamma, const BitVec& y);

// log p(z | r) = sum log(1-B_i) - sum_{i: z_i=1} gamma_i
double log_noise_effect_posterior(const Observation& obs, const BitVec& z);

// p(z | r) per the per-bit independence factorization.
double noise_effect_posterior(const Observation& obs, const BitVec& z);

double log_codeword_likelihood(const Observation& obs, const BitVec& x);

// Proportional to f(r|x); equals the posterior of the noise effect x xor y.
double codeword_likelihood(const Observation& obs, const BitVec& x);

}  // namespace grandlab
