#include "grandlab/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace grandlab {

ChannelParams awgn_params(double eb_n0_db, double rate) {
    if (!(rate > 0.0) || rate > 1.0) {
        throw std::invalid_argument("awgn_params: rate must be in (0, 1]");
    }
    ChannelParams p;
    p.eb_n0_db = eb_n0_db;
    p.rate = rate;
    double eb_n0 = std::pow(10.0, eb_n0_db / 10.0);
    p.sigma = std::sqrt(1.0 / (2.0 * rate * eb_n0));
    return p;
}

std::vector<double> transmit(const BitVec& x, const ChannelParams& params, Rng& rng) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = x.get(i) ? -1.0 : 1.0;
        r[i] = s + params.sigma * rng.next_gaussian();
    }
    return r;
}

namespace {

void finish_observation(Observation& obs) {
    std::size_t n = obs.llr.size();
    obs.gamma.resize(n);
    obs.b.resize(n);
    obs.log1mb.resize(n);
    obs.y = BitVec(n);
    obs.log1mb_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double l = obs.llr[i];
        obs.y.set(i, l > 0.0);
        double g = std::fabs(l);
        obs.gamma[i] = g;
        // B = 1 / (1 + e^gamma); the clamp keeps log/division finite.
        double b = 1.0 / (1.0 + std::exp(g));
        if (b < 1e-300) b = 1e-300;
        if (b > 0.5) b = 0.5;
        obs.b[i] = b;
        obs.log1mb[i] = -std::log1p(std::exp(-g));
        obs.log1mb_sum += obs.log1mb[i];
    }
}

}  // namespace

Observation demodulate(const std::vector<double>& r, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("demodulate: sigma must be positive");
    }
    Observation obs;
    obs.r = r;
    obs.llr.resize(r.size());
    double scale = -2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < r.size(); ++i) {
        obs.llr[i] = scale * r[i];
    }
    finish_observation(obs);
    return obs;
}

Observation observation_from_reliabilities(const std::vector<double>& gamma, const BitVec& y) {
    if (gamma.size() != y.size()) {
        throw std::invalid_argument("observation_from_reliabilities: size mismatch");
    }
    Observation obs;
    obs.llr.resize(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (gamma[i] < 0.0) {
            throw std::invalid_argument("observation_from_reliabilities: negative reliability");
        }
        obs.llr[i] = y.get(i) ? gamma[i] : -gamma[i];
    }
    obs.r.resize(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        obs.r[i] = -0.5 * obs.llr[i];
    }
    finish_observation(obs);
    // Reliabilities of exactly zero make the hard decision arbitrary; keep
    // the caller's choice of y rather than the llr sign.
    obs.y = y;
    return obs;
}

double log_noise_effect_posterior(const Observation& obs, const BitVec& z) {
    double lp = obs.log1mb_sum;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z.get(i)) lp -= obs.gamma[i];
    }
    return lp;
}

double noise_effect_posterior(const Observation& obs, const BitVec& z) {
    return std::exp(log_noise_effect_posterior(obs, z));
}

double log_codeword_likelihood(const Observation& obs, const BitVec& x) {
    return log_noise_effect_posterior(obs, x ^ obs.y);
}

double codeword_likelihood(const Observation& obs, const BitVec& x) {
    return std::exp(log_codeword_likelihood(obs, x));
}

}  // namespace grandlab
