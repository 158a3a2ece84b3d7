#include "grandlab/partition_theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grandlab {

std::vector<PentagonalEntry> generalized_pentagonal(std::uint64_t limit) {
    if (limit < 1) throw std::invalid_argument("generalized_pentagonal: limit must be >= 1");
    std::vector<PentagonalEntry> out;
    for (std::int64_t k = 1;; ++k) {
        std::uint64_t lo = static_cast<std::uint64_t>(k) * (3 * k - 1) / 2;
        std::uint64_t hi = static_cast<std::uint64_t>(k) * (3 * k + 1) / 2;
        int sign = (k & 1) ? -1 : 1;
        if (lo > limit) break;
        out.push_back({lo, k, sign});
        if (hi <= limit) out.push_back({hi, k, sign});
    }
    return out;
}

ParityCountTable::ParityCountTable(std::size_t n, std::uint64_t w_cap) : n_(n) {
    if (n < 1) throw std::invalid_argument("ParityCountTable: n must be >= 1");
    w_max_ = std::min<std::uint64_t>(static_cast<std::uint64_t>(n) * (n + 1) / 2, w_cap);
    if (n > 64 && w_max_ > 10000) {
        throw std::invalid_argument("ParityCountTable: cap the weight range for n > 64");
    }
    even_.assign(w_max_ + 1, 0);
    odd_.assign(w_max_ + 1, 0);
    even_[0] = 1;
    // 0/1 knapsack over parts; adding part p flips the parity class.
    for (std::size_t p = 1; p <= n && p <= w_max_; ++p) {
        for (std::uint64_t w = w_max_; w >= p; --w) {
            std::int64_t e = even_[w - p];
            std::int64_t o = odd_[w - p];
            even_[w] += o;
            odd_[w] += e;
        }
    }
}

ParityCounts ParityCountTable::at(std::uint64_t w) const {
    ParityCounts pc;
    pc.w = w;
    pc.n = n_;
    if (w <= w_max_) {
        pc.rho0 = even_[w];
        pc.rho1 = odd_[w];
    }
    return pc;
}

std::int64_t ParityCountTable::diff(std::uint64_t w) const {
    return w <= w_max_ ? even_[w] - odd_[w] : 0;
}

ParityCounts partition_parity_counts(std::uint64_t w, std::size_t n) {
    ParityCountTable table(n, w);
    return table.at(w);
}

namespace {

double log_prod_1mb(const std::vector<double>& b) {
    double s = 0.0;
    for (double bi : b) s += std::log1p(-bi);
    return s;
}

double theta_log(std::uint64_t w, double beta, double lp) {
    return std::exp(lp - beta * static_cast<double>(w));
}

}  // namespace

double theta(std::uint64_t w, double beta, const std::vector<double>& b) {
    if (!(beta > 0.0)) throw std::invalid_argument("theta: beta must be positive");
    return theta_log(w, beta, log_prod_1mb(b));
}

double delta_observed(const DecodeOutcome& outcome, double psi) {
    return 2.0 * psi - 2.0 * outcome.cum_phi_matching - 1.0 + outcome.cum_phi;
}

double delta_closed_form(std::uint64_t w_star, double beta, const std::vector<double>& b,
                         std::size_t n, bool y_parity) {
    if (!(beta > 0.0)) throw std::invalid_argument("delta_closed_form: beta must be positive");
    ParityCountTable table(n);
    double lp = log_prod_1mb(b);
    double sum = 0.0;
    for (std::uint64_t w = table.w_max(); w > w_star; --w) {
        std::int64_t d = table.diff(w);
        if (d != 0) sum += theta_log(w, beta, lp) * static_cast<double>(d);
    }
    return y_parity ? -sum : sum;
}

double delta_bound(std::uint64_t w_star, double beta, const std::vector<double>& b,
                   std::size_t n) {
    if (!(beta > 0.0)) throw std::invalid_argument("delta_bound: beta must be positive");
    if (w_star > n) {
        throw std::domain_error("delta_bound: w_star exceeds n, premise does not hold");
    }
    ParityCountTable table(n);
    double lp = log_prod_1mb(b);
    double tail = 0.0;
    for (std::uint64_t w = table.w_max(); w > n; --w) {
        std::int64_t d = table.diff(w);
        if (d != 0) tail += theta_log(w, beta, lp) * static_cast<double>(d);
    }
    return 2.0 * theta_log(w_star, beta, lp) + std::fabs(tail);
}

double delta_bound_pentagonal(std::uint64_t w_star, double beta, const std::vector<double>& b,
                              std::size_t n) {
    if (!(beta > 0.0)) throw std::invalid_argument("delta_bound_pentagonal: beta must be positive");
    if (w_star > n) {
        throw std::domain_error("delta_bound_pentagonal: w_star exceeds n, premise does not hold");
    }
    ParityCountTable table(n);
    double lp = log_prod_1mb(b);
    double head = 0.0;
    std::size_t taken = 0;
    for (const auto& p : generalized_pentagonal(n)) {
        if (p.value <= w_star) continue;
        head += theta_log(p.value, beta, lp);
        if (++taken == 2) break;
    }
    double tail = 0.0;
    for (std::uint64_t w = table.w_max(); w > n; --w) {
        std::int64_t d = table.diff(w);
        if (d != 0) tail += theta_log(w, beta, lp) * static_cast<double>(d);
    }
    return head + std::fabs(tail);
}

double fit_beta(const std::vector<double>& gamma) {
    if (gamma.empty()) throw std::invalid_argument("fit_beta: empty input");
    std::vector<double> sorted = gamma;
    std::sort(sorted.begin(), sorted.end());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double rank = static_cast<double>(i + 1);
        num += rank * sorted[i];
        den += rank * rank;
    }
    return num / den;
}

}  // namespace grandlab
