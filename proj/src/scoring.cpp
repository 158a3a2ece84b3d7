#include "grandlab/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace grandlab {

namespace {

void require_nonempty(const std::vector<ForecastRecord>& records) {
    if (records.empty()) throw std::invalid_argument("scoring: empty record set");
}

void require_valid(const ForecastRecord& r) {
    if (!(r.s >= 0.0) || r.s > 1.0 || (r.o != 0 && r.o != 1)) {
        throw std::invalid_argument("scoring: record outside domain");
    }
}

}  // namespace

double brier_score(const std::vector<ForecastRecord>& records) {
    require_nonempty(records);
    double acc = 0.0;
    for (const auto& r : records) {
        require_valid(r);
        double d = r.s - r.o;
        acc += d * d;
    }
    return acc / static_cast<double>(records.size());
}

double bler(const std::vector<ForecastRecord>& records) {
    require_nonempty(records);
    std::uint64_t errs = 0;
    for (const auto& r : records) {
        require_valid(r);
        errs += r.o == 0;
    }
    return static_cast<double>(errs) / static_cast<double>(records.size());
}

double bsr(double bs, double reference_bler) {
    if (reference_bler < 0.0) throw std::invalid_argument("bsr: negative reference");
    if (reference_bler == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return bs / reference_bler;
}

Quantizer Quantizer::values(std::vector<double> vals) {
    if (vals.empty()) throw std::invalid_argument("Quantizer: empty value set");
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    Quantizer q;
    q.values_ = std::move(vals);
    return q;
}

Quantizer Quantizer::uniform_bins(std::size_t count) {
    if (count < 1) throw std::invalid_argument("Quantizer: need at least one bin");
    Quantizer q;
    q.bins_ = count;
    return q;
}

std::size_t Quantizer::cells() const { return values_.empty() ? bins_ : values_.size(); }

std::size_t Quantizer::cell(double s) const {
    if (values_.empty()) {
        auto c = static_cast<std::size_t>(s * static_cast<double>(bins_));
        return c >= bins_ ? bins_ - 1 : c;
    }
    auto it = std::lower_bound(values_.begin(), values_.end(), s);
    std::size_t idx = static_cast<std::size_t>(it - values_.begin());
    if (idx == values_.size() || (idx > 0 && s - values_[idx - 1] < values_[idx] - s)) --idx;
    if (std::fabs(values_[idx] - s) > 1e-12) {
        throw std::invalid_argument("Quantizer: forecast not on a quantizer value");
    }
    return idx;
}

double Quantizer::representative(std::size_t cell) const {
    if (values_.empty()) return (static_cast<double>(cell) + 0.5) / static_cast<double>(bins_);
    return values_[cell];
}

Decomposition brier_decomposition(const std::vector<ForecastRecord>& records,
                                  const Quantizer& quantizer) {
    require_nonempty(records);
    std::vector<std::uint64_t> count(quantizer.cells(), 0);
    std::vector<std::uint64_t> correct(quantizer.cells(), 0);
    for (const auto& r : records) {
        require_valid(r);
        std::size_t c = quantizer.cell(r.s);
        ++count[c];
        correct[c] += static_cast<std::uint64_t>(r.o);
    }
    double n = static_cast<double>(records.size());
    Decomposition d;
    for (std::size_t c = 0; c < count.size(); ++c) {
        if (count[c] == 0) continue;
        double v = static_cast<double>(count[c]) / n;
        double rho = static_cast<double>(correct[c]) / static_cast<double>(count[c]);
        double rep = quantizer.representative(c);
        d.calibration += v * (rep - rho) * (rep - rho);
        d.refinement += v * rho * (1.0 - rho);
    }
    return d;
}

std::vector<CalibrationRow> calibration_table(const std::vector<ForecastRecord>& records,
                                              std::size_t bins) {
    require_nonempty(records);
    Quantizer q = Quantizer::uniform_bins(bins);
    std::vector<std::uint64_t> count(bins, 0);
    std::vector<std::uint64_t> correct(bins, 0);
    for (const auto& r : records) {
        require_valid(r);
        std::size_t c = q.cell(r.s);
        ++count[c];
        correct[c] += static_cast<std::uint64_t>(r.o);
    }
    std::vector<CalibrationRow> rows;
    double n = static_cast<double>(records.size());
    for (std::size_t c = 0; c < bins; ++c) {
        if (count[c] == 0) continue;
        CalibrationRow row;
        row.center = q.representative(c);
        row.v = static_cast<double>(count[c]) / n;
        row.rho = static_cast<double>(correct[c]) / static_cast<double>(count[c]);
        row.count = count[c];
        rows.push_back(row);
    }
    return rows;
}

ScoreAccumulator::ScoreAccumulator(std::size_t bins) : bins_(bins) {
    if (bins < 1) throw std::invalid_argument("ScoreAccumulator: need at least one bin");
    cell_count_.assign(bins, 0);
    cell_correct_.assign(bins, 0);
}

void ScoreAccumulator::add(double s, int o) {
    ForecastRecord r{s, o};
    require_valid(r);
    ++n_;
    double d = s - o;
    sq_err_ += d * d;
    errors_ += o == 0;
    auto c = static_cast<std::size_t>(s * static_cast<double>(bins_));
    if (c >= bins_) c = bins_ - 1;
    ++cell_count_[c];
    cell_correct_[c] += static_cast<std::uint64_t>(o);
}

void ScoreAccumulator::merge(const ScoreAccumulator& other) {
    if (other.bins_ != bins_) throw std::invalid_argument("ScoreAccumulator: bin mismatch");
    n_ += other.n_;
    sq_err_ += other.sq_err_;
    errors_ += other.errors_;
    for (std::size_t c = 0; c < bins_; ++c) {
        cell_count_[c] += other.cell_count_[c];
        cell_correct_[c] += other.cell_correct_[c];
    }
}

double ScoreAccumulator::brier() const {
    if (n_ == 0) throw std::logic_error("ScoreAccumulator: no records");
    return sq_err_ / static_cast<double>(n_);
}

double ScoreAccumulator::bler() const {
    if (n_ == 0) throw std::logic_error("ScoreAccumulator: no records");
    return static_cast<double>(errors_) / static_cast<double>(n_);
}

Decomposition ScoreAccumulator::decomposition() const {
    if (n_ == 0) throw std::logic_error("ScoreAccumulator: no records");
    Decomposition d;
    double n = static_cast<double>(n_);
    for (std::size_t c = 0; c < bins_; ++c) {
        if (cell_count_[c] == 0) continue;
        double v = static_cast<double>(cell_count_[c]) / n;
        double rho = static_cast<double>(cell_correct_[c]) / static_cast<double>(cell_count_[c]);
        double rep = (static_cast<double>(c) + 0.5) / static_cast<double>(bins_);
        d.calibration += v * (rep - rho) * (rep - rho);
        d.refinement += v * rho * (1.0 - rho);
    }
    return d;
}

std::vector<CalibrationRow> ScoreAccumulator::table() const {
    std::vector<CalibrationRow> rows;
    double n = static_cast<double>(n_);
    for (std::size_t c = 0; c < bins_; ++c) {
        if (cell_count_[c] == 0) continue;
        CalibrationRow row;
        row.center = (static_cast<double>(c) + 0.5) / static_cast<double>(bins_);
        row.v = static_cast<double>(cell_count_[c]) / n;
        row.rho = static_cast<double>(cell_correct_[c]) / static_cast<double>(cell_count_[c]);
        row.count = cell_count_[c];
        rows.push_back(row);
    }
    return rows;
}

}  // namespace grandlab
