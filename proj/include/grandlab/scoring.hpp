// Brier score, calibration/refinement split, BLER, and the BS ratio.
//
// A forecast record is (s, o): the decoder's claimed correctness probability
// and whether the decoding actually was correct.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace grandlab {

struct ForecastRecord {
    double s = 0.0;
    int o = 0;  // 1 = decoded word equals the transmitted word
};

double brier_score(const std::vector<ForecastRecord>& records);

double bler(const std::vector<ForecastRecord>& records);

// bs / reference_bler with the reference the lowest BLER among compared
// decoders at the same SNR. A zero reference leaves the ratio undefined (NaN).
double bsr(double bs, double reference_bler);

// Maps forecasts to cells: either an explicit finite value set (s must lie on
// a value) or equal-width bins over [0,1] represented by midpoints.
class Quantizer {
public:
    static Quantizer values(std::vector<double> vals);
    static Quantizer uniform_bins(std::size_t count);

    std::size_t cells() const;
    std::size_t cell(double s) const;
    double representative(std::size_t cell) const;

private:
    Quantizer() = default;
    std::vector<double> values_;  // sorted; empty = uniform mode
    std::size_t bins_ = 0;
};

struct Decomposition {
    double calibration = 0.0;
    double refinement = 0.0;
};

// calibration = sum_cells v (rep - rho)^2, refinement = sum_cells v rho (1 - rho);
// their sum equals the Brier score of the quantized forecasts exactly.
Decomposition brier_decomposition(const std::vector<ForecastRecord>& records,
                                  const Quantizer& quantizer);

struct CalibrationRow {
    double center = 0.0;    // bin midpoint
    double v = 0.0;         // empirical frequency of the bin
    double rho = 0.0;       // conditional accuracy within the bin
    std::uint64_t count = 0;
};

// Equal-width bins over [0,1]; empty bins are omitted.
std::vector<CalibrationRow> calibration_table(const std::vector<ForecastRecord>& records,
                                              std::size_t bins);

// Streaming per-shard scorer; shards merge associatively, so parallel and
// serial runs aggregate identically.
class ScoreAccumulator {
public:
    explicit ScoreAccumulator(std::size_t bins = 100);

    void add(double s, int o);
    void merge(const ScoreAccumulator& other);

    std::uint64_t count() const { return n_; }
    double brier() const;
    double bler() const;
    Decomposition decomposition() const;
    std::vector<CalibrationRow> table() const;

private:
    std::size_t bins_;
    std::uint64_t n_ = 0;
    double sq_err_ = 0.0;
    std::uint64_t errors_ = 0;
    std::vector<std::uint64_t> cell_count_;
    std::vector<std::uint64_t> cell_correct_;
};

}  // namespace grandlab
