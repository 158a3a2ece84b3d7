// Experiment orchestration: seeded Monte-Carlo sweeps over an Eb/N0 grid,
// one decode per decoder per trial, every requested soft-output method scored
// on the same decode, aggregation into CSV/plot rows.
//
// Outputs are a pure function of the config: per-trial seeds derive from
// (master_seed, point index, trial index), trials write into preallocated
// slots, and reduction happens in trial order, so worker count never shows.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "grandlab/gcd.hpp"
#include "grandlab/grand.hpp"
#include "grandlab/scoring.hpp"

namespace grandlab {

enum class DecoderKind { grand, grand_even_filter, gcd, ml };
enum class SoMethod { naive, forney, so_grand, so_grand_even, so_gcd, so_gcd_even, map };

const char* to_string(DecoderKind d);
const char* to_string(SoMethod m);
bool decoder_from_string(const std::string& s, DecoderKind& out);
bool so_method_from_string(const std::string& s, SoMethod& out);

struct ExperimentConfig {
    std::string code_spec = "ebch_16_11";
    std::vector<DecoderKind> decoders{DecoderKind::grand};
    std::vector<SoMethod> so_methods{SoMethod::naive};
    std::size_t list_size = 1;
    std::vector<double> eb_n0_grid{0.0};
    std::uint64_t trials = 1000;
    std::uint64_t master_seed = 1;
    StopPolicy stop_policy = StopPolicy::list_full;
    std::uint64_t q_max = 0;  // 0 = decoder default
    std::size_t decomposition_bins = 100;
    bool delta_diagnostics = false;
    bool per_trial_log = false;
    double synthetic_linear_beta = 0.0;  // > 0 replaces the channel by Gamma_i = beta * rank_i
    GcdOrder gcd_order = GcdOrder::exact_posterior;
    std::size_t workers = 0;  // 0 = hardware concurrency
};

struct ConfigResult {
    ExperimentConfig cfg;
    std::vector<std::string> errors;  // parse problems; empty = parsed clean
};

// Flat key = value lines, # comments, comma-separated lists.
ConfigResult parse_config(std::istream& in);
ConfigResult load_config(const std::string& path);

// Semantic checks, all failures reported together.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

struct SummaryRow {
    double eb_n0_db = 0.0;
    DecoderKind decoder = DecoderKind::grand;
    SoMethod so_method = SoMethod::naive;
    std::size_t list_size = 0;
    std::uint64_t trials = 0;
    double bler = 0.0;
    double bs = 0.0;
    double bs_calibration = 0.0;
    double bs_refinement = 0.0;
    double bsr = 0.0;  // NaN when no reference error was observed
};

struct TrialRow {
    std::uint64_t trial = 0;
    double eb_n0_db = 0.0;
    DecoderKind decoder = DecoderKind::grand;
    SoMethod so_method = SoMethod::naive;
    double s = 0.0;
    int o = 0;
    std::uint64_t num_queries = 0;
    bool has_delta = false;
    double delta = 0.0;
    double delta_bound = 0.0;
};

struct DiagRow {
    std::uint64_t trial = 0;
    double eb_n0_db = 0.0;
    std::uint64_t w_star = 0;
    double beta = 0.0;
    double delta_observed = 0.0;
    double delta_bound = 0.0;  // NaN when not qualified
    bool qualified = false;    // level completed, list filled, w_star <= n
};

struct RunResult {
    std::vector<SummaryRow> summary;
    std::vector<TrialRow> trials;  // populated when per_trial_log
    std::vector<DiagRow> diag;     // populated when delta_diagnostics
};

RunResult run_experiment(const ExperimentConfig& cfg);

// summary.csv, plot_<decoder>_<method>.dat, optional trials.jsonl and
// diag.csv, all under out_dir.
void emit_results(const RunResult& result, const ExperimentConfig& cfg,
                  const std::string& out_dir);

std::vector<TrialRow> load_trial_log(const std::string& path);

// Rebuilds summary rows from logged records (list size is not logged and is
// echoed from the argument).
std::vector<SummaryRow> rescore_trials(const std::vector<TrialRow>& rows, std::size_t bins,
                                       std::size_t list_size);

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

// "%.17g" with NaN normalized to "nan"; round-trips doubles exactly.
std::string format_double(double v);

}  // namespace grandlab
