#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "grandlab/harness.hpp"
#include "grandlab/linear_code.hpp"
#include "grandlab/partition_theory.hpp"

namespace {

using namespace grandlab;

void print_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
    write_summary_csv(rows, out);
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, bool have_seed,
              std::uint64_t seed, bool have_workers, int workers, bool have_trials,
              long long trials) {
    ConfigResult loaded = load_config(config_path);
    if (!loaded.errors.empty()) {
        for (const auto& e : loaded.errors) std::cerr << "config: " << e << "\n";
        return loaded.errors.size() == 1 && loaded.errors[0].rfind("cannot open", 0) == 0 ? 3 : 2;
    }
    if ((have_workers && workers < 0) || (have_trials && trials < 0)) {
        std::cerr << "config: overrides must be >= 0\n";
        return 2;
    }
    ExperimentConfig cfg = loaded.cfg;
    if (have_seed) cfg.master_seed = seed;
    if (have_workers) cfg.workers = static_cast<std::size_t>(workers);
    if (have_trials) cfg.trials = static_cast<std::uint64_t>(trials);
    auto errs = validate_config(cfg);
    if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << "config: " << e << "\n";
        return 2;
    }
    RunResult result = run_experiment(cfg);
    emit_results(result, cfg, out_dir);
    print_summary(result.summary, std::cout);
    std::cerr << "wrote " << out_dir << "/summary.csv\n";
    return 0;
}

int cmd_score(const std::string& log_path, const std::string& out_dir, std::size_t bins,
              std::size_t list_size) {
    auto rows = load_trial_log(log_path);
    auto summary = rescore_trials(rows, bins, list_size);
    if (out_dir.empty()) {
        print_summary(summary, std::cout);
    } else {
        RunResult r;
        r.summary = summary;
        ExperimentConfig cfg;
        cfg.per_trial_log = false;
        cfg.delta_diagnostics = false;
        emit_results(r, cfg, out_dir);
        std::cerr << "wrote " << out_dir << "/summary.csv\n";
    }
    return 0;
}

int cmd_diag(std::size_t n, std::uint64_t w_max, const std::string& config_path,
             const std::string& out_dir) {
    if (!config_path.empty()) {
        ConfigResult loaded = load_config(config_path);
        if (!loaded.errors.empty()) {
            for (const auto& e : loaded.errors) std::cerr << "config: " << e << "\n";
            return loaded.errors.size() == 1 && loaded.errors[0].rfind("cannot open", 0) == 0 ? 3
                                                                                              : 2;
        }
        ExperimentConfig cfg = loaded.cfg;
        cfg.delta_diagnostics = true;
        auto errs = validate_config(cfg);
        if (!errs.empty()) {
            for (const auto& e : errs) std::cerr << "config: " << e << "\n";
            return 2;
        }
        RunResult result = run_experiment(cfg);
        if (!out_dir.empty()) emit_results(result, cfg, out_dir);
        std::uint64_t qualified = 0;
        std::uint64_t within = 0;
        double max_abs = 0.0;
        for (const auto& d : result.diag) {
            if (!d.qualified) continue;
            ++qualified;
            double a = std::abs(d.delta_observed);
            if (a <= d.delta_bound) ++within;
            if (a > max_abs) max_abs = a;
        }
        std::cout << "trials " << result.diag.size() << "\n"
                  << "qualified " << qualified << "\n"
                  << "within_bound " << within << "\n"
                  << "max_abs_delta " << format_double(max_abs) << "\n";
        return 0;
    }
    std::cout << "pentagonal numbers up to " << w_max << ":";
    for (const auto& p : generalized_pentagonal(w_max)) {
        std::cout << ' ' << p.value << (p.sign > 0 ? "(+)" : "(-)");
    }
    std::cout << "\n";
    std::uint64_t cap = std::min<std::uint64_t>(w_max, n * (n + 1) / 2);
    ParityCountTable table(n, cap);
    std::cout << "w,rho0,rho1,diff\n";
    for (std::uint64_t w = 0; w <= cap; ++w) {
        ParityCounts c = table.at(w);
        std::cout << w << ',' << c.rho0 << ',' << c.rho1 << ',' << table.diff(w) << "\n";
    }
    return 0;
}

int cmd_codeinfo(const std::string& spec) {
    LinearCode code = resolve_code(spec);
    std::cout << "n " << code.n() << "\n"
              << "k " << code.k() << "\n";
    if (code.k() <= kEnumerationLimit) {
        std::cout << "d " << code.min_distance() << "\n";
    } else {
        std::cout << "d unknown (k too large to enumerate)\n";
    }
    std::cout << "even " << (code.is_even() ? "true" : "false") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GRAND/GCD soft-output decoding experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    std::uint64_t seed = 0;
    bool have_seed = false;
    int workers = -1;
    bool have_workers = false;
    long long trials = -1;
    bool have_trials = false;

    auto* sweep = app.add_subcommand("sweep", "run a configured Monte-Carlo sweep");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--seed", seed, "master seed override")
        ->each([&](const std::string&) { have_seed = true; });
    sweep->add_option("--workers", workers, "worker thread count override")
        ->each([&](const std::string&) { have_workers = true; });
    sweep->add_option("--trials", trials, "trials-per-point override")
        ->each([&](const std::string&) { have_trials = true; });

    std::string log_path;
    std::string score_out;
    std::size_t bins = 100;
    std::size_t list_size = 0;
    auto* score = app.add_subcommand("score", "re-score a per-trial log");
    score->add_option("--log", log_path, "trials.jsonl path")->required();
    score->add_option("--out", score_out, "output directory (default: CSV to stdout)");
    score->add_option("--bins", bins, "decomposition bins");
    score->add_option("--list-size", list_size, "list size to echo into the summary");

    std::size_t diag_n = 16;
    std::uint64_t diag_w_max = 40;
    std::string diag_config;
    std::string diag_out;
    auto* diag = app.add_subcommand("diag", "partition parity tables and bound reports");
    diag->add_option("--n", diag_n, "block length for the parity count table");
    diag->add_option("--w-max", diag_w_max, "largest weight to tabulate");
    diag->add_option("--config", diag_config, "run this config with diagnostics and summarize");
    diag->add_option("--out", diag_out, "output directory for the diagnostic run");

    std::string code_spec;
    auto* codeinfo = app.add_subcommand("codeinfo", "print code parameters");
    codeinfo->add_option("--code", code_spec, "built-in name or generator file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) {
            return cmd_sweep(config_path, out_dir, have_seed, seed, have_workers, workers,
                             have_trials, trials);
        }
        if (score->parsed()) return cmd_score(log_path, score_out, bins, list_size);
        if (diag->parsed()) return cmd_diag(diag_n, diag_w_max, diag_config, diag_out);
        if (codeinfo->parsed()) return cmd_codeinfo(code_spec);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
