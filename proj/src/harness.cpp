#include "grandlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "grandlab/channel.hpp"
#include "grandlab/partition_theory.hpp"
#include "grandlab/rng.hpp"
#include "grandlab/soft_output.hpp"

namespace grandlab {

const char* to_string(DecoderKind d) {
    switch (d) {
        case DecoderKind::grand: return "grand";
        case DecoderKind::grand_even_filter: return "grand_even_filter";
        case DecoderKind::gcd: return "gcd";
        case DecoderKind::ml: return "ml";
    }
    return "?";
}

const char* to_string(SoMethod m) {
    switch (m) {
        case SoMethod::naive: return "naive";
        case SoMethod::forney: return "forney";
        case SoMethod::so_grand: return "so_grand";
        case SoMethod::so_grand_even: return "so_grand_even";
        case SoMethod::so_gcd: return "so_gcd";
        case SoMethod::so_gcd_even: return "so_gcd_even";
        case SoMethod::map: return "map";
    }
    return "?";
}

bool decoder_from_string(const std::string& s, DecoderKind& out) {
    for (DecoderKind d : {DecoderKind::grand, DecoderKind::grand_even_filter, DecoderKind::gcd,
                          DecoderKind::ml}) {
        if (s == to_string(d)) {
            out = d;
            return true;
        }
    }
    return false;
}

bool so_method_from_string(const std::string& s, SoMethod& out) {
    for (SoMethod m : {SoMethod::naive, SoMethod::forney, SoMethod::so_grand,
                       SoMethod::so_grand_even, SoMethod::so_gcd, SoMethod::so_gcd_even,
                       SoMethod::map}) {
        if (s == to_string(m)) {
            out = m;
            return true;
        }
    }
    return false;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool parse_u64(const std::string& v, std::uint64_t& out) {
    try {
        std::size_t pos = 0;
        out = std::stoull(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

bool parse_double(const std::string& v, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

bool parse_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        out = false;
        return true;
    }
    return false;
}

bool is_grand_family(DecoderKind d) {
    return d == DecoderKind::grand || d == DecoderKind::grand_even_filter;
}

bool combo_supported(DecoderKind d, SoMethod m, bool even, std::size_t list_size) {
    switch (m) {
        case SoMethod::naive:
        case SoMethod::map:
            return true;
        case SoMethod::forney:
            return d != DecoderKind::ml && list_size >= 2;
        case SoMethod::so_grand:
            return is_grand_family(d);
        case SoMethod::so_grand_even:
            return is_grand_family(d) && even;
        case SoMethod::so_gcd:
            return d == DecoderKind::gcd;
        case SoMethod::so_gcd_even:
            return d == DecoderKind::gcd && even;
    }
    return false;
}

}  // namespace

ConfigResult parse_config(std::istream& in) {
    ConfigResult res;
    std::string line;
    int lineno = 0;
    auto err = [&res, &lineno](const std::string& msg) {
        res.errors.push_back("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            err("expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            err("empty value for '" + key + "'");
            continue;
        }
        ExperimentConfig& c = res.cfg;
        if (key == "code") {
            c.code_spec = value;
        } else if (key == "decoder" || key == "decoders") {
            c.decoders.clear();
            for (const auto& tok : split_list(value)) {
                DecoderKind d;
                if (decoder_from_string(tok, d)) {
                    c.decoders.push_back(d);
                } else {
                    err("unknown decoder '" + tok + "'");
                }
            }
        } else if (key == "so_method" || key == "so_methods") {
            c.so_methods.clear();
            for (const auto& tok : split_list(value)) {
                SoMethod m;
                if (so_method_from_string(tok, m)) {
                    c.so_methods.push_back(m);
                } else {
                    err("unknown so_method '" + tok + "'");
                }
            }
        } else if (key == "list_size" || key == "L") {
            std::uint64_t u;
            if (parse_u64(value, u) && u >= 1) {
                c.list_size = static_cast<std::size_t>(u);
            } else {
                err("list_size must be a positive integer");
            }
        } else if (key == "eb_n0_grid") {
            c.eb_n0_grid.clear();
            for (const auto& tok : split_list(value)) {
                double d;
                if (parse_double(tok, d)) {
                    c.eb_n0_grid.push_back(d);
                } else {
                    err("bad Eb/N0 value '" + tok + "'");
                }
            }
        } else if (key == "trials") {
            if (!parse_u64(value, c.trials)) err("trials must be a nonnegative integer");
        } else if (key == "master_seed" || key == "seed") {
            if (!parse_u64(value, c.master_seed)) err("seed must be an unsigned integer");
        } else if (key == "stop_policy") {
            if (value == "list_full") {
                c.stop_policy = StopPolicy::list_full;
            } else if (value == "level_complete") {
                c.stop_policy = StopPolicy::level_complete;
            } else {
                err("stop_policy must be list_full or level_complete");
            }
        } else if (key == "q_max") {
            if (!parse_u64(value, c.q_max)) err("q_max must be an unsigned integer");
        } else if (key == "decomposition_bins") {
            std::uint64_t u;
            if (parse_u64(value, u) && u >= 1) {
                c.decomposition_bins = static_cast<std::size_t>(u);
            } else {
                err("decomposition_bins must be a positive integer");
            }
        } else if (key == "delta_diagnostics") {
            if (!parse_bool(value, c.delta_diagnostics)) err("delta_diagnostics must be a boolean");
        } else if (key == "per_trial_log") {
            if (!parse_bool(value, c.per_trial_log)) err("per_trial_log must be a boolean");
        } else if (key == "synthetic_linear_beta") {
            if (!parse_double(value, c.synthetic_linear_beta)) {
                err("synthetic_linear_beta must be a real number");
            }
        } else if (key == "gcd_order") {
            if (value == "exact_posterior" || value == "exact") {
                c.gcd_order = GcdOrder::exact_posterior;
            } else if (value == "logistic_weight" || value == "logistic") {
                c.gcd_order = GcdOrder::logistic_weight;
            } else {
                err("gcd_order must be exact_posterior or logistic_weight");
            }
        } else if (key == "workers") {
            std::uint64_t u;
            if (parse_u64(value, u)) {
                c.workers = static_cast<std::size_t>(u);
            } else {
                err("workers must be an unsigned integer");
            }
        } else {
            err("unknown key '" + key + "'");
        }
    }
    return res;
}

ConfigResult load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult res;
        res.errors.push_back("cannot open config file: " + path);
        return res;
    }
    return parse_config(in);
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
    std::vector<std::string> errs;
    std::optional<LinearCode> code;
    try {
        code = resolve_code(cfg.code_spec);
    } catch (const std::exception& e) {
        errs.push_back(std::string("code: ") + e.what());
    }
    if (cfg.decoders.empty()) errs.push_back("at least one decoder is required");
    if (cfg.so_methods.empty()) errs.push_back("at least one so_method is required");
    if (cfg.eb_n0_grid.empty()) errs.push_back("eb_n0_grid must be nonempty");
    if (cfg.list_size < 1) errs.push_back("list_size must be >= 1");
    if (cfg.decomposition_bins < 1) errs.push_back("decomposition_bins must be >= 1");
    if (cfg.synthetic_linear_beta < 0.0) errs.push_back("synthetic_linear_beta must be >= 0");

    for (std::size_t i = 0; i < cfg.decoders.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.decoders.size(); ++j) {
            if (cfg.decoders[i] == cfg.decoders[j]) {
                errs.push_back(std::string("decoder '") + to_string(cfg.decoders[i]) +
                               "' listed twice");
            }
        }
    }
    for (std::size_t i = 0; i < cfg.so_methods.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.so_methods.size(); ++j) {
            if (cfg.so_methods[i] == cfg.so_methods[j]) {
                errs.push_back(std::string("so_method '") + to_string(cfg.so_methods[i]) +
                               "' listed twice");
            }
        }
    }

    bool has_forney = std::find(cfg.so_methods.begin(), cfg.so_methods.end(), SoMethod::forney) !=
                      cfg.so_methods.end();
    if (has_forney && cfg.list_size < 2) {
        errs.push_back("forney requires list_size >= 2; a single-candidate list degenerates to "
                       "the naive forecaster");
    }

    bool wants_map = std::find(cfg.so_methods.begin(), cfg.so_methods.end(), SoMethod::map) !=
                     cfg.so_methods.end();
    bool has_ml = std::find(cfg.decoders.begin(), cfg.decoders.end(), DecoderKind::ml) !=
                  cfg.decoders.end();
    bool has_plain_grand = std::find(cfg.decoders.begin(), cfg.decoders.end(),
                                     DecoderKind::grand) != cfg.decoders.end();

    if (code) {
        bool even = code->is_even();
        auto needs_even = [&errs, even](bool used, const char* what) {
            if (used && !even) {
                errs.push_back(std::string(what) + " requires an even code");
            }
        };
        needs_even(std::find(cfg.decoders.begin(), cfg.decoders.end(),
                             DecoderKind::grand_even_filter) != cfg.decoders.end(),
                   "decoder grand_even_filter");
        needs_even(std::find(cfg.so_methods.begin(), cfg.so_methods.end(),
                             SoMethod::so_grand_even) != cfg.so_methods.end(),
                   "so_method so_grand_even");
        needs_even(std::find(cfg.so_methods.begin(), cfg.so_methods.end(),
                             SoMethod::so_gcd_even) != cfg.so_methods.end(),
                   "so_method so_gcd_even");
        if ((wants_map || has_ml) && code->k() > kEnumerationLimit) {
            errs.push_back("map oracle requires k <= " + std::to_string(kEnumerationLimit));
        }
        if ((wants_map || has_ml) && code->n() > 64) {
            errs.push_back("map oracle requires n <= 64");
        }
        for (SoMethod m : cfg.so_methods) {
            bool any = false;
            for (DecoderKind d : cfg.decoders) {
                if (combo_supported(d, m, even, cfg.list_size)) any = true;
            }
            if (!any && !cfg.decoders.empty()) {
                errs.push_back(std::string("so_method '") + to_string(m) +
                               "' is not applicable to any configured decoder");
            }
        }
    }
    if (cfg.delta_diagnostics && !has_plain_grand) {
        errs.push_back("delta_diagnostics requires the plain grand decoder");
    }
    return errs;
}

namespace {

struct Combo {
    DecoderKind decoder;
    SoMethod method;
    std::size_t decoder_idx;
};

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    {
        auto errs = validate_config(cfg);
        if (!errs.empty()) {
            std::string joined;
            for (const auto& e : errs) {
                if (!joined.empty()) joined += "; ";
                joined += e;
            }
            throw std::invalid_argument("invalid config: " + joined);
        }
    }
    const LinearCode code = resolve_code(cfg.code_spec);
    const std::size_t n = code.n();
    const std::size_t k = code.k();
    const bool even = code.is_even();
    const double rate = static_cast<double>(k) / static_cast<double>(n);

    std::vector<Combo> combos;
    for (std::size_t di = 0; di < cfg.decoders.size(); ++di) {
        for (SoMethod m : cfg.so_methods) {
            if (combo_supported(cfg.decoders[di], m, even, cfg.list_size)) {
                combos.push_back({cfg.decoders[di], m, di});
            }
        }
    }

    bool need_map = std::find(cfg.so_methods.begin(), cfg.so_methods.end(), SoMethod::map) !=
                        cfg.so_methods.end() ||
                    std::find(cfg.decoders.begin(), cfg.decoders.end(), DecoderKind::ml) !=
                        cfg.decoders.end();
    const std::vector<BitVec> codebook = need_map ? code.codewords() : std::vector<BitVec>{};

    std::size_t diag_decoder_idx = cfg.decoders.size();
    if (cfg.delta_diagnostics) {
        for (std::size_t di = 0; di < cfg.decoders.size(); ++di) {
            if (cfg.decoders[di] == DecoderKind::grand) {
                diag_decoder_idx = di;
                break;
            }
        }
    }

    const std::size_t NC = combos.size();
    const std::size_t ND = cfg.decoders.size();
    RunResult result;

    for (std::size_t ip = 0; ip < cfg.eb_n0_grid.size(); ++ip) {
        const double eb = cfg.eb_n0_grid[ip];
        const ChannelParams params = awgn_params(eb, rate);
        const std::uint64_t trials = cfg.trials;

        std::vector<double> sbuf(trials * NC, 0.0);
        std::vector<std::uint8_t> obuf(trials * NC, 0);
        std::vector<std::uint64_t> qbuf(trials * ND, 0);
        std::vector<DiagRow> dbuf(cfg.delta_diagnostics ? trials : 0);

        auto run_trial = [&](std::uint64_t t) {
            Rng rng(derive_seed(cfg.master_seed, ip, t));
            BitVec u(k);
            for (std::size_t i = 0; i < k; ++i) u.set(i, rng.next_bool());
            const BitVec x = code.encode(u);

            Observation obs;
            if (cfg.synthetic_linear_beta > 0.0) {
                // Exact linear reliabilities over a random rank assignment;
                // hard decisions drawn from the implied error probabilities.
                std::vector<std::size_t> order(n);
                std::iota(order.begin(), order.end(), std::size_t{0});
                for (std::size_t i = n - 1; i > 0; --i) {
                    std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
                    std::swap(order[i], order[j]);
                }
                std::vector<double> gamma(n);
                for (std::size_t r = 0; r < n; ++r) {
                    gamma[order[r]] = cfg.synthetic_linear_beta * static_cast<double>(r + 1);
                }
                BitVec z(n);
                for (std::size_t i = 0; i < n; ++i) {
                    double bi = 1.0 / (1.0 + std::exp(gamma[i]));
                    z.set(i, rng.next_double() < bi);
                }
                obs = observation_from_reliabilities(gamma, x ^ z);
            } else {
                obs = demodulate(transmit(x, params, rng), params.sigma);
            }

            const double psi = gallager_parity_prob(obs.b, obs.y.parity() != 0);
            SoftDecision map_sd;
            if (need_map) map_sd = so_map(code, obs, codebook);

            std::size_t ci = 0;
            for (std::size_t di = 0; di < ND; ++di) {
                const DecoderKind d = cfg.decoders[di];
                DecodeOutcome grand_out;
                GcdOutcome gcd_out;
                std::vector<std::pair<BitVec, double>> list;
                std::uint64_t queries = 0;
                if (is_grand_family(d)) {
                    GrandOptions o;
                    o.list_size = cfg.list_size;
                    o.q_max = cfg.q_max;
                    o.stop_policy = cfg.stop_policy;
                    o.even_filter = d == DecoderKind::grand_even_filter;
                    grand_out = grand_decode(code, obs, o);
                    queries = grand_out.num_queries;
                    list = grand_out.scored_list();
                } else if (d == DecoderKind::gcd) {
                    GcdOptions o;
                    o.list_size = cfg.list_size;
                    o.order = cfg.gcd_order;
                    gcd_out = gcd_decode(code, obs, o);
                    queries = gcd_out.num_patterns;
                    list.reserve(gcd_out.candidates.size());
                    for (const auto& c : gcd_out.candidates) list.emplace_back(c.x, c.log_phi);
                } else {
                    queries = codebook.size();
                }
                qbuf[t * ND + di] = queries;

                std::size_t best = 0;
                for (std::size_t i = 1; i < list.size(); ++i) {
                    if (list[i].second > list[best].second) best = i;
                }
                const bool has_list = !list.empty();

                for (SoMethod m : cfg.so_methods) {
                    if (!combo_supported(d, m, even, cfg.list_size)) continue;
                    double s = 0.0;
                    int o = 0;
                    switch (m) {
                        case SoMethod::naive:
                            s = 1.0;
                            if (d == DecoderKind::ml) {
                                o = map_sd.chosen == x;
                            } else {
                                o = has_list && list[best].first == x;
                            }
                            break;
                        case SoMethod::map:
                            s = map_sd.s;
                            o = map_sd.chosen == x;
                            break;
                        case SoMethod::forney:
                            if (has_list) {
                                SoftDecision sd = so_forney(list);
                                s = sd.s;
                                o = sd.chosen == x;
                            }
                            break;
                        case SoMethod::so_grand:
                            if (has_list) {
                                SoftDecision sd = so_grand(grand_out, code);
                                s = sd.s;
                                o = sd.chosen == x;
                            }
                            break;
                        case SoMethod::so_grand_even:
                            if (has_list) {
                                SoftDecision sd = so_grand_even(grand_out, psi, code);
                                s = sd.s;
                                o = sd.chosen == x;
                            }
                            break;
                        case SoMethod::so_gcd:
                            if (has_list) {
                                SoftDecision sd = so_gcd(gcd_out, code, false, 0.0);
                                s = sd.s;
                                o = sd.chosen == x;
                            }
                            break;
                        case SoMethod::so_gcd_even:
                            if (has_list) {
                                SoftDecision sd = so_gcd(gcd_out, code, true, psi);
                                s = sd.s;
                                o = sd.chosen == x;
                            }
                            break;
                    }
                    sbuf[t * NC + ci] = s;
                    obuf[t * NC + ci] = static_cast<std::uint8_t>(o);
                    ++ci;
                }

                if (cfg.delta_diagnostics && di == diag_decoder_idx) {
                    DiagRow dr;
                    dr.trial = t;
                    dr.eb_n0_db = eb;
                    dr.w_star = grand_out.w_star;
                    dr.beta = cfg.synthetic_linear_beta > 0.0 ? cfg.synthetic_linear_beta
                                                              : fit_beta(obs.gamma);
                    dr.delta_observed = delta_observed(grand_out, psi);
                    dr.qualified = grand_out.stop_reason == StopReason::level_complete &&
                                   grand_out.candidates.size() == cfg.list_size &&
                                   grand_out.w_star <= n;
                    dr.delta_bound = dr.qualified
                                         ? delta_bound(grand_out.w_star, dr.beta, obs.b, n)
                                         : std::numeric_limits<double>::quiet_NaN();
                    dbuf[t] = dr;
                }
            }
        };

        std::size_t workers = cfg.workers ? cfg.workers
                                          : std::max(1u, std::thread::hardware_concurrency());
        if (trials > 0 && workers > trials) workers = static_cast<std::size_t>(trials);
        if (workers <= 1 || trials == 0) {
            for (std::uint64_t t = 0; t < trials; ++t) run_trial(t);
        } else {
            std::atomic<std::uint64_t> next{0};
            std::mutex err_mtx;
            std::exception_ptr err;
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&]() {
                    for (;;) {
                        std::uint64_t t = next.fetch_add(1);
                        if (t >= trials) return;
                        try {
                            run_trial(t);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(err_mtx);
                            if (!err) err = std::current_exception();
                            return;
                        }
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (err) std::rethrow_exception(err);
        }

        // Sequential reduction in trial order.
        std::vector<ScoreAccumulator> acc(NC, ScoreAccumulator(cfg.decomposition_bins));
        for (std::uint64_t t = 0; t < trials; ++t) {
            for (std::size_t ci = 0; ci < NC; ++ci) {
                acc[ci].add(sbuf[t * NC + ci], obuf[t * NC + ci]);
            }
        }
        if (cfg.per_trial_log) {
            for (std::uint64_t t = 0; t < trials; ++t) {
                for (std::size_t ci = 0; ci < NC; ++ci) {
                    TrialRow row;
                    row.trial = t;
                    row.eb_n0_db = eb;
                    row.decoder = combos[ci].decoder;
                    row.so_method = combos[ci].method;
                    row.s = sbuf[t * NC + ci];
                    row.o = obuf[t * NC + ci];
                    row.num_queries = qbuf[t * ND + combos[ci].decoder_idx];
                    if (cfg.delta_diagnostics && combos[ci].decoder_idx == diag_decoder_idx) {
                        row.has_delta = true;
                        row.delta = dbuf[t].delta_observed;
                        row.delta_bound = dbuf[t].delta_bound;
                    }
                    result.trials.push_back(row);
                }
            }
        }
        if (cfg.delta_diagnostics) {
            result.diag.insert(result.diag.end(), dbuf.begin(), dbuf.end());
        }

        if (trials > 0) {
            double ref = std::numeric_limits<double>::infinity();
            for (const auto& a : acc) ref = std::min(ref, a.bler());
            for (std::size_t ci = 0; ci < NC; ++ci) {
                SummaryRow row;
                row.eb_n0_db = eb;
                row.decoder = combos[ci].decoder;
                row.so_method = combos[ci].method;
                row.list_size = cfg.list_size;
                row.trials = trials;
                row.bler = acc[ci].bler();
                row.bs = acc[ci].brier();
                Decomposition d = acc[ci].decomposition();
                row.bs_calibration = d.calibration;
                row.bs_refinement = d.refinement;
                row.bsr = bsr(row.bs, ref);
                result.summary.push_back(row);
            }
        }
    }
    return result;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "eb_n0_db,decoder,so_method,L,trials,bler,bs,bs_calibration,bs_refinement,bsr\n";
    for (const auto& r : rows) {
        out << format_double(r.eb_n0_db) << ',' << to_string(r.decoder) << ','
            << to_string(r.so_method) << ',' << r.list_size << ',' << r.trials << ','
            << format_double(r.bler) << ',' << format_double(r.bs) << ','
            << format_double(r.bs_calibration) << ',' << format_double(r.bs_refinement) << ','
            << format_double(r.bsr) << '\n';
    }
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

}  // namespace

void emit_results(const RunResult& result, const ExperimentConfig& cfg,
                  const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir);
    fs::path dir(out_dir);

    {
        auto f = open_out(dir / "summary.csv");
        write_summary_csv(result.summary, f);
        if (!f.good()) throw std::runtime_error("write failure in summary.csv");
    }

    // One plot series per (decoder, method), in order of first appearance.
    std::vector<std::pair<DecoderKind, SoMethod>> series;
    for (const auto& r : result.summary) {
        std::pair<DecoderKind, SoMethod> key{r.decoder, r.so_method};
        if (std::find(series.begin(), series.end(), key) == series.end()) series.push_back(key);
    }
    for (const auto& [dec, met] : series) {
        std::string name = std::string("plot_") + to_string(dec) + "_" + to_string(met) + ".dat";
        auto f = open_out(dir / name);
        f << "# eb_n0_db bs\n";
        for (const auto& r : result.summary) {
            if (r.decoder == dec && r.so_method == met) {
                f << format_double(r.eb_n0_db) << ' ' << format_double(r.bs) << '\n';
            }
        }
    }

    if (cfg.per_trial_log) {
        auto f = open_out(dir / "trials.jsonl");
        for (const auto& r : result.trials) {
            nlohmann::ordered_json j;
            j["trial"] = r.trial;
            j["eb_n0_db"] = r.eb_n0_db;
            j["decoder"] = to_string(r.decoder);
            j["so_method"] = to_string(r.so_method);
            j["s"] = r.s;
            j["o"] = r.o;
            j["num_queries"] = r.num_queries;
            if (r.has_delta && !std::isnan(r.delta)) {
                j["delta"] = r.delta;
            } else {
                j["delta"] = nullptr;
            }
            if (r.has_delta && !std::isnan(r.delta_bound)) {
                j["delta_bound"] = r.delta_bound;
            } else {
                j["delta_bound"] = nullptr;
            }
            f << j.dump() << '\n';
        }
    }

    if (cfg.delta_diagnostics) {
        auto f = open_out(dir / "diag.csv");
        f << "trial,eb_n0_db,w_star,beta,delta_observed,delta_bound,qualified\n";
        for (const auto& r : result.diag) {
            f << r.trial << ',' << format_double(r.eb_n0_db) << ',' << r.w_star << ','
              << format_double(r.beta) << ',' << format_double(r.delta_observed) << ','
              << format_double(r.delta_bound) << ',' << (r.qualified ? 1 : 0) << '\n';
        }
    }
}

std::vector<TrialRow> load_trial_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trial log: " + path);
    std::vector<TrialRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("trial log line " + std::to_string(lineno) + ": " + e.what());
        }
        TrialRow r;
        r.trial = j.at("trial").get<std::uint64_t>();
        r.eb_n0_db = j.at("eb_n0_db").get<double>();
        if (!decoder_from_string(j.at("decoder").get<std::string>(), r.decoder)) {
            throw std::runtime_error("trial log line " + std::to_string(lineno) +
                                     ": unknown decoder");
        }
        if (!so_method_from_string(j.at("so_method").get<std::string>(), r.so_method)) {
            throw std::runtime_error("trial log line " + std::to_string(lineno) +
                                     ": unknown so_method");
        }
        r.s = j.at("s").get<double>();
        r.o = j.at("o").get<int>();
        r.num_queries = j.value("num_queries", std::uint64_t{0});
        if (j.contains("delta") && !j["delta"].is_null()) {
            r.has_delta = true;
            r.delta = j["delta"].get<double>();
            r.delta_bound = j.contains("delta_bound") && !j["delta_bound"].is_null()
                                ? j["delta_bound"].get<double>()
                                : std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<SummaryRow> rescore_trials(const std::vector<TrialRow>& rows, std::size_t bins,
                                       std::size_t list_size) {
    struct Key {
        double eb;
        DecoderKind d;
        SoMethod m;
        bool operator==(const Key& o) const { return eb == o.eb && d == o.d && m == o.m; }
    };
    std::vector<Key> keys;
    std::vector<ScoreAccumulator> acc;
    for (const auto& r : rows) {
        Key key{r.eb_n0_db, r.decoder, r.so_method};
        std::size_t idx = 0;
        for (; idx < keys.size(); ++idx) {
            if (keys[idx] == key) break;
        }
        if (idx == keys.size()) {
            keys.push_back(key);
            acc.emplace_back(bins);
        }
        acc[idx].add(r.s, r.o);
    }
    std::vector<SummaryRow> out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        double ref = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < keys.size(); ++j) {
            if (keys[j].eb == keys[i].eb) ref = std::min(ref, acc[j].bler());
        }
        SummaryRow row;
        row.eb_n0_db = keys[i].eb;
        row.decoder = keys[i].d;
        row.so_method = keys[i].m;
        row.list_size = list_size;
        row.trials = acc[i].count();
        row.bler = acc[i].bler();
        row.bs = acc[i].brier();
        Decomposition d = acc[i].decomposition();
        row.bs_calibration = d.calibration;
        row.bs_refinement = d.refinement;
        row.bsr = bsr(row.bs, ref);
        out.push_back(row);
    }
    return out;
}

}  // namespace grandlab
