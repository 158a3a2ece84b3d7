// Python veneer over the decoding core: code inspection, single decodes with
// soft output, scoring, and whole config runs. Thin by design; the simulation
// loop stays in C++.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grandlab/channel.hpp"
#include "grandlab/gcd.hpp"
#include "grandlab/grand.hpp"
#include "grandlab/harness.hpp"
#include "grandlab/linear_code.hpp"
#include "grandlab/scoring.hpp"
#include "grandlab/soft_output.hpp"

namespace py = pybind11;
using namespace grandlab;

namespace {

std::vector<int> to_ints(const BitVec& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.get(i) ? 1 : 0;
    return out;
}

BitVec to_bits(const std::vector<int>& v) {
    BitVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0 && v[i] != 1) throw std::invalid_argument("bits must be 0 or 1");
        out.set(i, v[i] == 1);
    }
    return out;
}

py::dict code_info(const std::string& spec) {
    const LinearCode code = resolve_code(spec);
    py::dict d;
    d["n"] = code.n();
    d["k"] = code.k();
    d["d"] = code.min_distance();
    d["even"] = code.is_even();
    return d;
}

std::vector<int> encode(const std::string& spec, const std::vector<int>& info_bits) {
    const LinearCode code = resolve_code(spec);
    if (info_bits.size() != code.k()) {
        throw std::invalid_argument("expected " + std::to_string(code.k()) + " info bits");
    }
    return to_ints(code.encode(to_bits(info_bits)));
}

// llr[i] = log f(r|1)/f(r|0); the observation is rebuilt at unit sigma so the
// given LLRs are reproduced exactly.
py::dict decode(const std::string& spec, const std::vector<double>& llr,
                const std::string& decoder, const std::string& so_method,
                std::size_t list_size) {
    const LinearCode code = resolve_code(spec);
    if (llr.size() != code.n()) {
        throw std::invalid_argument("expected " + std::to_string(code.n()) + " LLRs");
    }
    DecoderKind d;
    if (!decoder_from_string(decoder, d)) {
        throw std::invalid_argument("unknown decoder '" + decoder + "'");
    }
    SoMethod m;
    if (!so_method_from_string(so_method, m)) {
        throw std::invalid_argument("unknown so_method '" + so_method + "'");
    }
    if (list_size == 0) throw std::invalid_argument("list_size must be >= 1");

    const bool grand_family = d == DecoderKind::grand || d == DecoderKind::grand_even_filter;
    switch (m) {
        case SoMethod::naive:
        case SoMethod::map:
            break;
        case SoMethod::forney:
            if (d == DecoderKind::ml) {
                throw std::invalid_argument("forney is not applicable to the ml decoder");
            }
            if (list_size < 2) throw std::invalid_argument("forney requires list_size >= 2");
            break;
        case SoMethod::so_grand:
        case SoMethod::so_grand_even:
            if (!grand_family) {
                throw std::invalid_argument("'" + so_method + "' needs a grand decoder");
            }
            break;
        case SoMethod::so_gcd:
        case SoMethod::so_gcd_even:
            if (d != DecoderKind::gcd) {
                throw std::invalid_argument("'" + so_method + "' needs the gcd decoder");
            }
            break;
    }

    std::vector<double> r(llr.size());
    for (std::size_t i = 0; i < llr.size(); ++i) r[i] = -llr[i] / 2.0;
    const Observation obs = demodulate(r, 1.0);
    const double psi = gallager_parity_prob(obs.b, obs.y.parity() != 0);

    DecodeOutcome grand_out;
    GcdOutcome gcd_out;
    std::vector<std::pair<BitVec, double>> list;
    std::uint64_t queries = 0;
    if (grand_family) {
        GrandOptions o;
        o.list_size = list_size;
        o.even_filter = d == DecoderKind::grand_even_filter;
        grand_out = grand_decode(code, obs, o);
        queries = grand_out.num_queries;
        list = grand_out.scored_list();
    } else if (d == DecoderKind::gcd) {
        GcdOptions o;
        o.list_size = list_size;
        gcd_out = gcd_decode(code, obs, o);
        queries = gcd_out.num_patterns;
        for (const auto& c : gcd_out.candidates) list.emplace_back(c.x, c.log_phi);
    } else {
        queries = std::size_t{1} << code.k();
    }

    SoftDecision sd;
    switch (m) {
        case SoMethod::naive: {
            if (d == DecoderKind::ml) {
                sd = so_map(code, obs);
            } else {
                if (list.empty()) throw std::runtime_error("decoder returned no candidates");
                sd = so_forney(list);
            }
            sd.s = 1.0;
            sd.per_candidate_s.clear();
            sd.method = "naive";
            break;
        }
        case SoMethod::map:
            sd = so_map(code, obs);
            break;
        case SoMethod::forney:
            sd = so_forney(list);
            break;
        case SoMethod::so_grand:
            sd = so_grand(grand_out, code);
            break;
        case SoMethod::so_grand_even:
            sd = so_grand_even(grand_out, psi, code);
            break;
        case SoMethod::so_gcd:
            sd = so_gcd(gcd_out, code, false, 0.0);
            break;
        case SoMethod::so_gcd_even:
            sd = so_gcd(gcd_out, code, true, psi);
            break;
    }

    py::dict out;
    out["bits"] = to_ints(sd.chosen);
    out["s"] = sd.s;
    out["method"] = sd.method;
    out["queries"] = queries;
    out["per_candidate_s"] = sd.per_candidate_s;
    return out;
}

std::vector<ForecastRecord> to_records(const std::vector<std::pair<double, int>>& pairs) {
    std::vector<ForecastRecord> recs(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) recs[i] = {pairs[i].first, pairs[i].second};
    return recs;
}

double brier(const std::vector<std::pair<double, int>>& pairs) {
    return brier_score(to_records(pairs));
}

py::dict decomposition(const std::vector<std::pair<double, int>>& pairs, std::size_t bins) {
    const Decomposition d = brier_decomposition(to_records(pairs), Quantizer::uniform_bins(bins));
    py::dict out;
    out["calibration"] = d.calibration;
    out["refinement"] = d.refinement;
    return out;
}

py::list run_config(const std::string& text, std::size_t workers) {
    std::istringstream in(text);
    ConfigResult parsed = parse_config(in);
    std::vector<std::string> errors = parsed.errors;
    if (errors.empty()) errors = validate_config(parsed.cfg);
    if (!errors.empty()) {
        std::string joined;
        for (const auto& e : errors) {
            if (!joined.empty()) joined += "; ";
            joined += e;
        }
        throw std::invalid_argument(joined);
    }
    if (workers > 0) parsed.cfg.workers = workers;
    const RunResult r = run_experiment(parsed.cfg);
    py::list rows;
    for (const auto& row : r.summary) {
        py::dict d;
        d["eb_n0_db"] = row.eb_n0_db;
        d["decoder"] = std::string(to_string(row.decoder));
        d["so_method"] = std::string(to_string(row.so_method));
        d["L"] = row.list_size;
        d["trials"] = row.trials;
        d["bler"] = row.bler;
        d["bs"] = row.bs;
        d["bs_calibration"] = row.bs_calibration;
        d["bs_refinement"] = row.bs_refinement;
        d["bsr"] = row.bsr;
        rows.append(d);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Guessing-based list decoding with blockwise soft output";
    mod.def("code_info", &code_info, py::arg("code"),
            "Length, dimension, minimum distance, and evenness of a named code.");
    mod.def("encode", &encode, py::arg("code"), py::arg("info_bits"),
            "Systematic encoding; info bits land on the code's info positions.");
    mod.def("decode", &decode, py::arg("code"), py::arg("llr"), py::arg("decoder") = "grand",
            py::arg("so_method") = "so_grand", py::arg("list_size") = std::size_t{1},
            "One decode from per-bit LLRs (log f(r|1)/f(r|0)); returns the chosen "
            "codeword bits, its correctness probability s, and the query count.");
    mod.def("brier_score", &brier, py::arg("records"),
            "Mean squared error of (s, outcome) forecast pairs.");
    mod.def("brier_decomposition", &decomposition, py::arg("records"), py::arg("bins") = 100,
            "Calibration and refinement of quantized forecasts; the two sum to the "
            "Brier score of the quantized values.");
    mod.def("run_config", &run_config, py::arg("text"), py::arg("workers") = std::size_t{0},
            "Run a sweep from config text (same flat key = value format as the CLI) "
            "and return the summary rows as dicts.");
}
