// Copyright 2026 The tbfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TBFUSION_REPORT_HPP
#define TBFUSION_REPORT_HPP

/// JSON and CSV reports. Numbers outside the config echo are rounded to 12
/// significant digits; wall-clock time is never written, so equal
/// (config, seed) pairs give byte-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tbfusion/experiment.hpp"

namespace tbfusion {

inline constexpr const char* kSeedScheme =
    "trial i draws from mt19937_64 seeded with derive_seed(seed, stream, i), a splitmix64 counter split; "
    "stream 0 = experiment trials, 1 = network runs, 2 = calibration starts";

/// Output directory or file could not be written (exit code 3 at the CLI).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline void round_numbers(Json& j) {
    if (j.is_number_float()) {
        j = round12(j.get<double>());
    } else if (j.is_structured()) {
        for (auto& [k, v] : j.items()) {
            if (k != "config") round_numbers(v);
        }
    }
}

inline std::string dump(Json j) {
    round_numbers(j);
    return j.dump(2) + "\n";
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

namespace detail {

inline Json counts_json(const CorrelationCell& c) {
    return {{"++", c.counts[0]}, {"+-", c.counts[1]}, {"-+", c.counts[2]}, {"--", c.counts[3]}};
}

/// Pairs reported for a condition: all scheduled ones, ZZ only after a failure.
inline bool reported(Condition c, BasisPair p) { return c != Condition::Phi || p == BasisPair{Basis::Z, Basis::Z}; }

inline Json witness_json(BellTarget target, double zz, double xx, double yy, std::optional<double> sigma) {
    auto w = witness_fidelity(zz, xx, yy, target);
    Json j{{"target", target == BellTarget::PsiPlus ? "psi_plus" : "psi_minus"},
           {"raw", w.raw},
           {"value", w.value},
           {"clamped", w.clamped}};
    if (sigma) {
        j["sigma"] = *sigma;
        j["verdict"] = to_string(entanglement_verdict(w.value, *sigma));
    }
    return j;
}

inline std::optional<BellTarget> target_of(Condition c) {
    if (c == Condition::PsiPlus) return BellTarget::PsiPlus;
    if (c == Condition::PsiMinus) return BellTarget::PsiMinus;
    return std::nullopt;
}

}  // namespace detail

inline Json experiment_report(const RunConfig& cfg, const ExperimentResult& res, const AnalyticResult& exact) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "experiment";
    j["seed"] = res.seed;
    j["seed_scheme"] = kSeedScheme;
    j["config"] = to_json(cfg);
    j["shots"] = res.shots;
    Json alloc = Json::array();
    for (const auto& [p, n] : res.allocation) alloc.push_back({{"pair", p.str()}, {"shots", n}});
    j["allocation"] = alloc;

    Json counts = Json::object(), freqs = Json::object();
    std::uint64_t successes = 0;
    for (const auto& [k, v] : res.table.outcome_counts) {
        counts[k] = v;
        freqs[k] = static_cast<double>(v) / static_cast<double>(res.shots);
        if (k == "psi+" || k == "psi-") successes += v;
    }
    double f = static_cast<double>(successes) / static_cast<double>(res.shots);
    j["outcomes"] = {{"counts", counts},
                     {"frequencies", freqs},
                     {"success_frequency", f},
                     {"success_sigma", std::sqrt(f * (1 - f) / static_cast<double>(res.shots))}};

    Json conds = Json::array();
    for (Condition c : kConditions) {
        Json cj;
        cj["condition"] = to_string(c);
        std::uint64_t heralds = 0;
        Json corr = Json::array();
        for (const auto& [p, n] : res.allocation) {
            if (!detail::reported(c, p)) continue;
            auto it = res.table.cells.find({c, p});
            CorrelationCell cell = it == res.table.cells.end() ? CorrelationCell{} : it->second;
            heralds += cell.total();
            Json e{{"pair", p.str()}, {"counts", detail::counts_json(cell)}, {"n", cell.total()}};
            if (cell.total() > 0) {
                e["expectation"] = cell.expectation();
                e["sigma"] = cell.sigma();
            }
            corr.push_back(e);
        }
        cj["heralds"] = heralds;
        cj["correlations"] = corr;

        Json stabs = Json::array();
        std::map<Basis, Estimate> diag;
        for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
            auto s = stabilizer_sign(c, b);
            BasisPair p{b, b};
            if (!s || !res.table.has(c, p)) continue;
            auto est = res.table.estimate(c, p);
            diag[b] = est;
            stabs.push_back({{"pair", p.str()},
                             {"sign", *s},
                             {"expectation", est.value},
                             {"sigma", est.sigma},
                             {"error_rate", error_rate(est.value, *s)},
                             {"error_rate_sigma", error_rate_sigma(est.sigma)}});
        }
        cj["stabilizers"] = stabs;
        if (auto t = detail::target_of(c); t && diag.size() == 3) {
            cj["witness"] = detail::witness_json(
                *t, diag[Basis::Z].value, diag[Basis::X].value, diag[Basis::Y].value,
                witness_sigma(diag[Basis::Z].sigma, diag[Basis::X].sigma, diag[Basis::Y].sigma));
        }
        conds.push_back(cj);
    }
    j["conditions"] = conds;

    Json aj;
    aj["outcome_probabilities"] = exact.outcome_probabilities;
    Json ac = Json::array();
    for (Condition c : kConditions) {
        Json cj{{"condition", to_string(c)}, {"probability", exact.condition_probabilities.at(c)}};
        Json stabs = Json::array();
        bool complete = true;
        for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
            auto s = stabilizer_sign(c, b);
            auto it = exact.expectations.find({c, BasisPair{b, b}});
            if (!s) continue;
            if (it == exact.expectations.end()) {
                complete = false;
                continue;
            }
            stabs.push_back({{"pair", std::string{to_char(b), to_char(b)}},
                             {"expectation", it->second},
                             {"error_rate", error_rate(it->second, *s)}});
        }
        cj["stabilizers"] = stabs;
        if (auto t = detail::target_of(c); t && complete) {
            auto e = [&](Basis b) { return exact.expectations.at({c, BasisPair{b, b}}); };
            cj["witness"] = detail::witness_json(*t, e(Basis::Z), e(Basis::X), e(Basis::Y), std::nullopt);
        }
        ac.push_back(cj);
    }
    aj["conditions"] = ac;
    j["analytic"] = aj;
    return j;
}

/// One row per (condition, scheduled pair). Values after a failure are
/// left blank except for ZZ.
inline std::string experiment_csv(const ExperimentResult& res) {
    std::ostringstream out;
    out << "condition,pair,n,n_pp,n_pm,n_mp,n_mm,expectation,sigma,error_rate\n";
    char buf[32];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return std::string(buf);
    };
    for (Condition c : kConditions) {
        for (const auto& [p, n] : res.allocation) {
            auto it = res.table.cells.find({c, p});
            CorrelationCell cell = it == res.table.cells.end() ? CorrelationCell{} : it->second;
            out << to_string(c) << "," << p.str() << "," << cell.total();
            for (auto k : cell.counts) out << "," << k;
            if (detail::reported(c, p) && cell.total() > 0) {
                out << "," << num(cell.expectation()) << "," << num(cell.sigma()) << ",";
                if (auto s = stabilizer_sign(c, p.a); s && p.a == p.b) out << num(error_rate(cell.expectation(), *s));
            } else {
                out << ",,,";
            }
            out << "\n";
        }
    }
    return out.str();
}

inline std::string records_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    out << "trial,seed,outcome,pair,a,b\n";
    for (const auto& r : records) {
        out << r.trial << "," << r.seed << "," << r.outcome.str() << "," << r.bases.str() << ",";
        if (r.readout) out << (*r.readout)[0] << "," << (*r.readout)[1];
        else out << ",";
        out << "\n";
    }
    return out.str();
}

struct NetworkRunReport {
    std::uint64_t seed = 0;
    NetworkResult result;
};

inline Json network_report(const RunConfig& cfg, double p_erasure, const std::vector<NetworkRunReport>& runs) {
    const auto& spec = cfg.network.spec;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "network";
    j["seed"] = cfg.experiment.seed;
    j["seed_scheme"] = kSeedScheme;
    j["config"] = to_json(cfg);
    j["p_success"] = cfg.network.p_success;
    j["p_erasure"] = p_erasure;
    std::map<std::string, std::uint64_t> totals{{"success", 0}, {"failure", 0}, {"erasure", 0}};
    std::uint64_t quantum = 0, classical = 0;
    Json rj = Json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& res = runs[r].result;
        Json fj = Json::array();
        for (const auto& f : res.fusions) {
            const auto& fs = spec.fusions[static_cast<std::size_t>(f.id)];
            fj.push_back({{"id", f.id},
                          {"a", fs.a.str()},
                          {"b", fs.b.str()},
                          {"kind", to_string(fs.kind)},
                          {"outcome", f.outcome.str()},
                          {"parities", f.parities}});
            ++totals[f.outcome.is_success() ? "success" : f.outcome.is_failure() ? "failure" : "erasure"];
        }
        Json mj = Json::array();
        for (const auto& m : res.measurements) {
            mj.push_back({{"qubit", m.qubit.str()}, {"basis", std::string(1, to_char(m.basis))}, {"sign", m.sign}});
        }
        Json edges = Json::array();
        std::map<std::string, std::vector<std::string>> adjacency;
        for (const auto& e : res.graph) {
            edges.push_back(
                {{"a", e.a.str()}, {"b", e.b.str()}, {"quantum", e.quantum}, {"stabilizers", e.stabilizers}});
            adjacency[e.a.str()].push_back(e.b.str());
            adjacency[e.b.str()].push_back(e.a.str());
            ++(e.quantum ? quantum : classical);
        }
        Json qubits = Json::array();
        for (int id : res.tableau.qubits()) qubits.push_back(spec.ref(id).str());
        rj.push_back({{"run", r},
                      {"seed", runs[r].seed},
                      {"fusions", fj},
                      {"measurements", mj},
                      {"qubits", qubits},
                      {"stabilizers", res.tableau.str()},
                      {"edges", edges},
                      {"adjacency", adjacency}});
    }
    j["summary"] = {{"runs", runs.size()},
                    {"fusion_outcomes", totals},
                    {"quantum_edges", quantum},
                    {"classical_edges", classical}};
    j["runs"] = rj;
    return j;
}

inline Json oracle_report(const RunConfig& cfg, const OracleCheckReport& rep) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "oracle-check";
    j["config"] = to_json(cfg);
    j["points"] = rep.points;
    j["patterns"] = rep.patterns;
    j["max_probability_deviation"] = rep.max_probability_deviation;
    j["max_trace_distance"] = rep.max_trace_distance;
    j["max_unnormalized_distance"] = rep.max_unnormalized_distance;
    j["worst"] = rep.worst;
    j["tolerance"] = cfg.oracle.tolerance;
    j["pass"] = rep.pass(cfg.oracle.tolerance);
    return j;
}

/// Config with the fitted noise, ready to run as an experiment.
inline RunConfig calibrated_config(const RunConfig& cfg, const CalibrationResult& cal) {
    RunConfig out = cfg;
    out.mode = "experiment";
    out.emitter = cal.emitter;
    out.fusion = cal.fusion;
    return out;
}

inline Json calibration_report(const RunConfig& cfg, const CalibrationResult& cal) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "calibration";
    j["seed"] = cfg.calibration.seed;
    j["seed_scheme"] = kSeedScheme;
    j["config"] = to_json(cfg);
    Json params = Json::object();
    for (const auto& [k, v] : cal.parameters) params[k] = v;
    j["parameters"] = params;
    j["residual"] = cal.residual;
    j["best_start"] = cal.best_start;
    j["iterations"] = cal.iterations;
    j["converged"] = cal.converged;
    Json t = Json::array();
    bool within = true;
    for (std::size_t i = 0; i < cal.simulated.size(); ++i) {
        const auto& tg = cfg.calibration.targets[i];
        double z = (cal.simulated[i] - tg.rate) / tg.sigma;
        within = within && std::abs(z) <= 1.0;
        t.push_back({{"condition", to_string(tg.condition)},
                     {"pair", std::string{to_char(tg.basis), to_char(tg.basis)}},
                     {"target", tg.rate},
                     {"sigma", tg.sigma},
                     {"simulated", cal.simulated[i]},
                     {"z", z}});
    }
    j["targets"] = t;
    j["all_within_one_sigma"] = within;
    return j;
}

}  // namespace tbfusion

#endif  // TBFUSION_REPORT_HPP
