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

// Command line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 a check failed, 3 I/O error.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "tbfusion/report.hpp"

using namespace tbfusion;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool records = false;
};

RunConfig load(const Options& o, const std::string& mode) {
    RunConfig cfg;
    if (!o.config.empty()) {
        std::ifstream f(o.config, std::ios::binary);
        if (!f) throw IoError("cannot read config " + o.config);
        std::stringstream ss;
        ss << f.rdbuf();
        cfg = parse_config_text(ss.str());
    }
    cfg.mode = mode;
    if (o.seed) cfg.experiment.seed = *o.seed;
    if (o.shots) cfg.experiment.shots = *o.shots;
    if (o.out) cfg.output.dir = *o.out;
    if (o.format) cfg.output.format = *o.format;
    if (o.records) cfg.output.records = true;
    cfg.validate();
    return cfg;
}

fs::path out_file(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.output.dir) / name; }

int cmd_experiment(const RunConfig& cfg) {
    auto res = run_experiment(cfg, cfg.output.records);
    auto exact = analytic_expectations(cfg.emitter, cfg.fusion);
    if (cfg.output.format == "csv") {
        write_text(out_file(cfg, "correlations.csv"), experiment_csv(res));
    } else {
        write_text(out_file(cfg, "report.json"), dump(experiment_report(cfg, res, exact)));
    }
    if (cfg.output.records) write_text(out_file(cfg, "records.csv"), records_csv(res.records));

    std::uint64_t succ = 0;
    for (const auto& [k, v] : res.table.outcome_counts) {
        if (k == "psi+" || k == "psi-") succ += v;
    }
    std::printf("shots %llu  success frequency %.4f\n", static_cast<unsigned long long>(res.shots),
                static_cast<double>(succ) / static_cast<double>(res.shots));
    for (Condition c : kConditions) {
        std::printf("%-9s", to_string(c));
        for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
            auto s = stabilizer_sign(c, b);
            BasisPair p{b, b};
            if (!s || !res.table.has(c, p)) continue;
            auto e = res.table.estimate(c, p);
            std::printf("  %c%c err %.3f(%.3f)", to_char(b), to_char(b), error_rate(e.value, *s), e.sigma / 2);
        }
        std::printf("\n");
    }
    return 0;
}

int cmd_network(const RunConfig& cfg) {
    double pe = cfg.network.p_erasure.value_or(erasure_from_eta(cfg.fusion.eta));
    std::vector<NetworkRunReport> runs;
    for (std::uint64_t r = 0; r < cfg.network.runs; ++r) {
        std::uint64_t seed = derive_seed(cfg.experiment.seed, 1, r);
        Rng rng(seed);
        runs.push_back({seed, run_network(cfg.network.spec, cfg.network.p_success, pe, rng)});
    }
    Json j = network_report(cfg, pe, runs);
    if (cfg.output.format == "csv") {
        std::ostringstream csv;
        csv << "run,a,b,quantum,stabilizers\n";
        for (std::size_t r = 0; r < runs.size(); ++r) {
            for (const auto& e : runs[r].result.graph) {
                std::string st;
                for (const auto& s : e.stabilizers) st += (st.empty() ? "" : " ") + s;
                csv << r << "," << e.a.str() << "," << e.b.str() << "," << (e.quantum ? 1 : 0) << "," << st << "\n";
            }
        }
        write_text(out_file(cfg, "edges.csv"), csv.str());
    } else {
        write_text(out_file(cfg, "network.json"), dump(j));
    }
    const auto& s = j["summary"];
    std::printf("runs %llu  fusions %s  quantum edges %llu  classical edges %llu\n",
                static_cast<unsigned long long>(cfg.network.runs), s["fusion_outcomes"].dump().c_str(),
                s["quantum_edges"].get<unsigned long long>(), s["classical_edges"].get<unsigned long long>());
    return 0;
}

int cmd_oracle(const RunConfig& cfg) {
    auto rep = run_oracle_check(cfg.oracle);
    write_text(out_file(cfg, "oracle_check.json"), dump(oracle_report(cfg, rep)));
    bool ok = rep.pass(cfg.oracle.tolerance);
    std::printf("points %zu  max |dp| %.3e  max trace distance %.3e  %s\n", rep.points,
                rep.max_probability_deviation, std::max(rep.max_trace_distance, rep.max_unnormalized_distance),
                ok ? "PASS" : "FAIL");
    if (!ok) throw CheckFailure("oracle deviation above tolerance at " + rep.worst);
    return 0;
}

int cmd_calibrate(const RunConfig& cfg) {
    auto cal = calibrate(cfg.calibration, cfg.emitter, cfg.fusion);
    Json rep = calibration_report(cfg, cal);
    write_text(out_file(cfg, "calibration.json"), dump(rep));
    write_text(out_file(cfg, "calibrated_config.json"), to_json(calibrated_config(cfg, cal)).dump(2) + "\n");
    std::printf("residual %.4f  converged %s\n", cal.residual, cal.converged ? "yes" : "no");
    for (const auto& [k, v] : cal.parameters) std::printf("  %-14s %.6g\n", k.c_str(), v);
    for (const auto& t : rep["targets"]) {
        std::printf("  %-9s %s  target %.3f  simulated %.4f  z %+.2f\n", t["condition"].get<std::string>().c_str(),
                    t["pair"].get<std::string>().c_str(), t["target"].get<double>(), t["simulated"].get<double>(),
                    t["z"].get<double>());
    }
    if (!rep["all_within_one_sigma"].get<bool>()) std::fprintf(stderr, "warning: some targets not met within 1 sigma\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-bin fusion simulator"};
    app.require_subcommand(1);
    Options opt;
    std::string fmt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON run configuration");
        sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto* exp = app.add_subcommand("experiment", "Monte Carlo run of the two-state fusion experiment");
    add_common(exp);
    exp->add_option("--shots", opt.shots, "number of shots (overrides the config)");
    exp->add_flag("--records", opt.records, "also write per-trial records");
    auto* net = app.add_subcommand("network", "sample a stabilizer network of fused resource states");
    add_common(net);
    auto* orc = app.add_subcommand("oracle-check", "compare the fusion channel with the Fock oracle");
    add_common(orc);
    auto* cal = app.add_subcommand("calibrate", "fit noise parameters to target error rates");
    add_common(cal);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    auto start = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (*exp) rc = cmd_experiment(load(opt, "experiment"));
        else if (*net) rc = cmd_network(load(opt, "network"));
        else if (*orc) rc = cmd_oracle(load(opt, "oracle-check"));
        else rc = cmd_calibrate(load(opt, "calibrate"));
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 3;
    } catch (const CheckFailure& e) {
        std::fprintf(stderr, "check failed: %s\n", e.what());
        return 2;
    } catch (const StateError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 1;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "runtime %.2f s\n", secs);
    return rc;
}
