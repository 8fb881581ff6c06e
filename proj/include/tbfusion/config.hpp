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

#ifndef TBFUSION_CONFIG_HPP
#define TBFUSION_CONFIG_HPP

/// Run configuration and its JSON form.
///
/// Configs are JSON objects with a `schema_version`; every section is
/// optional and defaults apply, but unknown keys are rejected.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tbfusion/analysis.hpp"
#include "tbfusion/emitter.hpp"
#include "tbfusion/fusion.hpp"
#include "tbfusion/network.hpp"

namespace tbfusion {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or out-of-range configuration.
class ConfigError : public StateError {
  public:
    using StateError::StateError;
};

struct ScheduleEntry {
    BasisPair pair;
    double weight = 1.0;
    bool operator==(const ScheduleEntry&) const = default;
};

/// Which basis pairs are read out and with what share of the shots.
/// Presets: "full" (all nine pairs) and "diagonal" (ZZ, XX, YY), equally
/// weighted. A non-empty entry list replaces the preset.
struct BasisSchedule {
    std::string preset = "full";
    std::vector<ScheduleEntry> entries;

    std::vector<ScheduleEntry> resolved() const {
        if (!entries.empty()) return entries;
        std::vector<ScheduleEntry> out;
        if (preset == "full") {
            for (auto p : all_basis_pairs()) out.push_back({p, 1.0});
        } else if (preset == "diagonal") {
            for (auto p : diagonal_basis_pairs()) out.push_back({p, 1.0});
        } else {
            throw ConfigError("schedule: unknown preset '" + preset + "'");
        }
        return out;
    }

    /// Shot counts per pair by largest remainder; they sum to `shots`.
    std::vector<std::pair<BasisPair, std::uint64_t>> allocate(std::uint64_t shots) const {
        auto es = resolved();
        double total = 0.0;
        for (const auto& e : es) total += e.weight;
        std::vector<std::pair<BasisPair, std::uint64_t>> out;
        std::vector<std::pair<double, std::size_t>> rema;
        std::uint64_t assigned = 0;
        for (std::size_t i = 0; i < es.size(); ++i) {
            double exact = static_cast<double>(shots) * es[i].weight / total;
            auto n = static_cast<std::uint64_t>(std::floor(exact));
            out.push_back({es[i].pair, n});
            rema.push_back({exact - static_cast<double>(n), i});
            assigned += n;
        }
        std::stable_sort(rema.begin(), rema.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
        for (std::size_t k = 0; assigned < shots; ++k, ++assigned) ++out[rema[k % rema.size()].second].second;
        return out;
    }

    void validate() const {
        auto es = resolved();
        std::set<BasisPair> seen;
        for (const auto& e : es) {
            if (!(e.weight > 0)) throw ConfigError("schedule: weights must be positive");
            if (!seen.insert(e.pair).second) throw ConfigError("schedule: duplicate basis pair " + e.pair.str());
        }
    }

    bool operator==(const BasisSchedule&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    std::string format = "json";
    bool records = false;  // also write per-trial records

    void validate() const {
        if (format != "json" && format != "csv") throw ConfigError("output.format must be json or csv");
    }
    bool operator==(const OutputConfig&) const = default;
};

struct NetworkConfig {
    NetworkSpec spec;
    double p_success = 0.5;
    std::optional<double> p_erasure;  // default 1 - eta^2 from the fusion noise
    std::uint64_t runs = 1;

    void validate() const {
        spec.validate();
        if (!(p_success >= 0 && p_success <= 1)) throw ConfigError("network.p_success must lie in [0,1]");
        if (p_erasure && !(*p_erasure >= 0 && *p_erasure <= 1)) {
            throw ConfigError("network.p_erasure must lie in [0,1]");
        }
        if (runs < 1) throw ConfigError("network.runs must be >= 1");
    }
    bool operator==(const NetworkConfig&) const = default;
};

struct OracleGrid {
    std::vector<double> V{0.0, 0.5, 0.9, 1.0};
    std::vector<double> eta{0.5, 1.0};
    std::vector<double> p_bg{0.0, 0.05};
    std::vector<bool> number_resolving{true, false};
    double tolerance = 1e-9;

    void validate() const {
        if (V.empty() || eta.empty() || p_bg.empty() || number_resolving.empty()) {
            throw ConfigError("oracle grid axes must be non-empty");
        }
        for (double v : V) FusionNoise{v, 1.0, 0.0, true}.validate();
        for (double v : eta) FusionNoise{1.0, v, 0.0, true}.validate();
        for (double v : p_bg) FusionNoise{1.0, 1.0, v, true}.validate();
        if (!(tolerance > 0)) throw ConfigError("oracle.tolerance must be positive");
    }
    bool operator==(const OracleGrid&) const = default;
};

struct CalibrationTarget {
    Condition condition = Condition::PsiPlus;
    Basis basis = Basis::Z;
    double rate = 0.0;
    double sigma = 0.02;
    bool operator==(const CalibrationTarget&) const = default;
};

struct ParameterBound {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    bool operator==(const ParameterBound&) const = default;
};

/// Error rates quoted for the two success conditions and the failure ZZ.
inline std::vector<CalibrationTarget> reference_targets() {
    return {
        {Condition::PsiPlus, Basis::Z, 0.18, 0.03},  {Condition::PsiPlus, Basis::X, 0.31, 0.02},
        {Condition::PsiPlus, Basis::Y, 0.33, 0.02},  {Condition::PsiMinus, Basis::Z, 0.19, 0.02},
        {Condition::PsiMinus, Basis::X, 0.33, 0.02}, {Condition::PsiMinus, Basis::Y, 0.33, 0.02},
        {Condition::Phi, Basis::Z, 0.32, 0.04},
    };
}

inline const std::vector<std::string>& calibration_parameter_names() {
    static const std::vector<std::string> names{"V",           "eta",          "p_bg",         "p_init_err",
                                                "theta_err_pi", "theta_err_pi2", "p_deph_cycle", "p_flip_cycle",
                                                "f_read_1",    "f_read_0",     "p_emit_fail"};
    return names;
}

inline void set_parameter(const std::string& name, double v, EmitterNoise& en, FusionNoise& fn) {
    if (name == "V") fn.V = v;
    else if (name == "eta") fn.eta = v;
    else if (name == "p_bg") fn.p_bg = v;
    else if (name == "p_init_err") en.p_init_err = v;
    else if (name == "theta_err_pi") en.theta_err_pi = v;
    else if (name == "theta_err_pi2") en.theta_err_pi2 = v;
    else if (name == "p_deph_cycle") en.p_deph_cycle = v;
    else if (name == "p_flip_cycle") en.p_flip_cycle = v;
    else if (name == "f_read_1") en.f_read_1 = v;
    else if (name == "f_read_0") en.f_read_0 = v;
    else if (name == "p_emit_fail") en.p_emit_fail = v;
    else throw ConfigError("calibration: unknown parameter '" + name + "'");
}

struct CalibrationConfig {
    std::vector<CalibrationTarget> targets = reference_targets();
    std::vector<ParameterBound> parameters{
        {"V", 0.2, 1.0}, {"eta", 0.2, 1.0}, {"p_bg", 0.0, 0.05}, {"p_deph_cycle", 0.0, 0.5}, {"p_flip_cycle", 0.0, 0.3}};
    int starts = 8;
    int max_iterations = 800;
    std::uint64_t seed = 7;
    double tolerance = 1e-7;  // simplex size at convergence

    void validate() const {
        if (targets.empty()) throw ConfigError("calibration.targets must be non-empty");
        for (const auto& t : targets) {
            if (!(t.rate >= 0 && t.rate <= 1)) throw ConfigError("calibration: target rates must lie in [0,1]");
            if (!(t.sigma > 0)) throw ConfigError("calibration: target sigma must be positive");
            if (!stabilizer_sign(t.condition, t.basis)) {
                throw ConfigError(std::string("calibration: no stabilizer for ") + to_string(t.condition) + " in " +
                                  to_char(t.basis) + to_char(t.basis));
            }
        }
        std::set<std::string> seen;
        for (const auto& p : parameters) {
            const auto& names = calibration_parameter_names();
            if (std::find(names.begin(), names.end(), p.name) == names.end()) {
                throw ConfigError("calibration: unknown parameter '" + p.name + "'");
            }
            if (!seen.insert(p.name).second) throw ConfigError("calibration: duplicate parameter " + p.name);
            if (!(p.lo < p.hi)) throw ConfigError("calibration: bound lo < hi required for " + p.name);
            EmitterNoise en;
            FusionNoise fn;
            set_parameter(p.name, p.lo, en, fn);
            set_parameter(p.name, p.hi, en, fn);
            try {
                en.validate();
                fn.validate();
            } catch (const StateError& e) {
                throw ConfigError(std::string("calibration bounds: ") + e.what());
            }
        }
        if (parameters.empty()) throw ConfigError("calibration.parameters must be non-empty");
        if (starts < 1 || max_iterations < 1) throw ConfigError("calibration: starts and max_iterations must be >= 1");
        if (!(tolerance > 0)) throw ConfigError("calibration.tolerance must be positive");
    }
    bool operator==(const CalibrationConfig&) const = default;
};

inline const std::vector<std::string>& run_modes() {
    static const std::vector<std::string> modes{"experiment", "network", "oracle-check", "calibrate"};
    return modes;
}

struct RunConfig {
    int schema_version = kSchemaVersion;
    std::string mode = "experiment";
    ExperimentConfig experiment;
    EmitterNoise emitter;
    FusionNoise fusion;
    BasisSchedule schedule;
    OutputConfig output;
    NetworkConfig network;
    OracleGrid oracle;
    CalibrationConfig calibration;

    void validate() const {
        if (schema_version != kSchemaVersion) {
            throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
        }
        const auto& modes = run_modes();
        if (std::find(modes.begin(), modes.end(), mode) == modes.end()) throw ConfigError("unknown mode '" + mode + "'");
        try {
            experiment.validate();
            emitter.validate();
            fusion.validate();
        } catch (const ConfigError&) {
            throw;
        } catch (const StateError& e) {
            throw ConfigError(e.what());
        }
        schedule.validate();
        output.validate();
        try {
            network.validate();
        } catch (const ConfigError&) {
            throw;
        } catch (const StateError& e) {
            throw ConfigError(e.what());
        }
        oracle.validate();
        calibration.validate();
    }

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

/// Reads keys from one JSON object and rejects any it did not consume.
class ObjectReader {
  public:
    ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    const Json* take(const char* key) {
        if (!j_.contains(key)) return nullptr;
        seen_.insert(key);
        return &j_.at(key);
    }

    std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void get(const char* key, double& out) {
        if (auto v = take(key)) {
            if (!v->is_number()) throw ConfigError(where(key) + ": expected a number");
            out = v->get<double>();
        }
    }
    void get(const char* key, std::optional<double>& out) {
        if (auto v = take(key)) {
            if (v->is_null()) {
                out.reset();
                return;
            }
            if (!v->is_number()) throw ConfigError(where(key) + ": expected a number or null");
            out = v->get<double>();
        }
    }
    void get(const char* key, std::uint64_t& out) {
        if (auto v = take(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }
    void get(const char* key, int& out) {
        if (auto v = take(key)) {
            if (!v->is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
            auto x = v->get<std::int64_t>();
            if (x < -(1LL << 30) || x > (1LL << 30)) throw ConfigError(where(key) + ": integer out of range");
            out = static_cast<int>(x);
        }
    }
    void get(const char* key, bool& out) {
        if (auto v = take(key)) {
            if (!v->is_boolean()) throw ConfigError(where(key) + ": expected true or false");
            out = v->get<bool>();
        }
    }
    void get(const char* key, std::string& out) {
        if (auto v = take(key)) {
            if (!v->is_string()) throw ConfigError(where(key) + ": expected a string");
            out = v->get<std::string>();
        }
    }
    template <class T>
    void get_list(const char* key, std::vector<T>& out) {
        if (auto v = take(key)) {
            if (!v->is_array()) throw ConfigError(where(key) + ": expected an array");
            out.clear();
            for (const auto& e : *v) {
                if constexpr (std::is_same_v<T, double>) {
                    if (!e.is_number()) throw ConfigError(where(key) + ": expected numbers");
                    out.push_back(e.template get<double>());
                } else {
                    if (!e.is_boolean()) throw ConfigError(where(key) + ": expected booleans");
                    out.push_back(e.template get<bool>());
                }
            }
        }
    }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) throw ConfigError(where(k.c_str()) + ": unknown key");
        }
    }

    const std::string& path() const { return path_; }

  private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Basis parse_basis(const std::string& s, const std::string& where) {
    if (s.size() != 1) throw ConfigError(where + ": expected X, Y or Z");
    try {
        return basis_from_char(s[0]);
    } catch (const StateError&) {
        throw ConfigError(where + ": expected X, Y or Z");
    }
}

inline Condition parse_condition(const std::string& s, const std::string& where) {
    for (Condition c : kConditions) {
        if (s == to_string(c)) return c;
    }
    throw ConfigError(where + ": unknown condition '" + s + "'");
}

inline QubitRef parse_qubit(const Json& j, const std::string& path) {
    ObjectReader r(j, path);
    QubitRef q;
    std::string role = "photon";
    r.get("rsg", q.rsg);
    r.get("cycle", q.cycle);
    r.get("role", role);
    r.get("index", q.index);
    r.finish();
    if (role == "spin") {
        q.role = QubitRole::Spin;
    } else if (role == "photon") {
        q.role = QubitRole::Photon;
    } else {
        throw ConfigError(path + ".role: expected spin or photon");
    }
    return q;
}

inline Json qubit_json(const QubitRef& q) {
    return Json{{"rsg", q.rsg}, {"cycle", q.cycle}, {"role", q.role == QubitRole::Spin ? "spin" : "photon"}, {"index", q.index}};
}

template <class F>
void each_object(const Json* arr, const std::string& path, F&& f) {
    if (!arr) return;
    if (!arr->is_array()) throw ConfigError(path + ": expected an array");
    for (std::size_t i = 0; i < arr->size(); ++i) f((*arr)[i], path + "[" + std::to_string(i) + "]");
}

}  // namespace detail

inline RunConfig parse_config(const Json& j) {
    using detail::ObjectReader;
    RunConfig c;
    ObjectReader root(j, "");
    if (!j.contains("schema_version")) throw ConfigError("schema_version is required");
    root.get("schema_version", c.schema_version);
    if (c.schema_version != kSchemaVersion) {
        throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
    }
    root.get("mode", c.mode);

    if (auto e = root.take("experiment")) {
        ObjectReader r(*e, "experiment");
        r.get("cycle_separation_ns", c.experiment.cycle_separation_ns);
        r.get("shots", c.experiment.shots);
        r.get("seed", c.experiment.seed);
        if (auto m = r.take("metadata")) {
            ObjectReader mr(*m, "experiment.metadata");
            mr.get("wavelength_nm", c.experiment.metadata.wavelength_nm);
            mr.get("magnetic_field_T", c.experiment.metadata.magnetic_field_T);
            mr.get("raman_detuning_GHz", c.experiment.metadata.raman_detuning_GHz);
            mr.finish();
        }
        r.finish();
    }
    if (auto e = root.take("emitter")) {
        ObjectReader r(*e, "emitter");
        r.get("p_init_err", c.emitter.p_init_err);
        r.get("theta_err_pi", c.emitter.theta_err_pi);
        r.get("theta_err_pi2", c.emitter.theta_err_pi2);
        r.get("p_deph_cycle", c.emitter.p_deph_cycle);
        r.get("p_flip_cycle", c.emitter.p_flip_cycle);
        r.get("f_read_1", c.emitter.f_read_1);
        r.get("f_read_0", c.emitter.f_read_0);
        r.get("p_emit_fail", c.emitter.p_emit_fail);
        r.finish();
    }
    if (auto e = root.take("fusion")) {
        ObjectReader r(*e, "fusion");
        r.get("V", c.fusion.V);
        r.get("eta", c.fusion.eta);
        r.get("p_bg", c.fusion.p_bg);
        r.get("number_resolving", c.fusion.number_resolving);
        r.finish();
    }
    if (auto e = root.take("schedule")) {
        ObjectReader r(*e, "schedule");
        r.get("preset", c.schedule.preset);
        detail::each_object(r.take("entries"), "schedule.entries", [&](const Json& x, const std::string& p) {
            ObjectReader er(x, p);
            std::string pair;
            ScheduleEntry se;
            er.get("pair", pair);
            er.get("weight", se.weight);
            er.finish();
            try {
                se.pair = BasisPair::parse(pair);
            } catch (const StateError&) {
                throw ConfigError(p + ".pair: expected two of X, Y, Z");
            }
            c.schedule.entries.push_back(se);
        });
        r.finish();
    }
    if (auto e = root.take("output")) {
        ObjectReader r(*e, "output");
        r.get("dir", c.output.dir);
        r.get("format", c.output.format);
        r.get("records", c.output.records);
        r.finish();
    }
    if (auto e = root.take("network")) {
        ObjectReader r(*e, "network");
        r.get("rsg_count", c.network.spec.rsg_count);
        r.get("cycles", c.network.spec.cycles);
        r.get("photons_per_state", c.network.spec.photons_per_state);
        r.get("p_success", c.network.p_success);
        r.get("p_erasure", c.network.p_erasure);
        r.get("runs", c.network.runs);
        detail::each_object(r.take("fusions"), "network.fusions", [&](const Json& x, const std::string& p) {
            ObjectReader fr(x, p);
            FusionSpec f;
            std::string kind = "time_like";
            if (auto a = fr.take("a")) f.a = detail::parse_qubit(*a, p + ".a");
            if (auto b = fr.take("b")) f.b = detail::parse_qubit(*b, p + ".b");
            fr.get("kind", kind);
            fr.finish();
            if (kind == "time_like") {
                f.kind = FusionKind::TimeLike;
            } else if (kind == "space_like") {
                f.kind = FusionKind::SpaceLike;
            } else {
                throw ConfigError(p + ".kind: expected time_like or space_like");
            }
            c.network.spec.fusions.push_back(f);
        });
        detail::each_object(r.take("measurements"), "network.measurements", [&](const Json& x, const std::string& p) {
            ObjectReader mr(x, p);
            MeasurementSpec m;
            std::string basis = "X";
            if (auto q = mr.take("qubit")) m.qubit = detail::parse_qubit(*q, p + ".qubit");
            mr.get("basis", basis);
            mr.finish();
            m.basis = detail::parse_basis(basis, p + ".basis");
            c.network.spec.measurements.push_back(m);
        });
        r.finish();
    }
    if (auto e = root.take("oracle")) {
        ObjectReader r(*e, "oracle");
        r.get_list("V", c.oracle.V);
        r.get_list("eta", c.oracle.eta);
        r.get_list("p_bg", c.oracle.p_bg);
        r.get_list("number_resolving", c.oracle.number_resolving);
        r.get("tolerance", c.oracle.tolerance);
        r.finish();
    }
    if (auto e = root.take("calibration")) {
        ObjectReader r(*e, "calibration");
        if (auto t = r.take("targets")) {
            c.calibration.targets.clear();
            detail::each_object(t, "calibration.targets", [&](const Json& x, const std::string& p) {
                ObjectReader tr(x, p);
                CalibrationTarget ct;
                std::string cond = "psi_plus", basis = "Z";
                tr.get("condition", cond);
                tr.get("basis", basis);
                tr.get("rate", ct.rate);
                tr.get("sigma", ct.sigma);
                tr.finish();
                ct.condition = detail::parse_condition(cond, p + ".condition");
                ct.basis = detail::parse_basis(basis, p + ".basis");
                c.calibration.targets.push_back(ct);
            });
        }
        if (auto t = r.take("parameters")) {
            c.calibration.parameters.clear();
            detail::each_object(t, "calibration.parameters", [&](const Json& x, const std::string& p) {
                ObjectReader pr(x, p);
                ParameterBound b;
                pr.get("name", b.name);
                pr.get("lo", b.lo);
                pr.get("hi", b.hi);
                pr.finish();
                c.calibration.parameters.push_back(b);
            });
        }
        r.get("starts", c.calibration.starts);
        r.get("max_iterations", c.calibration.max_iterations);
        r.get("seed", c.calibration.seed);
        r.get("tolerance", c.calibration.tolerance);
        r.finish();
    }
    root.finish();
    c.validate();
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline Json to_json(const RunConfig& c) {
    Json j;
    j["schema_version"] = c.schema_version;
    j["mode"] = c.mode;
    j["experiment"] = {{"cycle_separation_ns", c.experiment.cycle_separation_ns},
                       {"shots", c.experiment.shots},
                       {"seed", c.experiment.seed},
                       {"metadata",
                        {{"wavelength_nm", c.experiment.metadata.wavelength_nm},
                         {"magnetic_field_T", c.experiment.metadata.magnetic_field_T},
                         {"raman_detuning_GHz", c.experiment.metadata.raman_detuning_GHz}}}};
    j["emitter"] = {{"p_init_err", c.emitter.p_init_err},     {"theta_err_pi", c.emitter.theta_err_pi},
                    {"theta_err_pi2", c.emitter.theta_err_pi2}, {"p_deph_cycle", c.emitter.p_deph_cycle},
                    {"p_flip_cycle", c.emitter.p_flip_cycle}, {"f_read_1", c.emitter.f_read_1},
                    {"f_read_0", c.emitter.f_read_0},         {"p_emit_fail", c.emitter.p_emit_fail}};
    j["fusion"] = {{"V", c.fusion.V},
                   {"eta", c.fusion.eta},
                   {"p_bg", c.fusion.p_bg},
                   {"number_resolving", c.fusion.number_resolving}};
    Json entries = Json::array();
    for (const auto& e : c.schedule.entries) entries.push_back({{"pair", e.pair.str()}, {"weight", e.weight}});
    j["schedule"] = {{"preset", c.schedule.preset}, {"entries", entries}};
    j["output"] = {{"dir", c.output.dir}, {"format", c.output.format}, {"records", c.output.records}};
    Json fusions = Json::array();
    for (const auto& f : c.network.spec.fusions) {
        fusions.push_back({{"a", detail::qubit_json(f.a)}, {"b", detail::qubit_json(f.b)}, {"kind", to_string(f.kind)}});
    }
    Json meas = Json::array();
    for (const auto& m : c.network.spec.measurements) {
        meas.push_back({{"qubit", detail::qubit_json(m.qubit)}, {"basis", std::string(1, to_char(m.basis))}});
    }
    j["network"] = {{"rsg_count", c.network.spec.rsg_count},
                    {"cycles", c.network.spec.cycles},
                    {"photons_per_state", c.network.spec.photons_per_state},
                    {"p_success", c.network.p_success},
                    {"p_erasure", c.network.p_erasure ? Json(*c.network.p_erasure) : Json(nullptr)},
                    {"runs", c.network.runs},
                    {"fusions", fusions},
                    {"measurements", meas}};
    Json nr = Json::array();
    for (bool b : c.oracle.number_resolving) nr.push_back(b);
    j["oracle"] = {{"V", c.oracle.V}, {"eta", c.oracle.eta}, {"p_bg", c.oracle.p_bg}, {"number_resolving", nr},
                   {"tolerance", c.oracle.tolerance}};
    Json targets = Json::array();
    for (const auto& t : c.calibration.targets) {
        targets.push_back({{"condition", to_string(t.condition)},
                           {"basis", std::string(1, to_char(t.basis))},
                           {"rate", t.rate},
                           {"sigma", t.sigma}});
    }
    Json params = Json::array();
    for (const auto& p : c.calibration.parameters) params.push_back({{"name", p.name}, {"lo", p.lo}, {"hi", p.hi}});
    j["calibration"] = {{"targets", targets},
                        {"parameters", params},
                        {"starts", c.calibration.starts},
                        {"max_iterations", c.calibration.max_iterations},
                        {"seed", c.calibration.seed},
                        {"tolerance", c.calibration.tolerance}};
    return j;
}

}  // namespace tbfusion

#endif  // TBFUSION_CONFIG_HPP
