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

#ifndef TBFUSION_NETWORK_HPP
#define TBFUSION_NETWORK_HPP

/// Fusion networks of ideal resource states on a stabilizer tableau.
///
/// Every resource-state generator (RSG) emits one resource state per clock
/// cycle: a spin entangled with `photons_per_state` photons in the state
/// (|0...0> - |1...1>)/sqrt2. Fusions are joint Pauli measurements on pairs
/// of photons; optional single-qubit measurements run after all fusions.
/// Execution is logged as a list of events so the same run can be replayed
/// on the dense engine.

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tbfusion/densop.hpp"
#include "tbfusion/emitter.hpp"
#include "tbfusion/fusion.hpp"
#include "tbfusion/rng.hpp"
#include "tbfusion/tableau.hpp"

namespace tbfusion {

enum class QubitRole { Spin, Photon };

struct QubitRef {
    int rsg = 0;
    int cycle = 0;
    QubitRole role = QubitRole::Spin;
    int index = 0;  // photon index within the resource state

    static QubitRef spin(int rsg, int cycle) { return {rsg, cycle, QubitRole::Spin, 0}; }
    static QubitRef photon(int rsg, int cycle, int index = 0) { return {rsg, cycle, QubitRole::Photon, index}; }

    std::string str() const {
        std::string s = role == QubitRole::Spin ? "s(" : "p(";
        s += std::to_string(rsg) + "," + std::to_string(cycle);
        if (role == QubitRole::Photon && index != 0) s += "," + std::to_string(index);
        return s + ")";
    }

    bool operator==(const QubitRef&) const = default;
};

enum class FusionKind { SpaceLike, TimeLike };

inline const char* to_string(FusionKind k) { return k == FusionKind::SpaceLike ? "space_like" : "time_like"; }

struct FusionSpec {
    QubitRef a, b;
    FusionKind kind = FusionKind::TimeLike;
    bool operator==(const FusionSpec&) const = default;
};

struct MeasurementSpec {
    QubitRef qubit;
    Basis basis = Basis::X;
    bool operator==(const MeasurementSpec&) const = default;
};

struct NetworkSpec {
    int rsg_count = 1;
    int cycles = 2;
    int photons_per_state = 1;
    std::vector<FusionSpec> fusions;
    std::vector<MeasurementSpec> measurements;

    bool operator==(const NetworkSpec&) const = default;

    int qubits_per_state() const { return 1 + photons_per_state; }
    int num_states() const { return rsg_count * cycles; }
    int num_qubits() const { return num_states() * qubits_per_state(); }

    bool in_range(const QubitRef& q) const {
        if (q.rsg < 0 || q.rsg >= rsg_count || q.cycle < 0 || q.cycle >= cycles) return false;
        if (q.role == QubitRole::Spin) return q.index == 0;
        return q.index >= 0 && q.index < photons_per_state;
    }

    int state_of(const QubitRef& q) const { return q.rsg * cycles + q.cycle; }

    int id(const QubitRef& q) const {
        if (!in_range(q)) throw StateError("network: qubit " + q.str() + " out of range");
        return state_of(q) * qubits_per_state() + (q.role == QubitRole::Spin ? 0 : 1 + q.index);
    }

    QubitRef ref(int id) const {
        int state = id / qubits_per_state();
        int k = id % qubits_per_state();
        int rsg = state / cycles;
        int cycle = state % cycles;
        return k == 0 ? QubitRef::spin(rsg, cycle) : QubitRef::photon(rsg, cycle, k - 1);
    }

    /// Qubit ids of one resource state, spin first.
    std::vector<int> state_qubits(int state) const {
        std::vector<int> out(static_cast<std::size_t>(qubits_per_state()));
        std::iota(out.begin(), out.end(), state * qubits_per_state());
        return out;
    }

    void validate() const {
        if (rsg_count < 1 || cycles < 1) throw StateError("network: rsg_count and cycles must be positive");
        if (photons_per_state < 1 || photons_per_state > 3) {
            throw StateError("network: photons_per_state must be in [1, 3]");
        }
        std::vector<int> used(static_cast<std::size_t>(num_qubits()), 0);
        for (const auto& f : fusions) {
            for (const auto* q : {&f.a, &f.b}) {
                if (q->role != QubitRole::Photon) throw StateError("network: fusion on non-photon " + q->str());
                if (used[static_cast<std::size_t>(id(*q))]++) {
                    throw StateError("network: photon " + q->str() + " fused more than once");
                }
            }
            if (f.kind == FusionKind::TimeLike && (f.a.rsg != f.b.rsg || f.a.cycle == f.b.cycle)) {
                throw StateError("network: time_like fusion must join one RSG at different cycles");
            }
            if (f.kind == FusionKind::SpaceLike && (f.a.rsg == f.b.rsg || f.a.cycle != f.b.cycle)) {
                throw StateError("network: space_like fusion must join different RSGs at one cycle");
            }
        }
        for (const auto& m : measurements) {
            if (used[static_cast<std::size_t>(id(m.qubit))]++) {
                throw StateError("network: qubit " + m.qubit.str() + " is consumed before its measurement");
            }
        }
    }
};

/// How a fusion acts on its photon pair. Parities or the failure bin left
/// empty are drawn from the state; set values are postselected.
struct FusionAction {
    enum class Mode { Parity, Failure, Erasure };
    Mode mode = Mode::Parity;
    std::optional<int> zz, xx;     // Parity mode
    std::optional<TimeBin> bin;    // Failure mode

    static FusionAction parity(std::optional<int> zz, std::optional<int> xx) { return {Mode::Parity, zz, xx, {}}; }
    static FusionAction failure(std::optional<TimeBin> bin = std::nullopt) { return {Mode::Failure, {}, {}, bin}; }
    static FusionAction erasure() { return {Mode::Erasure, {}, {}, {}}; }

    /// Success is a parity measurement with ZZ = -1; psi+ has XX = +1.
    static FusionAction of(const FusionOutcome& o) {
        switch (o.kind) {
            case FusionOutcome::Kind::SuccessPsiPlus:
                return parity(-1, +1);
            case FusionOutcome::Kind::SuccessPsiMinus:
                return parity(-1, -1);
            case FusionOutcome::Kind::FailurePhiSubspace:
                return failure(o.bin);
            case FusionOutcome::Kind::Erasure:
                break;
        }
        return erasure();
    }

    std::string str() const {
        auto sgn = [](std::optional<int> s) { return s ? (*s > 0 ? std::string("+") : std::string("-")) : std::string("?"); };
        switch (mode) {
            case Mode::Parity:
                return "parity(ZZ" + sgn(zz) + ",XX" + sgn(xx) + ")";
            case Mode::Failure:
                return std::string("failure(") + (bin ? to_string(*bin) : "?") + ")";
            case Mode::Erasure:
                break;
        }
        return "erasure";
    }
};

struct FusionRecord {
    int id = 0;
    FusionOutcome outcome;
    std::vector<int> parities;  // {ZZ, XX} on success, {ZZ} on failure, {} on erasure
    std::optional<TimeBin> bin;
};

struct MeasurementRecord {
    QubitRef qubit;
    Basis basis = Basis::X;
    int sign = +1;
};

namespace event {
struct AddState {
    std::vector<int> ids;  // spin first
};
struct Measure {
    std::vector<int> ids;
    std::string letters;
    int sign = +1;
    double probability = 1.0;  // of `sign`, as predicted by the tableau
};
struct Discard {
    std::vector<int> ids;
};
}  // namespace event

using NetworkEvent = std::variant<event::AddState, event::Measure, event::Discard>;

/// Stabilizer generators of (|0...0> - |1...1>)/sqrt2 on k qubits.
inline std::vector<PauliString> ghz_minus_generators(std::size_t k) {
    std::vector<PauliString> out;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        std::string s(k, 'I');
        s[i] = s[i + 1] = 'Z';
        out.emplace_back(s);
    }
    out.emplace_back(std::string(k, 'X'), -1);
    return out;
}

/// Measures a Pauli product on the tableau and logs the event with the
/// probability of the observed sign.
inline int logged_measure(StabilizerTableau& t, const std::vector<int>& ids, const std::string& letters, Rng& rng,
                          std::optional<int> forced, std::vector<NetworkEvent>* log) {
    PauliRow p = t.row(ids, letters);
    int e = t.expectation(p);
    int sign = t.measure(p, rng, forced);
    if (log) log->push_back(event::Measure{ids, letters, sign, (1.0 + sign * e) / 2.0});
    return sign;
}

/// Applies a fusion action to photons `a` and `b` and removes them.
inline FusionRecord apply_fusion(StabilizerTableau& t, int a, int b, const FusionAction& act, Rng& rng,
                                 std::vector<NetworkEvent>* log = nullptr) {
    if (a == b) throw StateError("fuse: photon fused with itself");
    for (int id : {a, b}) {
        if (!t.has_qubit(id)) throw StateError("fuse: photon " + std::to_string(id) + " is not available");
    }
    FusionRecord rec;
    switch (act.mode) {
        case FusionAction::Mode::Parity: {
            int zz = logged_measure(t, {a, b}, "ZZ", rng, act.zz, log);
            int xx = logged_measure(t, {a, b}, "XX", rng, act.xx, log);
            rec.parities = {zz, xx};
            if (zz < 0) {
                rec.outcome = xx > 0 ? FusionOutcome::psi_plus() : FusionOutcome::psi_minus();
            } else {
                // Even ZZ parity with a resolved XX is outside what the
                // linear-optical analyzer reports; only parity sweeps use it.
                rec.outcome = FusionOutcome::erasure();
            }
            break;
        }
        case FusionAction::Mode::Failure: {
            int zz = logged_measure(t, {a, b}, "ZZ", rng, +1, log);
            std::optional<int> forced;
            if (act.bin) forced = *act.bin == TimeBin::Early ? +1 : -1;
            int za = logged_measure(t, {a}, "Z", rng, forced, log);
            logged_measure(t, {b}, "Z", rng, za, log);
            rec.parities = {zz};
            rec.bin = za > 0 ? TimeBin::Early : TimeBin::Late;
            rec.outcome = FusionOutcome::failure(*rec.bin);
            break;
        }
        case FusionAction::Mode::Erasure:
            rec.outcome = FusionOutcome::erasure();
            break;
    }
    t.trace_out(a);
    t.trace_out(b);
    if (log) log->push_back(event::Discard{{a, b}});
    return rec;
}

/// Fuses two photons with a given analyzer outcome. Success sets ZZ = -1
/// and the XX sign of psi+/psi-; failure reveals both time bins.
inline FusionRecord fuse(StabilizerTableau& t, int a, int b, const FusionOutcome& o, Rng& rng) {
    return apply_fusion(t, a, b, FusionAction::of(o), rng);
}

/// Executes network operations on a tableau and logs them.
class NetworkRun {
  public:
    NetworkRun(NetworkSpec spec, Rng& rng) : spec_(std::move(spec)), rng_(rng) {
        spec_.validate();
        added_.assign(static_cast<std::size_t>(spec_.num_states()), false);
    }

    const NetworkSpec& spec() const { return spec_; }
    const StabilizerTableau& tableau() const { return tableau_; }
    const std::vector<NetworkEvent>& events() const { return events_; }

    void ensure_state(int state) {
        if (added_[static_cast<std::size_t>(state)]) return;
        added_[static_cast<std::size_t>(state)] = true;
        auto ids = spec_.state_qubits(state);
        tableau_.add_state(ids, ghz_minus_generators(ids.size()));
        events_.push_back(event::AddState{ids});
    }

    void ensure_all_states() {
        for (int s = 0; s < spec_.num_states(); ++s) ensure_state(s);
    }

    /// Applies a fusion action to two photons and consumes them.
    FusionRecord fuse(int fusion_id, const QubitRef& a, const QubitRef& b, const FusionAction& act) {
        for (const auto* q : {&a, &b}) {
            if (q->role != QubitRole::Photon) throw StateError("fuse: " + q->str() + " is not a photon");
            ensure_state(spec_.state_of(*q));
            if (!tableau_.has_qubit(spec_.id(*q))) throw StateError("fuse: photon " + q->str() + " already consumed");
        }
        FusionRecord rec = apply_fusion(tableau_, spec_.id(a), spec_.id(b), act, rng_, &events_);
        rec.id = fusion_id;
        return rec;
    }

    MeasurementRecord measure_qubit(const QubitRef& q, Basis basis, std::optional<int> forced = std::nullopt) {
        ensure_state(spec_.state_of(q));
        int id = spec_.id(q);
        if (!tableau_.has_qubit(id)) throw StateError("measure: qubit " + q.str() + " already consumed");
        int s = logged_measure(tableau_, {id}, std::string(1, to_char(basis)), rng_, forced, &events_);
        tableau_.trace_out(id);
        events_.push_back(event::Discard{{id}});
        return {q, basis, s};
    }

  private:
    NetworkSpec spec_;
    Rng& rng_;
    StabilizerTableau tableau_;
    std::vector<NetworkEvent> events_;
    std::vector<bool> added_;
};

struct CorrelationEdge {
    QubitRef a, b;
    bool quantum = false;
    std::vector<std::string> stabilizers;  // weight-2 elements on (a, b), e.g. "-ZZ"
};

namespace detail {

inline std::vector<PauliString> group_elements(const std::vector<PauliString>& gens) {
    std::vector<PauliString> out;
    std::size_t n = gens.empty() ? 0 : gens[0].size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << gens.size()); ++mask) {
        PauliRow acc(n);
        for (std::size_t k = 0; k < gens.size(); ++k) {
            if (!(mask >> k & 1)) continue;
            PauliRow r(n);
            for (std::size_t j = 0; j < n; ++j) r.set(j, gens[k].letters[j]);
            r.neg = gens[k].sign < 0;
            acc = multiply(acc, r);
        }
        std::string letters;
        for (std::size_t j = 0; j < n; ++j) letters += acc.letter(j);
        out.emplace_back(letters, acc.sign());
    }
    return out;
}

}  // namespace detail

/// Pairwise correlations between surviving spins that are linked through
/// non-erased fusions. An edge needs a weight-2 stabilizer on exactly the
/// pair. It is quantum when the pair is a pure entangled state (two
/// independent weight-2 stabilizers, nothing local) and classical otherwise,
/// which covers ZZ-only correlations and the product states left by a
/// failure that reveals both time bins.
inline std::vector<CorrelationEdge> correlation_graph(const StabilizerTableau& t, const NetworkSpec& spec,
                                                      const std::vector<FusionRecord>& fusions) {
    std::vector<int> parent(static_cast<std::size_t>(spec.num_states()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        }
        return v;
    };
    for (const auto& rec : fusions) {
        if (rec.outcome.is_erasure()) continue;
        const auto& f = spec.fusions.at(static_cast<std::size_t>(rec.id));
        parent[static_cast<std::size_t>(find(spec.state_of(f.a)))] = find(spec.state_of(f.b));
    }
    std::vector<int> spins;
    for (int id : t.qubits()) {
        if (spec.ref(id).role == QubitRole::Spin) spins.push_back(id);
    }
    std::vector<CorrelationEdge> out;
    for (std::size_t u = 0; u < spins.size(); ++u) {
        for (std::size_t v = u + 1; v < spins.size(); ++v) {
            QubitRef a = spec.ref(spins[u]), b = spec.ref(spins[v]);
            if (find(spec.state_of(a)) != find(spec.state_of(b))) continue;
            auto gens = t.subgroup_on({spins[u], spins[v]});
            bool local = false;
            std::vector<std::string> pair_stabs;
            for (const auto& e : detail::group_elements(gens)) {
                if (e.weight() == 1) local = true;
                if (e.weight() == 2) pair_stabs.push_back(e.str());
            }
            if (pair_stabs.empty()) continue;
            out.push_back({a, b, !local && gens.size() == 2, std::move(pair_stabs)});
        }
    }
    return out;
}

struct NetworkResult {
    std::vector<FusionRecord> fusions;
    std::vector<MeasurementRecord> measurements;
    StabilizerTableau tableau;
    std::vector<CorrelationEdge> graph;
    std::vector<NetworkEvent> events;
};

/// Draws a fusion class: erasure with p_erasure, then success with
/// p_success, else failure. Parities and the failure bin come from the state.
inline FusionAction sample_fusion_action(double p_success, double p_erasure, Rng& rng) {
    if (rng.bernoulli(p_erasure)) return FusionAction::erasure();
    if (rng.bernoulli(p_success)) return FusionAction::parity(-1, std::nullopt);
    return FusionAction::failure();
}

/// Runs every fusion then every measurement. `forced[i]`, when set,
/// replaces sampling for fusion i.
inline NetworkResult run_network(const NetworkSpec& spec, double p_success, double p_erasure, Rng& rng,
                                 const std::vector<std::optional<FusionAction>>& forced = {}) {
    if (!(p_success >= 0 && p_success <= 1) || !(p_erasure >= 0 && p_erasure <= 1)) {
        throw StateError("run_network: probabilities must lie in [0, 1]");
    }
    if (!forced.empty() && forced.size() != spec.fusions.size()) {
        throw StateError("run_network: forced outcome list must match the fusion list");
    }
    NetworkRun run(spec, rng);
    run.ensure_all_states();
    NetworkResult res;
    for (std::size_t i = 0; i < spec.fusions.size(); ++i) {
        const auto& f = spec.fusions[i];
        FusionAction act = !forced.empty() && forced[i] ? *forced[i] : sample_fusion_action(p_success, p_erasure, rng);
        res.fusions.push_back(run.fuse(static_cast<int>(i), f.a, f.b, act));
    }
    for (const auto& m : spec.measurements) res.measurements.push_back(run.measure_qubit(m.qubit, m.basis));
    run.tableau().validate();
    res.tableau = run.tableau();
    res.graph = correlation_graph(res.tableau, spec, res.fusions);
    res.events = run.events();
    return res;
}

/// Per-fusion erasure probability from photon transmission.
inline double erasure_from_eta(double eta) { return 1.0 - eta * eta; }

struct CrosscheckReport {
    std::size_t compared = 0;
    double max_deviation = 0.0;
    std::vector<std::string> mismatches;

    bool agree() const { return mismatches.empty(); }
};

namespace detail {

inline QubitLabel dense_label(const NetworkSpec& spec, int id) {
    return spec.ref(id).role == QubitRole::Spin ? QubitLabel::spin(id) : QubitLabel::photon(id);
}

inline Labels dense_labels(const NetworkSpec& spec, const std::vector<int>& ids) {
    Labels out;
    for (int id : ids) out.push_back(dense_label(spec, id));
    return out;
}

}  // namespace detail

/// Replays a network run on the dense engine and compares every Pauli
/// expectation of weight <= 2 on the surviving qubits with the tableau.
/// Instances must keep at most 4 qubits at the end and 8 at any time.
inline CrosscheckReport crosscheck_dense(const NetworkSpec& spec, const std::vector<FusionAction>& actions, Rng& rng,
                                         double tol = 1e-10) {
    if (actions.size() != spec.fusions.size()) throw StateError("crosscheck_dense: one action per fusion required");
    NetworkRun run(spec, rng);
    for (std::size_t i = 0; i < spec.fusions.size(); ++i) {
        run.fuse(static_cast<int>(i), spec.fusions[i].a, spec.fusions[i].b, actions[i]);
    }
    for (const auto& m : spec.measurements) run.measure_qubit(m.qubit, m.basis);
    run.ensure_all_states();
    const auto& t = run.tableau();
    t.validate();
    if (t.num_qubits() > 4) throw StateError("crosscheck_dense: more than 4 surviving qubits");

    CrosscheckReport report;
    std::optional<DensityMatrix> rho;
    for (const auto& ev : run.events()) {
        if (const auto* add = std::get_if<event::AddState>(&ev)) {
            Vector ghz = Vector::Zero(Eigen::Index{1} << add->ids.size());
            ghz(0) = 1.0 / std::sqrt(2.0);
            ghz(ghz.size() - 1) = -1.0 / std::sqrt(2.0);
            auto state = DensityMatrix::from_pure(ghz, detail::dense_labels(spec, add->ids));
            if (rho && rho->num_qubits() + add->ids.size() > kMaxQubits) {
                throw StateError("crosscheck_dense: dense register exceeds the qubit cap");
            }
            rho = rho ? tensor(*rho, state) : state;
        } else if (const auto* m = std::get_if<event::Measure>(&ev)) {
            Labels on = detail::dense_labels(spec, m->ids);
            Matrix proj = 0.5 * (Matrix::Identity(Eigen::Index{1} << on.size(), Eigen::Index{1} << on.size()) +
                                 m->sign * pauli_string_matrix(PauliString(m->letters)));
            auto pr = project(*rho, proj, on);
            double dev = std::abs(pr.probability - m->probability);
            report.max_deviation = std::max(report.max_deviation, dev);
            if (dev > tol || !pr.state) {
                report.mismatches.push_back("outcome probability of " + m->letters + ": dense " +
                                            std::to_string(pr.probability) + " vs tableau " +
                                            std::to_string(m->probability));
                return report;
            }
            rho = *pr.state;
        } else {
            const auto& d = std::get<event::Discard>(ev);
            Labels keep;
            for (const auto& l : rho->labels()) {
                bool gone = false;
                for (int id : d.ids) gone |= l == detail::dense_label(spec, id);
                if (!gone) keep.push_back(l);
            }
            rho = partial_trace(*rho, keep);
        }
    }

    std::vector<int> ids = t.qubits();
    Labels labels = detail::dense_labels(spec, ids);
    rho = reorder(*rho, labels);
    const std::string letters = "XYZ";
    auto compare = [&](const std::vector<std::size_t>& cols, const std::string& ops) {
        std::vector<int> sub;
        Labels on;
        for (auto c : cols) {
            sub.push_back(ids[c]);
            on.push_back(labels[c]);
        }
        int te = t.expectation(sub, ops);
        double de = expect_on(*rho, PauliString(ops), on);
        double dev = std::abs(te - de);
        report.max_deviation = std::max(report.max_deviation, dev);
        ++report.compared;
        if (dev > tol) {
            std::string name;
            for (std::size_t k = 0; k < sub.size(); ++k) name += ops[k] + spec.ref(sub[k]).str();
            report.mismatches.push_back(name + ": tableau " + std::to_string(te) + " vs dense " + std::to_string(de));
        }
    };
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (char a : letters) compare({i}, std::string(1, a));
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            for (char a : letters) {
                for (char b : letters) compare({i, j}, std::string{a, b});
            }
        }
    }
    return report;
}

struct CrosscheckCase {
    std::string name;
    NetworkSpec spec;
    std::vector<FusionAction> actions;
    bool core = true;  // one of the 48 success/failure parity cases
};

/// Small instances for the tableau/dense comparison.
///
/// Core cases run every fusion through the four parity sign pairs and both
/// failure bins: 6 on each of two single-fusion topologies and 36 on two
/// independent space-like fusions, 48 in total. Extended cases add erasures
/// everywhere and a three-cycle chain whose middle spin is measured out;
/// on the chain a failure fixes the time bins of the whole middle state, so
/// a second failure with the opposite bin cannot occur and is skipped.
inline std::vector<CrosscheckCase> crosscheck_cases(bool extended) {
    NetworkSpec single_tl;  // one RSG, two cycles
    single_tl.fusions = {{QubitRef::photon(0, 0), QubitRef::photon(0, 1), FusionKind::TimeLike}};

    NetworkSpec single_sl;  // two RSGs, one cycle, two photons per state
    single_sl.rsg_count = 2;
    single_sl.cycles = 1;
    single_sl.photons_per_state = 2;
    single_sl.fusions = {{QubitRef::photon(0, 0, 1), QubitRef::photon(1, 0, 0), FusionKind::SpaceLike}};

    NetworkSpec two_pairs;  // two RSGs, two cycles, fused across at each cycle
    two_pairs.rsg_count = 2;
    two_pairs.fusions = {{QubitRef::photon(0, 0), QubitRef::photon(1, 0), FusionKind::SpaceLike},
                         {QubitRef::photon(0, 1), QubitRef::photon(1, 1), FusionKind::SpaceLike}};

    NetworkSpec chain;  // three cycles, middle spin measured out
    chain.cycles = 3;
    chain.photons_per_state = 2;
    chain.fusions = {{QubitRef::photon(0, 0, 1), QubitRef::photon(0, 1, 0), FusionKind::TimeLike},
                     {QubitRef::photon(0, 1, 1), QubitRef::photon(0, 2, 0), FusionKind::TimeLike}};
    chain.measurements = {{QubitRef::spin(0, 1), Basis::X}};

    std::vector<FusionAction> acts;
    for (int zz : {+1, -1}) {
        for (int xx : {+1, -1}) acts.push_back(FusionAction::parity(zz, xx));
    }
    acts.push_back(FusionAction::failure(TimeBin::Early));
    acts.push_back(FusionAction::failure(TimeBin::Late));
    std::vector<FusionAction> with_e = acts;
    with_e.push_back(FusionAction::erasure());
    auto is_e = [](const FusionAction& a) { return a.mode == FusionAction::Mode::Erasure; };

    std::vector<CrosscheckCase> out;
    for (const auto& a : acts) out.push_back({"time_like/" + a.str(), single_tl, {a}, true});
    for (const auto& a : acts) out.push_back({"space_like/" + a.str(), single_sl, {a}, true});
    for (const auto& a : acts) {
        for (const auto& b : acts) out.push_back({"two_pairs/" + a.str() + "/" + b.str(), two_pairs, {a, b}, true});
    }
    if (!extended) return out;
    out.push_back({"time_like/erasure", single_tl, {FusionAction::erasure()}, false});
    out.push_back({"space_like/erasure", single_sl, {FusionAction::erasure()}, false});
    for (const auto& a : with_e) {
        for (const auto& b : with_e) {
            if (is_e(a) || is_e(b)) {
                out.push_back({"two_pairs/" + a.str() + "/" + b.str(), two_pairs, {a, b}, false});
            }
            bool clash = a.mode == FusionAction::Mode::Failure && b.mode == FusionAction::Mode::Failure && a.bin != b.bin;
            if (!clash) out.push_back({"chain/" + a.str() + "/" + b.str(), chain, {a, b}, false});
        }
    }
    return out;
}

}  // namespace tbfusion

#endif  // TBFUSION_NETWORK_HPP
