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

#ifndef TBFUSION_FUSION_HPP
#define TBFUSION_FUSION_HPP

/// Time-bin fusion at a balanced beam splitter.
///
/// Photon a enters port a, photon b port b; outputs are c and d with
/// a^dag -> (c^dag + d^dag)/sqrt2 and b^dag -> (c^dag - d^dag)/sqrt2 in each
/// time bin. Photonic operators act on the two time-bin qubits (a, b) with
/// basis index 2*t_a + t_b (e = 0, l = 1).

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tbfusion/densop.hpp"
#include "tbfusion/emitter.hpp"
#include "tbfusion/rng.hpp"

namespace tbfusion {

enum class Port : int { C = 0, D = 1 };

struct FusionNoise {
    double V = 1.0;     // |<alpha|beta>|^2 of the internal photon states
    double eta = 1.0;   // per-photon transmission
    double p_bg = 0.0;  // background photon probability per (port, bin)
    bool number_resolving = true;

    static FusionNoise ideal() { return {}; }

    void validate() const {
        auto prob = [](double v, const char* name) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw StateError(std::string("FusionNoise: ") + name + " must lie in [0,1]");
            }
        };
        prob(V, "V");
        prob(eta, "eta");
        prob(p_bg, "p_bg");
    }

    bool operator==(const FusionNoise&) const = default;
};

/// Click counts per (port, bin), slot index = 2*port + bin.
struct DetectionPattern {
    std::array<int, 4> counts{0, 0, 0, 0};

    static constexpr int slot(Port p, TimeBin t) { return 2 * static_cast<int>(p) + static_cast<int>(t); }

    static DetectionPattern of(std::initializer_list<std::pair<Port, TimeBin>> clicks) {
        DetectionPattern d;
        for (auto [p, t] : clicks) ++d.counts[slot(p, t)];
        return d;
    }

    int at(Port p, TimeBin t) const { return counts[slot(p, t)]; }
    int total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    int in_bin(TimeBin t) const { return at(Port::C, t) + at(Port::D, t); }

    /// Threshold detectors report at most one click per (port, bin).
    DetectionPattern saturated() const {
        DetectionPattern d;
        for (int i = 0; i < 4; ++i) d.counts[i] = counts[i] > 0 ? 1 : 0;
        return d;
    }

    /// e.g. "e_c,l_d" or "e_c*2"; "-" for no clicks.
    std::string str() const {
        std::string out;
        for (int port = 0; port < 2; ++port) {
            for (int bin = 0; bin < 2; ++bin) {
                int n = counts[2 * port + bin];
                if (n == 0) continue;
                if (!out.empty()) out += ',';
                out += bin == 0 ? 'e' : 'l';
                out += '_';
                out += port == 0 ? 'c' : 'd';
                if (n > 1) out += "*" + std::to_string(n);
            }
        }
        return out.empty() ? "-" : out;
    }

    auto operator<=>(const DetectionPattern&) const = default;
};

struct FusionOutcome {
    enum class Kind { SuccessPsiPlus, SuccessPsiMinus, FailurePhiSubspace, Erasure };
    Kind kind = Kind::Erasure;
    TimeBin bin = TimeBin::Early;  // meaningful for FailurePhiSubspace only

    static FusionOutcome psi_plus() { return {Kind::SuccessPsiPlus}; }
    static FusionOutcome psi_minus() { return {Kind::SuccessPsiMinus}; }
    static FusionOutcome failure(TimeBin t) { return {Kind::FailurePhiSubspace, t}; }
    static FusionOutcome erasure() { return {Kind::Erasure}; }

    bool is_success() const { return kind == Kind::SuccessPsiPlus || kind == Kind::SuccessPsiMinus; }
    bool is_failure() const { return kind == Kind::FailurePhiSubspace; }
    bool is_erasure() const { return kind == Kind::Erasure; }

    std::string str() const {
        switch (kind) {
            case Kind::SuccessPsiPlus:
                return "psi+";
            case Kind::SuccessPsiMinus:
                return "psi-";
            case Kind::FailurePhiSubspace:
                return std::string("phi(") + to_string(bin) + ")";
            case Kind::Erasure:
                return "erasure";
        }
        return "?";
    }

    bool operator==(const FusionOutcome& o) const {
        return kind == o.kind && (kind != Kind::FailurePhiSubspace || bin == o.bin);
    }
};

/// Two clicks in different bins: same port -> psi+, different ports -> psi-.
/// Two clicks in one bin -> phi-subspace failure. Anything else is erased.
inline FusionOutcome classify_pattern(const DetectionPattern& p) {
    if (p.total() != 2) {
        return FusionOutcome::erasure();
    }
    for (TimeBin t : {TimeBin::Early, TimeBin::Late}) {
        if (p.in_bin(t) == 2) return FusionOutcome::failure(t);
    }
    bool same_port = (p.at(Port::C, TimeBin::Early) == 1 && p.at(Port::C, TimeBin::Late) == 1) ||
                     (p.at(Port::D, TimeBin::Early) == 1 && p.at(Port::D, TimeBin::Late) == 1);
    return same_port ? FusionOutcome::psi_plus() : FusionOutcome::psi_minus();
}

/// Names the four qubits of a fusion input register.
struct FusionPorts {
    QubitLabel spin_a = QubitLabel::spin(0);
    QubitLabel photon_a = QubitLabel::photon(0);
    QubitLabel spin_b = QubitLabel::spin(1);
    QubitLabel photon_b = QubitLabel::photon(1);

    void check(const DensityMatrix& joint) const {
        if (joint.num_qubits() != 4) {
            throw StateError("fusion input must hold exactly spin_a, photon_a, spin_b, photon_b");
        }
        for (const auto& l : {spin_a, photon_a, spin_b, photon_b}) {
            if (!joint.contains(l)) throw StateError("fusion input lacks qubit " + l.str());
        }
    }
};

/// Per-photon probability of reaching the beam splitter and detectors.
struct Transmission {
    double a = 1.0;
    double b = 1.0;
};

/// POVM element per detection pattern on the photonic qubits (a, b).
struct FusionChannel {
    std::map<DetectionPattern, Matrix> povm;
    bool number_resolving = true;

    /// Heralded Kraus rows sqrt(lambda) <v| for one pattern.
    std::vector<Matrix> kraus(const DetectionPattern& p) const {
        std::vector<Matrix> rows;
        auto it = povm.find(p);
        if (it == povm.end()) return rows;
        Eigen::SelfAdjointEigenSolver<Matrix> es(it->second);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            double lam = es.eigenvalues()(i);
            if (lam > 1e-15) rows.push_back(std::sqrt(lam) * es.eigenvectors().col(i).adjoint());
        }
        return rows;
    }

    /// Summed POVM of every pattern in an outcome class.
    Matrix class_povm(const FusionOutcome& o) const {
        Matrix acc = Matrix::Zero(4, 4);
        for (const auto& [p, e] : povm) {
            if (classify_pattern(p) == o) acc += e;
        }
        return acc;
    }

    Matrix completeness() const {
        Matrix acc = Matrix::Zero(4, 4);
        for (const auto& [p, e] : povm) acc += e;
        return acc;
    }
};

namespace detail {

inline std::array<std::pair<int, double>, 2> bernoulli_pair(double p) { return {{{0, 1.0 - p}, {1, p}}}; }

/// Distribution of background click counts over the 4 (port, bin) slots.
inline std::vector<std::pair<DetectionPattern, double>> background_patterns(double p_bg) {
    std::vector<std::pair<DetectionPattern, double>> out;
    for (int mask = 0; mask < 16; ++mask) {
        double w = 1.0;
        DetectionPattern d;
        for (int s = 0; s < 4; ++s) {
            bool on = (mask >> s) & 1;
            w *= on ? p_bg : 1.0 - p_bg;
            d.counts[s] = on ? 1 : 0;
        }
        if (w > 0) out.emplace_back(d, w);
    }
    return out;
}

inline DetectionPattern add(const DetectionPattern& x, const DetectionPattern& y) {
    DetectionPattern d;
    for (int i = 0; i < 4; ++i) d.counts[i] = x.counts[i] + y.counts[i];
    return d;
}

/// |ta tb><ta' tb'| as a 4x4 photonic operator.
inline Matrix outer(int i, int j) {
    Matrix m = Matrix::Zero(4, 4);
    m(i, j) = 1.0;
    return m;
}

inline int pair_index(TimeBin ta, TimeBin tb) { return 2 * static_cast<int>(ta) + static_cast<int>(tb); }

/// Signal-only POVMs in closed form, keyed by the clicks the surviving
/// photons leave (before background and detector saturation).
inline std::vector<std::pair<DetectionPattern, Matrix>> signal_povms(bool a_arrives, bool b_arrives, double V) {
    using P = Port;
    using T = TimeBin;
    std::vector<std::pair<DetectionPattern, Matrix>> out;
    if (!a_arrives && !b_arrives) {
        out.emplace_back(DetectionPattern{}, Matrix::Identity(4, 4));
        return out;
    }
    if (a_arrives != b_arrives) {
        // One photon: which-bin is revealed, port is a fair coin; the other
        // photon's qubit is lost to the environment.
        for (T t : {T::Early, T::Late}) {
            Matrix proj = Matrix::Zero(4, 4);
            for (int other = 0; other < 2; ++other) {
                int idx = a_arrives ? pair_index(t, static_cast<T>(other)) : pair_index(static_cast<T>(other), t);
                proj(idx, idx) = 1.0;
            }
            for (P port : {P::C, P::D}) out.emplace_back(DetectionPattern::of({{port, t}}), 0.5 * proj);
        }
        return out;
    }
    // Both photons. Different bins never interfere; they herald mixtures of
    // psi+ / psi- weighted by (1 +- V)/2.
    const int el = pair_index(T::Early, T::Late);
    const int le = pair_index(T::Late, T::Early);
    auto block = [&](double off) {
        Matrix m = Matrix::Zero(4, 4);
        m(el, el) = m(le, le) = 0.25;
        m(el, le) = m(le, el) = 0.25 * off;
        return m;
    };
    out.emplace_back(DetectionPattern::of({{P::C, T::Early}, {P::C, T::Late}}), block(+V));
    out.emplace_back(DetectionPattern::of({{P::D, T::Early}, {P::D, T::Late}}), block(+V));
    out.emplace_back(DetectionPattern::of({{P::C, T::Early}, {P::D, T::Late}}), block(-V));
    out.emplace_back(DetectionPattern::of({{P::D, T::Early}, {P::C, T::Late}}), block(-V));
    // Same bin: Hong-Ou-Mandel bunching for the indistinguishable part.
    for (T t : {T::Early, T::Late}) {
        int tt = pair_index(t, t);
        out.emplace_back(DetectionPattern::of({{P::C, t}, {P::C, t}}), (1 + V) / 4 * outer(tt, tt));
        out.emplace_back(DetectionPattern::of({{P::D, t}, {P::D, t}}), (1 + V) / 4 * outer(tt, tt));
        out.emplace_back(DetectionPattern::of({{P::C, t}, {P::D, t}}), (1 - V) / 2 * outer(tt, tt));
    }
    return out;
}

}  // namespace detail

/// Closed-form pattern POVMs including loss, background and detector mode.
inline FusionChannel effective_channel(const FusionNoise& noise, Transmission tr) {
    noise.validate();
    FusionChannel ch;
    ch.number_resolving = noise.number_resolving;
    auto bg = detail::background_patterns(noise.p_bg);
    for (auto [sa, wa] : detail::bernoulli_pair(tr.a)) {
        for (auto [sb, wb] : detail::bernoulli_pair(tr.b)) {
            double w_loss = wa * wb;
            if (w_loss <= 0) continue;
            for (const auto& [signal, e] : detail::signal_povms(sa == 1, sb == 1, noise.V)) {
                for (const auto& [extra, w_bg] : bg) {
                    DetectionPattern p = detail::add(signal, extra);
                    if (!noise.number_resolving) p = p.saturated();
                    auto [it, inserted] = ch.povm.try_emplace(p, Matrix::Zero(4, 4));
                    it->second += (w_loss * w_bg) * e;
                }
            }
        }
    }
    return ch;
}

inline FusionChannel effective_channel(const FusionNoise& noise) {
    return effective_channel(noise, Transmission{noise.eta, noise.eta});
}

/// Unnormalized two-spin state Tr_ph[(I (x) E) rho] over (spin_a, spin_b).
inline Matrix herald_unnormalized(const DensityMatrix& joint, const FusionPorts& ports, const Matrix& e) {
    ports.check(joint);
    Labels order{ports.spin_a, ports.spin_b, ports.photon_a, ports.photon_b};
    DensityMatrix r = reorder(joint, order);
    Matrix out = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            Complex acc = 0.0;
            for (int p = 0; p < 4; ++p) {
                for (int q = 0; q < 4; ++q) {
                    acc += e(p, q) * r.matrix()(4 * i + q, 4 * j + p);
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

/// One entry per detection pattern with non-zero probability.
struct HeraldedPattern {
    DetectionPattern pattern;
    double probability = 0.0;
    std::optional<DensityMatrix> spins;  // over (spin_a, spin_b)
};

using FusionDistribution = std::vector<HeraldedPattern>;

inline constexpr double kNullProbability = 1e-14;

inline FusionDistribution herald_all(const DensityMatrix& joint, const FusionPorts& ports, const FusionChannel& ch) {
    FusionDistribution out;
    Labels spins{ports.spin_a, ports.spin_b};
    for (const auto& [p, e] : ch.povm) {
        Matrix rho = herald_unnormalized(joint, ports, e);
        double prob = rho.trace().real();
        if (prob < kNullProbability) {
            if (prob > 0) out.push_back({p, prob, std::nullopt});
            continue;
        }
        out.push_back({p, prob, DensityMatrix::trusted(rho / prob, spins)});
    }
    return out;
}

/// Heralded two-spin state and outcome from one sampled detection pattern.
struct FusionSample {
    FusionOutcome outcome;
    DetectionPattern pattern;
    std::optional<DensityMatrix> spins;  // empty on erasure
    std::size_t index = 0;               // entry in the distribution
};

inline FusionSample sample_fusion(const FusionDistribution& dist, Rng& rng) {
    std::vector<double> w;
    w.reserve(dist.size());
    for (const auto& h : dist) w.push_back(h.probability);
    std::size_t i = rng.categorical(w);
    const auto& h = dist[i];
    FusionOutcome o = classify_pattern(h.pattern);
    if (o.is_erasure() || !h.spins) return {FusionOutcome::erasure(), h.pattern, std::nullopt, i};
    return {o, h.pattern, h.spins, i};
}

/// Unnormalized heralded spin state summed over an outcome class.
inline std::pair<double, std::optional<DensityMatrix>> class_state(const FusionDistribution& dist,
                                                                   const FusionOutcome& o) {
    Matrix acc = Matrix::Zero(4, 4);
    double total = 0.0;
    Labels labels;
    for (const auto& h : dist) {
        if (!(classify_pattern(h.pattern) == o) || !h.spins) continue;
        acc += h.probability * h.spins->matrix();
        total += h.probability;
        labels = h.spins->labels();
    }
    if (total < kNullProbability) return {total, std::nullopt};
    return {total, DensityMatrix::trusted(acc / total, labels)};
}

/// Merges the failure bins into one phi-subspace condition.
inline std::pair<double, std::optional<DensityMatrix>> failure_state(const FusionDistribution& dist) {
    auto [pe, se] = class_state(dist, FusionOutcome::failure(TimeBin::Early));
    auto [pl, sl] = class_state(dist, FusionOutcome::failure(TimeBin::Late));
    double total = pe + pl;
    if (total < kNullProbability) return {total, std::nullopt};
    Matrix acc = Matrix::Zero(4, 4);
    Labels labels;
    if (se) {
        acc += pe * se->matrix();
        labels = se->labels();
    }
    if (sl) {
        acc += pl * sl->matrix();
        labels = sl->labels();
    }
    return {total, DensityMatrix::trusted(acc / total, labels)};
}

}  // namespace tbfusion

#endif  // TBFUSION_FUSION_HPP
