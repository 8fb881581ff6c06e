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

#ifndef TBFUSION_EMITTER_HPP
#define TBFUSION_EMITTER_HPP

/// Spin-photon resource-state generation with a time-bin emitter.
///
/// Conventions:
///  - spin |0> = up, |1> = down; only |1> emits (cycling transition);
///  - photonic qubit |0> = early bin, |1> = late bin;
///  - a PhotonFlag qubit marks whether the photon was emitted (|1>) or the
///    mode is still void (|0>); it is projected out into a loss tag once
///    the cycle is complete;
///  - R(phi, theta) = cos(theta/2) I - i sin(theta/2) (cos(phi) X + sin(phi) Y);
///  - readout click <-> |1> <-> eigenvalue -1.
///
/// With both control pulses about +Y the ideal cycle produces
/// (|0,e> - |1,l>)/sqrt2 exactly.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tbfusion/densop.hpp"
#include "tbfusion/rng.hpp"

namespace tbfusion {

enum class Basis : char { X = 'X', Y = 'Y', Z = 'Z' };

inline Basis basis_from_char(char c) {
    switch (c) {
        case 'X':
            return Basis::X;
        case 'Y':
            return Basis::Y;
        case 'Z':
            return Basis::Z;
        default:
            throw StateError(std::string("unknown Pauli basis '") + c + "'");
    }
}

inline char to_char(Basis b) { return static_cast<char>(b); }

enum class TimeBin : int { Early = 0, Late = 1 };

inline const char* to_string(TimeBin t) { return t == TimeBin::Early ? "e" : "l"; }

struct Rotation {
    double phi = 0.0;
    double theta = 0.0;

    Matrix matrix() const {
        Matrix m(2, 2);
        double c = std::cos(theta / 2);
        double s = std::sin(theta / 2);
        Complex nx = std::cos(phi);
        Complex ny = std::sin(phi);
        // -i s (nx X + ny Y)
        m(0, 0) = c;
        m(1, 1) = c;
        m(0, 1) = Complex(0, -1) * s * (nx - Complex(0, 1) * ny);
        m(1, 0) = Complex(0, -1) * s * (nx + Complex(0, 1) * ny);
        return m;
    }

    bool operator==(const Rotation&) const = default;
};

/// Rz(phase) = exp(-i phase Z / 2): quasi-static precession of the spin.
inline Matrix precession(double phase) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -phase / 2);
    m(1, 1) = std::polar(1.0, phase / 2);
    return m;
}

namespace pulses {
inline constexpr double kHalfPi = std::numbers::pi / 2;
inline constexpr double kPi = std::numbers::pi;
/// Control axis for the entangling pulses (+Y).
inline constexpr double kControlAxis = std::numbers::pi / 2;
}  // namespace pulses

/// Rotation that maps the +1 eigenstate of `basis` onto |0>, so that a
/// subsequent Z readout measures `basis`. Z needs none.
inline std::optional<Rotation> basis_change_rotation(Basis basis) {
    switch (basis) {
        case Basis::X:
            return Rotation{-pulses::kHalfPi, pulses::kHalfPi};  // Ry(-pi/2)
        case Basis::Y:
            return Rotation{0.0, pulses::kHalfPi};  // Rx(pi/2)
        case Basis::Z:
            return std::nullopt;
    }
    return std::nullopt;
}

namespace step {
struct Initialize {
    bool operator==(const Initialize&) const = default;
};
struct Rotate {
    Rotation rotation;
    bool basis_change = false;
    bool operator==(const Rotate&) const = default;
};
/// Static phase accumulated by the spin (used to probe the echo).
struct Precess {
    double phase = 0.0;
    bool operator==(const Precess&) const = default;
};
struct EmitTimeBin {
    TimeBin slot;
    bool operator==(const EmitTimeBin&) const = default;
};
/// Physical readout is always Z; `basis` records the logical basis.
struct Readout {
    Basis basis = Basis::Z;
    bool operator==(const Readout&) const = default;
};
}  // namespace step

using Step = std::variant<step::Initialize, step::Rotate, step::Precess, step::EmitTimeBin, step::Readout>;

struct PulseSequence {
    std::vector<Step> steps;

    /// Throws StateError when the sequence is malformed.
    void validate() const {
        if (steps.empty() || !std::holds_alternative<step::Initialize>(steps.front())) {
            throw StateError("PulseSequence: must start with Initialize");
        }
        if (!std::holds_alternative<step::Readout>(steps.back())) {
            throw StateError("PulseSequence: must end with Readout");
        }
        int inits = 0;
        int readouts = 0;
        std::vector<TimeBin> emitted;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const auto& s = steps[i];
            if (std::holds_alternative<step::Initialize>(s)) ++inits;
            if (std::holds_alternative<step::Readout>(s)) ++readouts;
            if (const auto* e = std::get_if<step::EmitTimeBin>(&s)) emitted.push_back(e->slot);
            if (const auto* r = std::get_if<step::Rotate>(&s); r && r->basis_change) {
                if (i + 2 != steps.size()) {
                    throw StateError("PulseSequence: basis-change rotation must directly precede Readout");
                }
            }
        }
        if (inits != 1) throw StateError("PulseSequence: exactly one Initialize required");
        if (readouts != 1) throw StateError("PulseSequence: exactly one terminal Readout required");
        if (emitted != std::vector<TimeBin>{TimeBin::Early, TimeBin::Late}) {
            throw StateError("PulseSequence: expected one early then one late emission");
        }
    }

    Basis readout_basis() const { return std::get<step::Readout>(steps.back()).basis; }
};

/// Initialize, pi/2, emit early, pi, emit late, [basis change], readout.
inline PulseSequence standard_sequence(Basis readout = Basis::Z) {
    using namespace pulses;
    PulseSequence seq{{
        step::Initialize{},
        step::Rotate{{kControlAxis, kHalfPi}, false},
        step::EmitTimeBin{TimeBin::Early},
        step::Rotate{{kControlAxis, kPi}, false},
        step::EmitTimeBin{TimeBin::Late},
    }};
    if (auto r = basis_change_rotation(readout)) {
        seq.steps.push_back(step::Rotate{*r, true});
    }
    seq.steps.push_back(step::Readout{readout});
    return seq;
}

struct EmitterNoise {
    double p_init_err = 0.0;
    double theta_err_pi = 0.0;
    double theta_err_pi2 = 0.0;
    double p_deph_cycle = 0.0;
    double p_flip_cycle = 0.0;
    double f_read_1 = 1.0;  // P(click | |1>)
    double f_read_0 = 0.0;  // P(click | |0>)
    double p_emit_fail = 0.0;

    static EmitterNoise ideal() { return {}; }

    void validate() const {
        auto prob = [](double v, const char* name) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw StateError(std::string("EmitterNoise: ") + name + " must lie in [0,1]");
            }
        };
        auto angle = [](double v, const char* name) {
            if (!(v > -std::numbers::pi && v <= std::numbers::pi)) {
                throw StateError(std::string("EmitterNoise: ") + name + " must lie in (-pi, pi]");
            }
        };
        prob(p_init_err, "p_init_err");
        prob(p_deph_cycle, "p_deph_cycle");
        prob(p_flip_cycle, "p_flip_cycle");
        prob(f_read_1, "f_read_1");
        prob(f_read_0, "f_read_0");
        prob(p_emit_fail, "p_emit_fail");
        angle(theta_err_pi, "theta_err_pi");
        angle(theta_err_pi2, "theta_err_pi2");
    }

    bool operator==(const EmitterNoise&) const = default;
};

/// Phase-flip probability between the bins for Gaussian dephasing with
/// coherence time t2star over an inter-bin window tau.
inline double dephasing_from_t2star(double tau, double t2star) {
    double r = tau / t2star;
    return (1.0 - std::exp(-r * r)) / 2.0;
}

/// Inert hardware metadata, kept for documentation only.
struct DeviceMetadata {
    double wavelength_nm = 947.86;
    double magnetic_field_T = 4.0;
    double raman_detuning_GHz = 650.0;
    bool operator==(const DeviceMetadata&) const = default;
};

struct ExperimentConfig {
    double cycle_separation_ns = 300.0;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    DeviceMetadata metadata;

    void validate() const {
        if (shots < 1) throw StateError("ExperimentConfig: shots must be >= 1");
        if (!(cycle_separation_ns > 0)) throw StateError("ExperimentConfig: cycle_separation_ns must be positive");
    }

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline Matrix projector1(int bit) {
    Matrix m = Matrix::Zero(2, 2);
    m(bit, bit) = 1.0;
    return m;
}

inline Matrix basis_swap(Eigen::Index dim, Eigen::Index a, Eigen::Index b) {
    Matrix m = Matrix::Identity(dim, dim);
    m(a, a) = m(b, b) = 0.0;
    m(a, b) = m(b, a) = 1.0;
    return m;
}

/// Over-rotation applied to a control or basis-change pulse.
inline Rotation with_error(Rotation r, const EmitterNoise& noise) {
    double mag = std::abs(r.theta);
    double err = 0.0;
    if (std::abs(mag - pulses::kHalfPi) < 1e-9) {
        err = noise.theta_err_pi2;
    } else if (std::abs(mag - pulses::kPi) < 1e-9) {
        err = noise.theta_err_pi;
    }
    r.theta += r.theta < 0 ? -err : err;
    return r;
}

}  // namespace detail

/// Register (spin, photon, flag) of one emission cycle plus which bins fired.
struct EmitterState {
    DensityMatrix rho;
    int cycle = 0;
    std::array<bool, 2> emitted{false, false};

    QubitLabel spin() const { return QubitLabel::spin(cycle); }
    QubitLabel photon() const { return QubitLabel::photon(cycle); }
    QubitLabel flag() const { return QubitLabel::flag(cycle); }
};

inline EmitterState initialize_cycle(int cycle, const EmitterNoise& noise) {
    Labels labels{QubitLabel::spin(cycle), QubitLabel::photon(cycle), QubitLabel::flag(cycle)};
    Matrix rho = Matrix::Zero(8, 8);
    rho(0, 0) = 1.0 - noise.p_init_err;
    rho(4, 4) = noise.p_init_err;  // |1,0,0>
    return {DensityMatrix(rho, labels), cycle, {false, false}};
}

/// Spin-conditioned emission into `slot`: |1>_s|void> -> |1>_s|slot>, with
/// failed excitations (probability p_emit_fail) leaving the mode void.
inline EmitterState emit_step(const EmitterState& st, TimeBin slot, const EmitterNoise& noise) {
    auto idx = static_cast<std::size_t>(slot);
    if (st.emitted[idx]) {
        throw StateError(std::string("emit_step: bin ") + to_string(slot) + " already emitted this cycle");
    }
    if (!st.rho.contains(st.spin()) || !st.rho.contains(st.photon()) || !st.rho.contains(st.flag())) {
        throw StateError("emit_step: register lacks the cycle's spin/photon/flag qubits");
    }
    // Basis index over (spin, photon, flag): |1,0,0> = 4, |1,b,1> = 5 or 7.
    Matrix swap = detail::basis_swap(8, 4, slot == TimeBin::Early ? 5 : 7);
    Matrix keep0 = kron(detail::projector1(0), Matrix::Identity(4, 4));
    Matrix keep1 = kron(detail::projector1(1), Matrix::Identity(4, 4));
    double p = noise.p_emit_fail;
    KrausChannel ch{{swap * (keep0 + std::sqrt(1.0 - p) * keep1), std::sqrt(p) * keep1}, false};
    Labels targets{st.spin(), st.photon(), st.flag()};
    EmitterState out = st;
    out.rho = apply_channel(st.rho, ch, targets);
    out.emitted[idx] = true;
    return out;
}

inline KrausChannel phase_flip_channel(double p) {
    return {{std::sqrt(1.0 - p) * pauli_matrix('I'), std::sqrt(p) * pauli_matrix('Z')}, false};
}

inline KrausChannel bit_flip_channel(double p) {
    return {{std::sqrt(1.0 - p) * pauli_matrix('I'), std::sqrt(p) * pauli_matrix('X')}, false};
}

/// Output of one generation cycle over (spin, photon, flag).
class ResourceState {
  public:
    explicit ResourceState(DensityMatrix joint, int cycle) : joint_(std::move(joint)), cycle_(cycle) {}

    const DensityMatrix& joint() const { return joint_; }
    int cycle() const { return cycle_; }
    QubitLabel spin() const { return QubitLabel::spin(cycle_); }
    QubitLabel photon() const { return QubitLabel::photon(cycle_); }
    QubitLabel flag() const { return QubitLabel::flag(cycle_); }

    double emission_probability() const {
        Labels t{flag()};
        return std::clamp(expect_on(joint_, PauliString("Z", -1), t) * 0.5 + 0.5, 0.0, 1.0);
    }

    /// Spin-photon state conditioned on a photon being present.
    std::optional<DensityMatrix> emitted() const { return branch(1); }

    /// Spin state conditioned on no photon (photon slot dropped).
    std::optional<DensityMatrix> lost_spin() const {
        auto b = branch(0);
        if (!b) return std::nullopt;
        Labels keep{spin()};
        return partial_trace(*b, keep);
    }

    /// <target, present| joint |target, present> for a (spin, photon) target.
    double fidelity(const Vector& target) const {
        Vector full = Vector::Zero(8);
        for (Eigen::Index i = 0; i < 4; ++i) full(2 * i + 1) = target(i);
        return fidelity_to_pure(joint_, full);
    }

  private:
    std::optional<DensityMatrix> branch(int flag_bit) const {
        Labels t{flag()};
        auto pr = project(joint_, detail::projector1(flag_bit), t);
        if (pr.null()) return std::nullopt;
        Labels keep{spin(), photon()};
        return partial_trace(*pr.state, keep);
    }

    DensityMatrix joint_;
    int cycle_;
};

/// (|0,e> - |1,l>)/sqrt2 over (spin, photon).
inline Vector resource_target() { return bell::phi_minus(); }

/// Runs every step before the readout stage. Dephasing acts between the
/// two emissions, the per-cycle bit flip after the late one.
inline ResourceState generate_resource_state(const PulseSequence& seq, const EmitterNoise& noise, int cycle = 0) {
    seq.validate();
    noise.validate();
    std::optional<EmitterState> st;
    for (const auto& s : seq.steps) {
        if (std::holds_alternative<step::Initialize>(s)) {
            st = initialize_cycle(cycle, noise);
        } else if (const auto* r = std::get_if<step::Rotate>(&s)) {
            if (r->basis_change) break;
            Labels t{st->spin()};
            st->rho = apply_unitary(st->rho, detail::with_error(r->rotation, noise).matrix(), t);
        } else if (const auto* pr = std::get_if<step::Precess>(&s)) {
            Labels t{st->spin()};
            st->rho = apply_unitary(st->rho, precession(pr->phase), t);
        } else if (const auto* e = std::get_if<step::EmitTimeBin>(&s)) {
            st = emit_step(*st, e->slot, noise);
            Labels t{st->spin()};
            if (e->slot == TimeBin::Early) {
                st->rho = apply_channel(st->rho, phase_flip_channel(noise.p_deph_cycle), t);
            } else {
                st->rho = apply_channel(st->rho, bit_flip_channel(noise.p_flip_cycle), t);
            }
        } else if (std::holds_alternative<step::Readout>(s)) {
            break;
        }
    }
    return ResourceState(std::move(st->rho), cycle);
}

/// Readout observable in the pre-rotation frame: the expected +-1 outcome
/// of readout_spin in `basis` is Tr(rho O).
inline Matrix readout_observable(Basis basis, const EmitterNoise& noise) {
    Matrix o = Matrix::Zero(2, 2);
    o(0, 0) = 1.0 - 2.0 * noise.f_read_0;
    o(1, 1) = 1.0 - 2.0 * noise.f_read_1;
    if (auto r = basis_change_rotation(basis)) {
        Matrix u = detail::with_error(*r, noise).matrix();
        return u.adjoint() * o * u;
    }
    return o;
}

struct ReadoutResult {
    int outcome = +1;  // +1 no click, -1 click
    DensityMatrix state;
};

/// Basis change (with pulse error), then a click/no-click draw through the
/// readout confusion matrix; the state is updated by the matching Kraus.
inline ReadoutResult readout_spin(const DensityMatrix& rho, const QubitLabel& spin, Basis basis, const EmitterNoise& noise,
                                  Rng& rng) {
    Labels t{spin};
    DensityMatrix rotated = rho;
    if (auto r = basis_change_rotation(basis)) {
        rotated = apply_unitary(rho, detail::with_error(*r, noise).matrix(), t);
    }
    Matrix click = Matrix::Zero(2, 2);
    click(0, 0) = std::sqrt(noise.f_read_0);
    click(1, 1) = std::sqrt(noise.f_read_1);
    Matrix dark = Matrix::Zero(2, 2);
    dark(0, 0) = std::sqrt(1.0 - noise.f_read_0);
    dark(1, 1) = std::sqrt(1.0 - noise.f_read_1);

    auto p_click_branch = project(rotated, click, t);
    bool clicked = rng.bernoulli(p_click_branch.probability);
    if (clicked) {
        return {-1, std::move(*p_click_branch.state)};
    }
    auto p_dark_branch = project(rotated, dark, t);
    return {+1, std::move(*p_dark_branch.state)};
}

}  // namespace tbfusion

#endif  // TBFUSION_EMITTER_HPP
