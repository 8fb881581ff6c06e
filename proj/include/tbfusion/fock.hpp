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

#ifndef TBFUSION_FOCK_HPP
#define TBFUSION_FOCK_HPP

/// Brute-force Fock-space oracle for the time-bin fusion measurement.
///
/// Each photon carries a two-dimensional internal state (alpha for photon a,
/// beta for photon b, |<alpha|beta>|^2 = V) that the detectors do not
/// resolve. Creation operators are pushed through the beam splitter and
/// expanded over occupation-number states of the 8 output modes
/// (port x bin x internal); every internal-resolved output state yields one
/// Kraus row on the photonic qubits.

#include <array>
#include <cmath>
#include <map>

#include "tbfusion/fusion.hpp"

namespace tbfusion {

/// Occupation-number superposition over the output modes.
class FockState {
  public:
    static constexpr int kModes = 8;
    using Occupation = std::array<std::uint8_t, kModes>;

    static constexpr int mode(Port p, TimeBin t, int internal) {
        return (2 * static_cast<int>(p) + static_cast<int>(t)) * 2 + internal;
    }

    static FockState vacuum() {
        FockState s;
        s.amps_[Occupation{}] = 1.0;
        return s;
    }

    /// Applies sum_m coeffs[m] a^dag_m.
    FockState create(const std::array<Complex, kModes>& coeffs) const {
        FockState out;
        for (const auto& [occ, amp] : amps_) {
            for (int m = 0; m < kModes; ++m) {
                if (coeffs[m] == Complex(0.0)) continue;
                Occupation next = occ;
                next[m] += 1;
                out.amps_[next] += amp * coeffs[m] * std::sqrt(static_cast<double>(next[m]));
            }
        }
        return out;
    }

    const std::map<Occupation, Complex>& amplitudes() const { return amps_; }

    int photon_number(const Occupation& occ) const {
        int n = 0;
        for (auto c : occ) n += c;
        return n;
    }

    double norm2() const {
        double n = 0.0;
        for (const auto& [occ, amp] : amps_) n += std::norm(amp);
        return n;
    }

    static DetectionPattern clicks(const Occupation& occ) {
        DetectionPattern d;
        for (int port = 0; port < 2; ++port) {
            for (int bin = 0; bin < 2; ++bin) {
                d.counts[2 * port + bin] = occ[mode(static_cast<Port>(port), static_cast<TimeBin>(bin), 0)] +
                                           occ[mode(static_cast<Port>(port), static_cast<TimeBin>(bin), 1)];
            }
        }
        return d;
    }

  private:
    std::map<Occupation, Complex> amps_;
};

namespace detail {

/// Creation-operator coefficients at the outputs for one input photon.
inline std::array<Complex, FockState::kModes> input_photon(int input_port, TimeBin bin, const std::array<double, 2>& internal) {
    std::array<Complex, FockState::kModes> c{};
    const double r = 1.0 / std::sqrt(2.0);
    const double to_c = r;
    const double to_d = input_port == 0 ? r : -r;
    for (int i = 0; i < 2; ++i) {
        c[FockState::mode(Port::C, bin, i)] += to_c * internal[i];
        c[FockState::mode(Port::D, bin, i)] += to_d * internal[i];
    }
    return c;
}

}  // namespace detail

/// Enumerates every detection pattern with its probability and heralded
/// two-spin state. Photon loss is treated by tracing the lost photon's qubit.
inline FusionDistribution fock_fusion_oracle(const DensityMatrix& joint, const FusionNoise& noise, Transmission tr,
                                             const FusionPorts& ports = {}) {
    noise.validate();
    ports.check(joint);
    Labels order{ports.spin_a, ports.spin_b, ports.photon_a, ports.photon_b};
    const Matrix rho = reorder(joint, order).matrix();

    const std::array<double, 2> alpha{1.0, 0.0};
    const std::array<double, 2> beta{std::sqrt(noise.V), std::sqrt(1.0 - noise.V)};
    auto bg = detail::background_patterns(noise.p_bg);

    std::map<DetectionPattern, Matrix> unnorm;
    auto deposit = [&](const DetectionPattern& signal, double weight, const Vector& row) {
        // row over photon basis |ta tb>: rho_s += w * (I (x) <row|) rho (I (x) |row>)
        Matrix spins = Matrix::Zero(4, 4);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                Complex acc = 0.0;
                for (int p = 0; p < 4; ++p) {
                    if (row(p) == Complex(0.0)) continue;
                    for (int q = 0; q < 4; ++q) {
                        if (row(q) == Complex(0.0)) continue;
                        acc += row(p) * rho(4 * i + p, 4 * j + q) * std::conj(row(q));
                    }
                }
                spins(i, j) = acc;
            }
        }
        for (const auto& [extra, w_bg] : bg) {
            DetectionPattern pat = detail::add(signal, extra);
            if (!noise.number_resolving) pat = pat.saturated();
            auto [it, inserted] = unnorm.try_emplace(pat, Matrix::Zero(4, 4));
            it->second += (weight * w_bg) * spins;
        }
    };

    for (int sa = 0; sa < 2; ++sa) {
        for (int sb = 0; sb < 2; ++sb) {
            double w = (sa ? tr.a : 1.0 - tr.a) * (sb ? tr.b : 1.0 - tr.b);
            if (w <= 0) continue;
            // Lost photons leave their time bin in the environment: one Kraus
            // family per environment basis state.
            for (int env_a = 0; env_a < (sa ? 1 : 2); ++env_a) {
                for (int env_b = 0; env_b < (sb ? 1 : 2); ++env_b) {
                    std::map<FockState::Occupation, Vector> rows;
                    for (int ta = 0; ta < 2; ++ta) {
                        if (!sa && ta != env_a) continue;
                        for (int tb = 0; tb < 2; ++tb) {
                            if (!sb && tb != env_b) continue;
                            FockState f = FockState::vacuum();
                            if (sa) f = f.create(detail::input_photon(0, static_cast<TimeBin>(ta), alpha));
                            if (sb) f = f.create(detail::input_photon(1, static_cast<TimeBin>(tb), beta));
                            for (const auto& [occ, amp] : f.amplitudes()) {
                                auto [it, inserted] = rows.try_emplace(occ, Vector::Zero(4));
                                // Kraus row entry <occ| F(ta, tb)>
                                it->second(2 * ta + tb) += amp;
                            }
                        }
                    }
                    for (const auto& [occ, row] : rows) {
                        deposit(FockState::clicks(occ), w, row);
                    }
                }
            }
        }
    }

    FusionDistribution out;
    Labels spins{ports.spin_a, ports.spin_b};
    for (const auto& [p, m] : unnorm) {
        double prob = m.trace().real();
        if (prob <= 0) continue;
        if (prob < kNullProbability) {
            out.push_back({p, prob, std::nullopt});
            continue;
        }
        out.push_back({p, prob, DensityMatrix::trusted(m / prob, spins)});
    }
    return out;
}

inline FusionDistribution fock_fusion_oracle(const DensityMatrix& joint, const FusionNoise& noise,
                                             const FusionPorts& ports = {}) {
    return fock_fusion_oracle(joint, noise, Transmission{noise.eta, noise.eta}, ports);
}

/// Samples one pattern from the oracle distribution.
inline FusionSample sample_fusion(const DensityMatrix& joint, const FusionNoise& noise, Rng& rng,
                                  const FusionPorts& ports = {}) {
    return sample_fusion(fock_fusion_oracle(joint, noise, ports), rng);
}

}  // namespace tbfusion

#endif  // TBFUSION_FOCK_HPP
