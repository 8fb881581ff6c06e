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

#ifndef TBFUSION_PIPELINE_HPP
#define TBFUSION_PIPELINE_HPP

#include <map>

#include "tbfusion/emitter.hpp"
#include "tbfusion/fock.hpp"
#include "tbfusion/fusion.hpp"

namespace tbfusion {

enum class FusionRoute { Oracle, Channel };

inline FusionPorts ports_for(const ResourceState& a, const ResourceState& b) {
    return {a.spin(), a.photon(), b.spin(), b.photon()};
}

inline FusionDistribution fuse_joint(const DensityMatrix& joint, const FusionNoise& noise, Transmission tr,
                                     const FusionPorts& ports, FusionRoute route) {
    if (route == FusionRoute::Oracle) return fock_fusion_oracle(joint, noise, tr, ports);
    return herald_all(joint, ports, effective_channel(noise, tr));
}

/// Fuses the photons of two resource states. Cycles in which the emitter
/// produced no photon enter with zero transmission for that photon.
inline FusionDistribution fuse_resources(const ResourceState& a, const ResourceState& b, const FusionNoise& noise,
                                         FusionRoute route = FusionRoute::Channel) {
    if (a.cycle() == b.cycle()) throw StateError("fuse_resources: resource states must come from different cycles");
    FusionPorts ports = ports_for(a, b);

    struct Branch {
        double weight;
        DensityMatrix state;
        bool present;
    };
    auto branches = [](const ResourceState& r) {
        std::vector<Branch> out;
        double p = r.emission_probability();
        if (auto e = r.emitted(); e && p > kNullProbability) out.push_back({p, *e, true});
        if (auto l = r.lost_spin(); l && 1.0 - p > kNullProbability) {
            // Placeholder photon in |e>; it never reaches a detector.
            out.push_back({1.0 - p, tensor(*l, DensityMatrix::basis(0, {r.photon()})), false});
        }
        return out;
    };

    std::map<DetectionPattern, Matrix> unnorm;
    Labels spins{ports.spin_a, ports.spin_b};
    for (const auto& ba : branches(a)) {
        for (const auto& bb : branches(b)) {
            DensityMatrix joint = tensor(ba.state, bb.state);
            Transmission tr{ba.present ? noise.eta : 0.0, bb.present ? noise.eta : 0.0};
            for (const auto& h : fuse_joint(joint, noise, tr, ports, route)) {
                if (!h.spins) continue;
                auto [it, inserted] = unnorm.try_emplace(h.pattern, Matrix::Zero(4, 4));
                it->second += (ba.weight * bb.weight * h.probability) * h.spins->matrix();
            }
        }
    }
    FusionDistribution out;
    for (const auto& [p, m] : unnorm) {
        double prob = m.trace().real();
        if (prob < kNullProbability) continue;
        out.push_back({p, prob, DensityMatrix::trusted(m / prob, spins)});
    }
    return out;
}

/// Two ideal resource states from consecutive cycles, as one 4-qubit register
/// (spin0, photon0, spin1, photon1).
inline DensityMatrix ideal_resource_pair() {
    auto one = [](int cycle) {
        return DensityMatrix::from_pure(resource_target(), {QubitLabel::spin(cycle), QubitLabel::photon(cycle)});
    };
    return tensor(one(0), one(1));
}

}  // namespace tbfusion

#endif  // TBFUSION_PIPELINE_HPP
