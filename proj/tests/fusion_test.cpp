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

#include "tbfusion/pipeline.hpp"

#include "gtest/gtest.h"

using namespace tbfusion;

namespace {

using P = Port;
using T = TimeBin;

const DetectionPattern kEcLc = DetectionPattern::of({{P::C, T::Early}, {P::C, T::Late}});
const DetectionPattern kEdLd = DetectionPattern::of({{P::D, T::Early}, {P::D, T::Late}});
const DetectionPattern kEcLd = DetectionPattern::of({{P::C, T::Early}, {P::D, T::Late}});
const DetectionPattern kEdLc = DetectionPattern::of({{P::D, T::Early}, {P::C, T::Late}});

const HeraldedPattern* find(const FusionDistribution& d, const DetectionPattern& p) {
    for (const auto& h : d) {
        if (h.pattern == p) return &h;
    }
    return nullptr;
}

double prob_of(const FusionDistribution& d, const DetectionPattern& p) {
    const auto* h = find(d, p);
    return h ? h->probability : 0.0;
}

double total(const FusionDistribution& d) {
    double t = 0.0;
    for (const auto& h : d) t += h.probability;
    return t;
}

// First-quantized two-photon amplitudes for identical photons: the
// amplitude of finding the photons in output modes (x, y) is the permanent
// of the 2x2 beam-splitter submatrix, with a sqrt2 for a doubly occupied mode.
// Independent of the Fock-state machinery.
double ideal_pattern_probability_by_permanent(const DetectionPattern& target) {
    const double r = 1 / std::sqrt(2.0);
    const double bs[2][2] = {{r, r}, {r, -r}};  // bs[out port][in port]
    // resource pair: (|0e> - |1l>)/sqrt2 per cycle -> amplitude over (sa, ta, sb, tb)
    auto res = [](int s, int t) { return s == t ? (s == 0 ? 1.0 : -1.0) / std::sqrt(2.0) : 0.0; };
    double prob = 0.0;
    for (int sa = 0; sa < 2; ++sa) {
        for (int sb = 0; sb < 2; ++sb) {
            // amplitude for this spin pair to produce the target pattern
            double amp_total = 0.0;
            for (int ta = 0; ta < 2; ++ta) {
                for (int tb = 0; tb < 2; ++tb) {
                    double a_in = res(sa, ta) * res(sb, tb);
                    if (a_in == 0.0) continue;
                    // enumerate output ports for each photon
                    double amp = 0.0;
                    for (int xa = 0; xa < 2; ++xa) {
                        for (int xb = 0; xb < 2; ++xb) {
                            DetectionPattern d;
                            d.counts[2 * xa + ta] += 1;
                            d.counts[2 * xb + tb] += 1;
                            if (d != target) continue;
                            amp += bs[xa][0] * bs[xb][1];
                        }
                    }
                    // normalization of the symmetric output state
                    bool same_mode = false;
                    for (int s = 0; s < 4; ++s) same_mode |= target.counts[s] == 2;
                    amp_total += a_in * amp * (same_mode ? std::sqrt(2.0) : 1.0);
                }
            }
            prob += amp_total * amp_total;
        }
    }
    return prob;
}

}  // namespace

TEST(fusion, classify_pattern) {
    EXPECT_EQ(classify_pattern(kEcLd), FusionOutcome::psi_minus());
    EXPECT_EQ(classify_pattern(kEdLc), FusionOutcome::psi_minus());
    EXPECT_EQ(classify_pattern(kEcLc), FusionOutcome::psi_plus());
    EXPECT_EQ(classify_pattern(kEdLd), FusionOutcome::psi_plus());
    EXPECT_EQ(classify_pattern(DetectionPattern::of({{P::C, T::Early}, {P::D, T::Early}})),
              FusionOutcome::failure(T::Early));
    EXPECT_EQ(classify_pattern(DetectionPattern::of({{P::D, T::Late}, {P::D, T::Late}})),
              FusionOutcome::failure(T::Late));
    EXPECT_EQ(classify_pattern(DetectionPattern::of({{P::C, T::Early}})), FusionOutcome::erasure());
    EXPECT_EQ(classify_pattern(DetectionPattern{}), FusionOutcome::erasure());
    EXPECT_EQ(classify_pattern(DetectionPattern::of({{P::C, T::Early}, {P::C, T::Late}, {P::D, T::Late}})),
              FusionOutcome::erasure());
    EXPECT_EQ(DetectionPattern::of({{P::C, T::Early}, {P::C, T::Early}}).str(), "e_c*2");
    EXPECT_EQ(kEcLd.str(), "e_c,l_d");
}

TEST(fusion, independent_permanent_check_of_ideal_split) {
    for (const auto& p : {kEcLc, kEdLd, kEcLd, kEdLc}) {
        EXPECT_NEAR(ideal_pattern_probability_by_permanent(p), 0.125, 1e-15) << p.str();
    }
    EXPECT_NEAR(ideal_pattern_probability_by_permanent(DetectionPattern::of({{P::C, T::Early}, {P::C, T::Early}})),
                0.125, 1e-15);
    EXPECT_NEAR(ideal_pattern_probability_by_permanent(DetectionPattern::of({{P::C, T::Early}, {P::D, T::Early}})),
                0.0, 1e-15);
}

TEST(fusion, oracle_ideal_success_split) {
    auto d = fock_fusion_oracle(ideal_resource_pair(), FusionNoise::ideal());
    EXPECT_NEAR(total(d), 1.0, 1e-12);
    double success = 0.0;
    for (const auto& p : {kEcLc, kEdLd, kEcLd, kEdLc}) {
        EXPECT_NEAR(prob_of(d, p), 0.125, 1e-12) << p.str();
        EXPECT_NEAR(prob_of(d, p), ideal_pattern_probability_by_permanent(p), 1e-12);
        success += prob_of(d, p);
    }
    EXPECT_NEAR(success, 0.5, 1e-12);

    const auto* plus = find(d, kEcLc);
    ASSERT_TRUE(plus && plus->spins);
    EXPECT_NEAR(fidelity_to_pure(*plus->spins, bell::psi_plus()), 1.0, 1e-12);
    const auto* minus = find(d, kEcLd);
    ASSERT_TRUE(minus && minus->spins);
    EXPECT_NEAR(fidelity_to_pure(*minus->spins, bell::psi_minus()), 1.0, 1e-12);
}

TEST(fusion, oracle_distinguishable_photons) {
    FusionNoise noise;
    noise.V = 0.0;
    auto d = fock_fusion_oracle(ideal_resource_pair(), noise);
    const auto* h = find(d, kEcLd);
    ASSERT_TRUE(h && h->spins);
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = expected(2, 2) = 0.5;
    EXPECT_LT((h->spins->matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(expect(*h->spins, PauliString("ZZ")), -1.0, 1e-12);
    EXPECT_NEAR(expect(*h->spins, PauliString("XX")), 0.0, 1e-12);
    EXPECT_NEAR(expect(*h->spins, PauliString("YY")), 0.0, 1e-12);
}

TEST(fusion, effective_channel_examples) {
    Vector psim = bell::psi_minus();
    Vector psip = bell::psi_plus();
    auto ch1 = effective_channel(FusionNoise::ideal());
    EXPECT_LT((ch1.povm.at(kEcLd) - 0.5 * psim * psim.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    auto rows = ch1.kraus(kEcLd);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(std::abs((rows[0] * psim)(0, 0)), 1 / std::sqrt(2.0), 1e-12);
    auto d1 = herald_all(ideal_resource_pair(), FusionPorts{}, ch1);
    EXPECT_NEAR(prob_of(d1, kEcLd), 0.125, 1e-12);

    FusionNoise v0;
    v0.V = 0.0;
    auto ch0 = effective_channel(v0);
    Matrix mix = 0.25 * (psim * psim.adjoint() + psip * psip.adjoint());
    EXPECT_LT((ch0.povm.at(kEcLd) - mix).cwiseAbs().maxCoeff(), 1e-15);

    auto [pf, failed] = class_state(d1, FusionOutcome::failure(T::Early));
    ASSERT_TRUE(failed.has_value());
    EXPECT_NEAR(failed->matrix()(0, 0).real(), 1.0, 1e-12);
    EXPECT_NEAR(expect(*failed, PauliString("ZZ")), 1.0, 1e-12);
    EXPECT_NEAR(pf, 0.25, 1e-12);
}

TEST(fusion, completeness_and_oracle_equivalence_grid) {
    EmitterNoise en;
    en.p_deph_cycle = 0.1;
    en.p_flip_cycle = 0.03;
    en.theta_err_pi2 = 0.1;
    auto noisy = tensor(*generate_resource_state(standard_sequence(), en, 0).emitted(),
                        *generate_resource_state(standard_sequence(), en, 1).emitted());
    for (const DensityMatrix& joint : {ideal_resource_pair(), noisy}) {
        for (double V : {0.0, 0.5, 0.9, 1.0}) {
            for (double eta : {0.5, 1.0}) {
                for (double bg : {0.0, 0.05}) {
                    for (bool nr : {true, false}) {
                        FusionNoise noise{V, eta, bg, nr};
                        auto ch = effective_channel(noise);
                        EXPECT_LT((ch.completeness() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
                        auto oracle = fock_fusion_oracle(joint, noise);
                        auto channel = herald_all(joint, FusionPorts{}, ch);
                        EXPECT_NEAR(total(oracle), 1.0, 1e-10);
                        EXPECT_NEAR(total(channel), 1.0, 1e-10);
                        for (const auto& h : oracle) {
                            const auto* c = find(channel, h.pattern);
                            double pc = c ? c->probability : 0.0;
                            EXPECT_NEAR(h.probability, pc, 1e-9) << h.pattern.str();
                            if (h.spins && c && c->spins) {
                                EXPECT_LT(trace_distance(*h.spins, *c->spins), 1e-9) << h.pattern.str();
                            }
                        }
                        for (const auto& c : channel) {
                            if (c.probability > 1e-12) {
                                EXPECT_NE(find(oracle, c.pattern), nullptr) << c.pattern.str();
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST(fusion, hong_ou_mandel_suppression) {
    auto d = fock_fusion_oracle(ideal_resource_pair(), FusionNoise::ideal());
    for (T t : {T::Early, T::Late}) {
        EXPECT_NEAR(prob_of(d, DetectionPattern::of({{P::C, t}, {P::D, t}})), 0.0, 1e-10);
    }
}

TEST(fusion, success_fidelity_follows_indistinguishability) {
    for (double V : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        FusionNoise noise;
        noise.V = V;
        auto d = fock_fusion_oracle(ideal_resource_pair(), noise);
        auto [pp, plus] = class_state(d, FusionOutcome::psi_plus());
        auto [pm, minus] = class_state(d, FusionOutcome::psi_minus());
        ASSERT_TRUE(plus && minus);
        EXPECT_NEAR(fidelity_to_pure(*plus, bell::psi_plus()), (1 + V) / 2, 1e-9);
        EXPECT_NEAR(fidelity_to_pure(*minus, bell::psi_minus()), (1 + V) / 2, 1e-9);
        EXPECT_NEAR(pp + pm, 0.5, 1e-12);
    }
}

TEST(fusion, failure_keeps_only_zz) {
    for (bool nr : {true, false}) {
        FusionNoise noise;
        noise.V = nr ? 1.0 : 0.6;  // threshold detectors need V < 1 to see split failures
        noise.number_resolving = nr;
        auto d = fock_fusion_oracle(ideal_resource_pair(), noise);
        auto [pf, failed] = failure_state(d);
        ASSERT_TRUE(failed.has_value());
        EXPECT_NEAR(expect(*failed, PauliString("ZZ")), 1.0, 1e-10);
        EXPECT_NEAR(expect(*failed, PauliString("XX")), 0.0, 1e-10);
        EXPECT_NEAR(expect(*failed, PauliString("YY")), 0.0, 1e-10);
    }
}

TEST(fusion, threshold_detectors_erase_bunched_pairs) {
    FusionNoise noise;
    noise.number_resolving = false;
    auto d = fock_fusion_oracle(ideal_resource_pair(), noise);
    double erased = 0.0;
    for (const auto& h : d) {
        if (classify_pattern(h.pattern).is_erasure()) erased += h.probability;
        for (int c : h.pattern.counts) EXPECT_LE(c, 1);
    }
    EXPECT_NEAR(erased, 0.5, 1e-12);
}

TEST(fusion, sampling) {
    auto dist = fock_fusion_oracle(ideal_resource_pair(), FusionNoise::ideal());
    Rng r1(42), r2(42);
    for (int i = 0; i < 200; ++i) {
        auto a = sample_fusion(dist, r1);
        auto b = sample_fusion(dist, r2);
        EXPECT_EQ(a.pattern, b.pattern);
    }

    FusionNoise dark;
    dark.eta = 0.0;
    Rng r3(1);
    for (int i = 0; i < 100; ++i) {
        auto s = sample_fusion(ideal_resource_pair(), dark, r3);
        EXPECT_TRUE(s.outcome.is_erasure());
        EXPECT_FALSE(s.spins.has_value());
    }

    FusionNoise flooded;
    flooded.p_bg = 1.0;
    auto fd = fock_fusion_oracle(ideal_resource_pair(), flooded);
    double erased = 0.0;
    for (const auto& h : fd) {
        if (classify_pattern(h.pattern).is_erasure()) erased += h.probability;
    }
    EXPECT_NEAR(erased, 1.0, 1e-12);
}

TEST(fusion, resource_level_routes_agree_with_emission_failure) {
    EmitterNoise en;
    en.p_emit_fail = 0.15;
    en.p_deph_cycle = 0.05;
    en.theta_err_pi = 0.2;
    auto a = generate_resource_state(standard_sequence(), en, 0);
    auto b = generate_resource_state(standard_sequence(), en, 1);
    FusionNoise fn{0.8, 0.7, 0.01, false};
    auto oracle = fuse_resources(a, b, fn, FusionRoute::Oracle);
    auto channel = fuse_resources(a, b, fn, FusionRoute::Channel);
    EXPECT_NEAR(total(oracle), 1.0, 1e-10);
    ASSERT_EQ(oracle.size(), channel.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        EXPECT_EQ(oracle[i].pattern, channel[i].pattern);
        EXPECT_NEAR(oracle[i].probability, channel[i].probability, 1e-12);
        EXPECT_LT(trace_distance(*oracle[i].spins, *channel[i].spins), 1e-10);
    }
}

TEST(fusion, malformed_register) {
    auto three = DensityMatrix::maximally_mixed({QubitLabel::spin(0), QubitLabel::photon(0), QubitLabel::spin(1)});
    EXPECT_THROW(fock_fusion_oracle(three, FusionNoise::ideal()), StateError);
    FusionNoise bad;
    bad.V = 1.5;
    EXPECT_THROW(effective_channel(bad), StateError);
}
