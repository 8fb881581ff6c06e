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

#include "tbfusion/analysis.hpp"

#include "gtest/gtest.h"
#include "tbfusion/pipeline.hpp"

using namespace tbfusion;

namespace {

TrialRecord record(FusionOutcome o, const char* pair, int a, int b) {
    TrialRecord r;
    r.outcome = o;
    r.bases = BasisPair::parse(pair);
    r.readout = std::array<int, 2>{a, b};
    return r;
}

CorrelationCell cell_with(std::uint64_t agree, std::uint64_t disagree) {
    CorrelationCell c;
    c.counts = {agree, disagree, 0, 0};
    return c;
}

}  // namespace

TEST(analysis, error_rate_examples) {
    EXPECT_NEAR(error_rate(-0.64, -1), 0.18, 1e-12);
    EXPECT_NEAR(error_rate(0.38, +1), 0.31, 1e-12);
    EXPECT_NEAR(error_rate(1.0, +1), 0.0, 1e-15);
    EXPECT_NEAR(error_rate(-1.0, +1), 1.0, 1e-15);
    EXPECT_THROW(error_rate(1.5, 1), StateError);
    EXPECT_THROW(error_rate(0.1, 0), StateError);
}

TEST(analysis, error_rate_is_an_involution) {
    for (double e = -1.0; e <= 1.0; e += 0.125) {
        for (int s : {-1, +1}) {
            double r = error_rate(e, s);
            EXPECT_NEAR(s * (1.0 - 2.0 * r), e, 1e-15);
            EXPECT_NEAR(error_rate(e, -s), 1.0 - r, 1e-15);
        }
    }
}

TEST(analysis, witness_examples) {
    auto plus = witness_fidelity(-0.64, 0.38, 0.34, BellTarget::PsiPlus);
    EXPECT_NEAR(plus.value, 0.59, 1e-12);
    EXPECT_FALSE(plus.clamped);
    auto minus = witness_fidelity(-0.62, -0.34, -0.34, BellTarget::PsiMinus);
    EXPECT_NEAR(minus.value, 0.575, 1e-12);

    auto bell = witness_fidelity(-1, 1, 1, BellTarget::PsiPlus);
    EXPECT_NEAR(bell.value, 1.0, 1e-15);
    auto wrong = witness_fidelity(-1, 1, 1, BellTarget::PsiMinus);
    EXPECT_NEAR(wrong.value, 0.0, 1e-15);

    auto over = witness_fidelity(-1, 1, 1 + 1e-13, BellTarget::PsiPlus);
    EXPECT_TRUE(over.clamped);
    EXPECT_EQ(over.value, 1.0);
    EXPECT_GT(over.raw, 1.0);
}

TEST(analysis, witness_symmetries) {
    // Affine in each input and symmetric under xx <-> yy.
    double a = witness_fidelity(-0.3, 0.2, 0.5, BellTarget::PsiPlus).raw;
    double b = witness_fidelity(-0.3, 0.5, 0.2, BellTarget::PsiPlus).raw;
    EXPECT_NEAR(a, b, 1e-15);
    double d = witness_fidelity(-0.3, 0.3, 0.5, BellTarget::PsiPlus).raw - a;
    EXPECT_NEAR(d, 0.025, 1e-15);
    double dz = witness_fidelity(-0.2, 0.2, 0.5, BellTarget::PsiPlus).raw - a;
    EXPECT_NEAR(dz, -0.025, 1e-15);
    // Flipping the sign of xx and yy maps one target onto the other.
    double m = witness_fidelity(-0.3, -0.2, -0.5, BellTarget::PsiMinus).raw;
    EXPECT_NEAR(a, m, 1e-15);
}

TEST(analysis, verdicts) {
    EXPECT_EQ(entanglement_verdict(0.59, 0.02), Verdict::Entangled);
    EXPECT_EQ(entanglement_verdict(0.59, 0.08), Verdict::Entangled);
    EXPECT_EQ(entanglement_verdict(0.59, 0.10), Verdict::Inconclusive);
    EXPECT_EQ(entanglement_verdict(0.575, 0.02, 3.0), Verdict::Entangled);
    EXPECT_EQ(entanglement_verdict(0.575, 0.03, 3.0), Verdict::Inconclusive);
    EXPECT_EQ(entanglement_verdict(0.5, 0.0), Verdict::Inconclusive);
    EXPECT_NEAR(witness_sigma(0.03, 0.04, 0.0), 0.0125, 1e-15);
}

// For a Bell target the witness is the exact fidelity, since the projector
// expands into exactly these three correlators.
TEST(analysis, witness_equals_fidelity_on_heralded_states) {
    EmitterNoise en;
    en.p_deph_cycle = 0.1;
    en.p_flip_cycle = 0.05;
    en.theta_err_pi2 = 0.03;
    FusionNoise fn{0.8, 0.7, 0.01, false};
    auto a = generate_resource_state(standard_sequence(), en, 0);
    auto b = generate_resource_state(standard_sequence(), en, 1);
    auto dist = fuse_resources(a, b, fn);
    for (auto [o, target, vec] : {std::tuple{FusionOutcome::psi_plus(), BellTarget::PsiPlus, bell::psi_plus()},
                                  std::tuple{FusionOutcome::psi_minus(), BellTarget::PsiMinus, bell::psi_minus()}}) {
        auto [p, rho] = class_state(dist, o);
        ASSERT_TRUE(rho.has_value());
        double zz = expect(*rho, PauliString("ZZ"));
        double xx = expect(*rho, PauliString("XX"));
        double yy = expect(*rho, PauliString("YY"));
        auto w = witness_fidelity(zz, xx, yy, target);
        EXPECT_NEAR(w.raw, fidelity_to_pure(*rho, vec), 1e-12);
        EXPECT_GT(w.raw, 0.5);
        EXPECT_LT(w.raw, 1.0);
    }
}

TEST(analysis, cell_statistics) {
    auto c = cell_with(82, 18);
    EXPECT_NEAR(c.expectation(), 0.64, 1e-15);
    EXPECT_NEAR(c.sigma(), std::sqrt((1 - 0.64 * 0.64) / 100), 1e-15);
    // Equivalent to 2 sqrt(Na Nd / N^3).
    EXPECT_NEAR(c.sigma(), 2 * std::sqrt(82.0 * 18.0 / 1e6), 1e-15);

    // Same frequencies, 100x the counts: sigma shrinks by 10.
    auto big = cell_with(8200, 1800);
    EXPECT_NEAR(big.expectation(), c.expectation(), 1e-15);
    EXPECT_NEAR(c.sigma() / big.sigma(), 10.0, 1e-12);

    EXPECT_EQ(cell_with(5, 0).sigma(), 0.0);
    EXPECT_THROW(CorrelationCell{}.expectation(), StateError);
}

TEST(analysis, slots_follow_outcome_signs) {
    CorrelationCell c;
    c.add(+1, +1);
    c.add(+1, -1);
    c.add(-1, +1);
    c.add(-1, -1);
    c.add(-1, -1);
    EXPECT_EQ(c.counts, (std::array<std::uint64_t, 4>{1, 1, 1, 2}));
    EXPECT_NEAR(c.expectation(), 0.2, 1e-15);
}

TEST(analysis, table_groups_by_condition_and_pair) {
    std::vector<TrialRecord> rs;
    rs.push_back(record(FusionOutcome::psi_plus(), "ZZ", +1, -1));
    rs.push_back(record(FusionOutcome::psi_plus(), "ZZ", -1, +1));
    rs.push_back(record(FusionOutcome::psi_plus(), "ZZ", +1, +1));
    rs.push_back(record(FusionOutcome::psi_minus(), "XX", -1, +1));
    rs.push_back(record(FusionOutcome::failure(TimeBin::Early), "ZZ", +1, +1));
    rs.push_back(record(FusionOutcome::failure(TimeBin::Late), "ZZ", -1, -1));
    TrialRecord erased;
    erased.outcome = FusionOutcome::erasure();
    rs.push_back(erased);

    auto t = tabulate(rs);
    EXPECT_EQ(t.total_shots(), 7u);
    auto e = t.estimate(Condition::PsiPlus, BasisPair::parse("ZZ"));
    EXPECT_EQ(e.n, 3u);
    EXPECT_NEAR(e.value, -1.0 / 3.0, 1e-15);
    auto phi = t.estimate(Condition::Phi, BasisPair::parse("ZZ"));
    EXPECT_EQ(phi.n, 2u);
    EXPECT_EQ(phi.value, 1.0);
    EXPECT_EQ(t.outcome_counts.at("erasure"), 1u);

    auto direct = conditional_expectation(rs, Condition::PsiPlus, BasisPair::parse("ZZ"));
    EXPECT_EQ(direct.value, e.value);
    EXPECT_EQ(direct.n, e.n);

    EXPECT_FALSE(t.has(Condition::PsiMinus, BasisPair::parse("ZZ")));
    EXPECT_THROW(t.estimate(Condition::PsiMinus, BasisPair::parse("ZZ")), StateError);
    EXPECT_THROW(conditional_expectation(rs, Condition::PsiMinus, BasisPair::parse("YY")), StateError);

    // Merging two halves equals tabulating everything at once.
    std::span<const TrialRecord> all(rs);
    auto left = tabulate(all.subspan(0, 3));
    left.merge(tabulate(all.subspan(3)));
    EXPECT_EQ(left.cells.size(), t.cells.size());
    for (const auto& [k, v] : t.cells) EXPECT_EQ(left.cells.at(k).counts, v.counts);
    EXPECT_EQ(left.outcome_counts, t.outcome_counts);
}

TEST(analysis, stabilizer_signs) {
    EXPECT_EQ(stabilizer_sign(Condition::PsiPlus, Basis::Z), -1);
    EXPECT_EQ(stabilizer_sign(Condition::PsiPlus, Basis::X), +1);
    EXPECT_EQ(stabilizer_sign(Condition::PsiPlus, Basis::Y), +1);
    for (Basis b : {Basis::X, Basis::Y, Basis::Z}) EXPECT_EQ(stabilizer_sign(Condition::PsiMinus, b), -1);
    EXPECT_EQ(stabilizer_sign(Condition::Phi, Basis::Z), +1);
    EXPECT_FALSE(stabilizer_sign(Condition::Phi, Basis::X).has_value());
    EXPECT_FALSE(stabilizer_sign(Condition::Phi, Basis::Y).has_value());

    // The signs match the ideal heralded Bell states.
    auto dist = fuse_joint(ideal_resource_pair(), FusionNoise::ideal(), {1.0, 1.0},
                           {QubitLabel::spin(0), QubitLabel::photon(0), QubitLabel::spin(1), QubitLabel::photon(1)},
                           FusionRoute::Channel);
    for (auto [o, c] : {std::pair{FusionOutcome::psi_plus(), Condition::PsiPlus},
                        std::pair{FusionOutcome::psi_minus(), Condition::PsiMinus}}) {
        auto rho = class_state(dist, o).second;
        ASSERT_TRUE(rho.has_value());
        for (Basis b : {Basis::X, Basis::Y, Basis::Z}) {
            std::string p{to_char(b), to_char(b)};
            EXPECT_NEAR(expect(*rho, PauliString(p)), *stabilizer_sign(c, b), 1e-12) << to_string(c) << " " << p;
        }
    }
    auto phi = failure_state(dist).second;
    ASSERT_TRUE(phi.has_value());
    EXPECT_NEAR(expect(*phi, PauliString("ZZ")), 1.0, 1e-12);
}

TEST(analysis, basis_pairs) {
    auto all = all_basis_pairs();
    ASSERT_EQ(all.size(), 9u);
    EXPECT_EQ(all.front().str(), "ZZ");
    EXPECT_EQ(all[1].str(), "ZX");
    EXPECT_EQ(all.back().str(), "YY");
    EXPECT_EQ(BasisPair::parse("XY").str(), "XY");
    EXPECT_THROW(BasisPair::parse("X"), StateError);
    EXPECT_THROW(BasisPair::parse("XQ"), StateError);
}
