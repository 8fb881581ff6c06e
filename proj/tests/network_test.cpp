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

#include "tbfusion/network.hpp"

#include <cmath>

#include "gtest/gtest.h"

using namespace tbfusion;

namespace {

NetworkSpec two_cycles() {
    NetworkSpec s;
    s.fusions = {{QubitRef::photon(0, 0), QubitRef::photon(0, 1), FusionKind::TimeLike}};
    return s;
}

NetworkSpec chain(int n) {
    NetworkSpec s;
    s.cycles = n;
    s.photons_per_state = 2;
    for (int c = 0; c + 1 < n; ++c) {
        s.fusions.push_back({QubitRef::photon(0, c, 1), QubitRef::photon(0, c + 1, 0), FusionKind::TimeLike});
    }
    s.measurements.push_back({QubitRef::photon(0, 0, 0), Basis::X});
    s.measurements.push_back({QubitRef::photon(0, n - 1, 1), Basis::X});
    for (int c = 1; c + 1 < n; ++c) s.measurements.push_back({QubitRef::spin(0, c), Basis::X});
    return s;
}

// Two Bell pairs with a direct fusion on the tableau: spins 0, 2; photons 1, 3.
StabilizerTableau fused_pair(const FusionOutcome& o) {
    StabilizerTableau t;
    t.add_bell_pair(0, 1);
    t.add_bell_pair(2, 3);
    Rng rng(9);
    fuse(t, 1, 3, o, rng);
    return t;
}

}  // namespace

TEST(network, success_heralds_bell_stabilizers) {
    auto t = fused_pair(FusionOutcome::psi_plus());
    EXPECT_EQ(t.expectation({0, 2}, "ZZ"), -1);
    EXPECT_EQ(t.expectation({0, 2}, "XX"), +1);
    EXPECT_EQ(t.expectation({0, 2}, "YY"), +1);
    auto m = fused_pair(FusionOutcome::psi_minus());
    EXPECT_EQ(m.expectation({0, 2}, "ZZ"), -1);
    EXPECT_EQ(m.expectation({0, 2}, "XX"), -1);
    EXPECT_EQ(m.expectation({0, 2}, "YY"), -1);
}

TEST(network, failure_keeps_zz_only) {
    for (TimeBin b : {TimeBin::Early, TimeBin::Late}) {
        auto t = fused_pair(FusionOutcome::failure(b));
        EXPECT_EQ(t.expectation({0, 2}, "ZZ"), +1);
        EXPECT_EQ(t.expectation({0, 2}, "XX"), 0);
        EXPECT_EQ(t.expectation({0, 2}, "YY"), 0);
        // Time bin revealed: each spin is fixed.
        EXPECT_EQ(t.expectation({0}, "Z"), b == TimeBin::Early ? 1 : -1);
    }
}

TEST(network, erasure_leaves_spins_mixed) {
    auto t = fused_pair(FusionOutcome::erasure());
    EXPECT_EQ(t.num_qubits(), 2u);
    EXPECT_EQ(t.num_generators(), 0u);
}

TEST(network, refuses_consumed_photon) {
    auto t = fused_pair(FusionOutcome::psi_plus());
    Rng rng(1);
    EXPECT_THROW(fuse(t, 1, 3, FusionOutcome::psi_plus(), rng), StateError);
}

TEST(network, forced_success_links_spin_to_itself_in_time) {
    Rng rng(4);
    auto res = run_network(two_cycles(), 0.5, 0.0, rng, {FusionAction::of(FusionOutcome::psi_plus())});
    ASSERT_EQ(res.graph.size(), 1u);
    EXPECT_EQ(res.graph[0].a, QubitRef::spin(0, 0));
    EXPECT_EQ(res.graph[0].b, QubitRef::spin(0, 1));
    EXPECT_TRUE(res.graph[0].quantum);
    ASSERT_EQ(res.fusions.size(), 1u);
    EXPECT_EQ(res.fusions[0].parities, (std::vector<int>{-1, +1}));
}

TEST(network, chain_of_four_teleports_correlation_to_end_spins) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        std::vector<std::optional<FusionAction>> forced(3, FusionAction::parity(-1, std::nullopt));
        auto res = run_network(chain(4), 1.0, 0.0, rng, forced);
        ASSERT_EQ(res.tableau.num_qubits(), 2u);
        ASSERT_EQ(res.graph.size(), 1u);
        EXPECT_EQ(res.graph[0].a, QubitRef::spin(0, 0));
        EXPECT_EQ(res.graph[0].b, QubitRef::spin(0, 3));
        EXPECT_TRUE(res.graph[0].quantum);
        // Pauli frame: the ZZ sign is the product of fusion ZZ parities.
        int zz = 1;
        for (const auto& f : res.fusions) zz *= f.parities[0];
        EXPECT_EQ(res.tableau.expectation(res.tableau.qubits(), "ZZ"), zz);
    }
}

TEST(network, all_failures_give_classical_edges) {
    Rng rng(12);
    auto res = run_network(chain(4), 0.0, 0.0, rng);
    for (const auto& f : res.fusions) EXPECT_TRUE(f.outcome.is_failure());
    for (const auto& e : res.graph) {
        EXPECT_FALSE(e.quantum);
        for (const auto& s : e.stabilizers) EXPECT_EQ(s.substr(1), "ZZ");
    }

    NetworkSpec s = two_cycles();
    auto r2 = run_network(s, 0.0, 0.0, rng);
    ASSERT_EQ(r2.graph.size(), 1u);
    EXPECT_FALSE(r2.graph[0].quantum);
    EXPECT_EQ(r2.graph[0].stabilizers, (std::vector<std::string>{"+ZZ"}));

    // Unrelated resource states never share an edge.
    NetworkSpec apart;
    apart.cycles = 4;
    apart.fusions = {{QubitRef::photon(0, 0), QubitRef::photon(0, 1), FusionKind::TimeLike},
                     {QubitRef::photon(0, 2), QubitRef::photon(0, 3), FusionKind::TimeLike}};
    auto r3 = run_network(apart, 0.0, 0.0, rng);
    EXPECT_EQ(r3.graph.size(), 2u);
}

TEST(network, success_frequency) {
    const int n = 20000;
    Rng rng(2024);
    int success = 0;
    for (int i = 0; i < n; ++i) {
        // Sampling is independent of the state; draw directly.
        if (sample_fusion_action(0.5, 0.0, rng).mode == FusionAction::Mode::Parity) ++success;
    }
    double sigma = std::sqrt(n * 0.25);
    EXPECT_LT(std::abs(success - 0.5 * n), 3 * sigma);

    // Through the full network path on a smaller chain.
    auto res = run_network(chain(150), 0.5, 0.0, rng);
    int ok = 0;
    for (const auto& f : res.fusions) ok += f.outcome.is_success();
    double m = static_cast<double>(res.fusions.size());
    EXPECT_LT(std::abs(ok - 0.5 * m), 3 * std::sqrt(m * 0.25));
}

TEST(network, erasure_rate_from_transmission) {
    EXPECT_NEAR(erasure_from_eta(0.8), 0.36, 1e-15);
    Rng rng(8);
    auto res = run_network(two_cycles(), 0.5, 1.0, rng);
    EXPECT_TRUE(res.fusions[0].outcome.is_erasure());
    EXPECT_TRUE(res.graph.empty());
}

TEST(network, spec_validation) {
    NetworkSpec twice = two_cycles();
    twice.fusions.push_back(twice.fusions[0]);
    EXPECT_THROW(twice.validate(), StateError);

    NetworkSpec wrong_kind = two_cycles();
    wrong_kind.fusions[0].kind = FusionKind::SpaceLike;
    EXPECT_THROW(wrong_kind.validate(), StateError);

    NetworkSpec spin_fusion = two_cycles();
    spin_fusion.fusions[0].a = QubitRef::spin(0, 0);
    EXPECT_THROW(spin_fusion.validate(), StateError);

    NetworkSpec out_of_range = two_cycles();
    out_of_range.fusions[0].b = QubitRef::photon(0, 5);
    EXPECT_THROW(out_of_range.validate(), StateError);

    NetworkSpec measured_twice = two_cycles();
    measured_twice.measurements = {{QubitRef::photon(0, 0), Basis::X}};
    EXPECT_THROW(measured_twice.validate(), StateError);

    Rng rng(0);
    EXPECT_THROW(run_network(two_cycles(), 1.5, 0.0, rng), StateError);
}

TEST(network, run_is_seed_deterministic) {
    Rng a(77), b(77);
    auto ra = run_network(chain(6), 0.5, 0.1, a);
    auto rb = run_network(chain(6), 0.5, 0.1, b);
    ASSERT_EQ(ra.fusions.size(), rb.fusions.size());
    for (std::size_t i = 0; i < ra.fusions.size(); ++i) {
        EXPECT_EQ(ra.fusions[i].outcome, rb.fusions[i].outcome);
        EXPECT_EQ(ra.fusions[i].parities, rb.fusions[i].parities);
    }
    EXPECT_EQ(ra.tableau.str(), rb.tableau.str());
}

TEST(network, dense_crosscheck_all_cases) {
    auto cases = crosscheck_cases(true);
    std::size_t core = 0;
    for (const auto& c : cases) {
        core += c.core;
        for (std::uint64_t seed : {1, 2}) {
            Rng rng(seed);
            auto rep = crosscheck_dense(c.spec, c.actions, rng);
            EXPECT_TRUE(rep.agree()) << c.name << ": " << (rep.mismatches.empty() ? "" : rep.mismatches[0]);
            EXPECT_GT(rep.compared, 0u);
            EXPECT_LT(rep.max_deviation, 1e-10) << c.name;
        }
    }
    EXPECT_EQ(core, 48u);
    EXPECT_EQ(crosscheck_cases(false).size(), 48u);
    // 2 + 13 erasure cases on the small topologies, 47 chain cases.
    EXPECT_EQ(cases.size(), 48u + 15u + 47u);
}

TEST(network, crosscheck_examples) {
    NetworkSpec s = two_cycles();
    Rng rng(3);
    auto ok = crosscheck_dense(s, {FusionAction::of(FusionOutcome::psi_plus())}, rng);
    EXPECT_TRUE(ok.agree());
    // 2 spins: 6 single-qubit + 9 two-qubit Paulis.
    EXPECT_EQ(ok.compared, 15u);

    NetworkSpec big;
    big.cycles = 3;
    big.photons_per_state = 2;
    EXPECT_THROW(crosscheck_dense(big, {}, rng), StateError);
}

// The ideal analyzer's success Kraus rows project onto the photon Bell
// states that the tableau fusion postselects.
TEST(network, tableau_parities_match_analyzer_projectors) {
    auto ch = effective_channel(FusionNoise::ideal());
    using P = Port;
    using T = TimeBin;
    auto row_plus = ch.kraus(DetectionPattern::of({{P::C, T::Early}, {P::C, T::Late}}));
    auto row_minus = ch.kraus(DetectionPattern::of({{P::C, T::Early}, {P::D, T::Late}}));
    ASSERT_EQ(row_plus.size(), 1u);
    ASSERT_EQ(row_minus.size(), 1u);
    Matrix zz = pauli_string_matrix(PauliString("ZZ"));
    Matrix xx = pauli_string_matrix(PauliString("XX"));
    Matrix ep = row_plus[0].adjoint() * row_plus[0];
    Matrix em = row_minus[0].adjoint() * row_minus[0];
    Matrix id = Matrix::Identity(4, 4);
    Matrix proj_plus = 0.25 * (id - zz) * (id + xx);
    Matrix proj_minus = 0.25 * (id - zz) * (id - xx);
    EXPECT_LT((ep - 0.5 * proj_plus).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((em - 0.5 * proj_minus).cwiseAbs().maxCoeff(), 1e-12);
}
