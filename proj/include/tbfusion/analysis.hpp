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

#ifndef TBFUSION_ANALYSIS_HPP
#define TBFUSION_ANALYSIS_HPP

/// Correlation statistics for heralded two-spin states.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbfusion/emitter.hpp"
#include "tbfusion/fusion.hpp"

namespace tbfusion {

/// Readout bases for spin a and spin b.
struct BasisPair {
    Basis a = Basis::Z;
    Basis b = Basis::Z;

    std::string str() const { return std::string{to_char(a), to_char(b)}; }

    static BasisPair parse(std::string_view s) {
        if (s.size() != 2) throw StateError("basis pair must have two letters, got '" + std::string(s) + "'");
        return {basis_from_char(s[0]), basis_from_char(s[1])};
    }

    auto operator<=>(const BasisPair&) const = default;
};

/// All nine pairs in Z, X, Y order.
inline std::vector<BasisPair> all_basis_pairs() {
    std::vector<BasisPair> out;
    for (Basis a : {Basis::Z, Basis::X, Basis::Y}) {
        for (Basis b : {Basis::Z, Basis::X, Basis::Y}) out.push_back({a, b});
    }
    return out;
}

inline std::vector<BasisPair> diagonal_basis_pairs() { return {{Basis::Z, Basis::Z}, {Basis::X, Basis::X}, {Basis::Y, Basis::Y}}; }

/// Heralding condition that correlations are sorted by. Failures in either
/// time bin share one condition.
enum class Condition { PsiPlus, PsiMinus, Phi };

inline constexpr std::array<Condition, 3> kConditions = {Condition::PsiPlus, Condition::PsiMinus, Condition::Phi};

inline const char* to_string(Condition c) {
    switch (c) {
        case Condition::PsiPlus:
            return "psi_plus";
        case Condition::PsiMinus:
            return "psi_minus";
        case Condition::Phi:
            return "phi";
    }
    return "?";
}

inline std::optional<Condition> condition_of(const FusionOutcome& o) {
    switch (o.kind) {
        case FusionOutcome::Kind::SuccessPsiPlus:
            return Condition::PsiPlus;
        case FusionOutcome::Kind::SuccessPsiMinus:
            return Condition::PsiMinus;
        case FusionOutcome::Kind::FailurePhiSubspace:
            return Condition::Phi;
        case FusionOutcome::Kind::Erasure:
            break;
    }
    return std::nullopt;
}

/// Sign of the stabilizer PP of the target state under a condition, or
/// nothing when that correlation is not defined (XX and YY after a failure).
inline std::optional<int> stabilizer_sign(Condition c, Basis p) {
    switch (c) {
        case Condition::PsiPlus:
            return p == Basis::Z ? -1 : +1;
        case Condition::PsiMinus:
            return -1;
        case Condition::Phi:
            if (p == Basis::Z) return +1;
            return std::nullopt;
    }
    return std::nullopt;
}

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;  // per-trial stream seed
    FusionOutcome outcome;
    BasisPair bases;
    std::optional<std::array<int, 2>> readout;  // absent on erasure
};

/// Joint outcome counts, indexed ++, +-, -+, --.
struct CorrelationCell {
    std::array<std::uint64_t, 4> counts{};

    static std::size_t slot(int a, int b) { return static_cast<std::size_t>(2 * (a < 0) + (b < 0)); }

    void add(int a, int b) { ++counts[slot(a, b)]; }

    void merge(const CorrelationCell& o) {
        for (std::size_t k = 0; k < 4; ++k) counts[k] += o.counts[k];
    }

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }

    double expectation() const {
        if (total() == 0) throw StateError("correlation: empty selection");
        double agree = static_cast<double>(counts[0] + counts[3]);
        double disagree = static_cast<double>(counts[1] + counts[2]);
        return (agree - disagree) / static_cast<double>(total());
    }

    /// First-order propagation of independent Poisson counts:
    /// sigma^2 = 4 N_agree N_disagree / N^3 = (1 - E^2) / N.
    double sigma() const {
        double e = expectation();
        return std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(total()));
    }
};

struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
    std::uint64_t n = 0;
};

/// Counts per (condition, basis pair) plus outcome-class frequencies.
struct CorrelationTable {
    std::map<std::pair<Condition, BasisPair>, CorrelationCell> cells;
    std::map<std::string, std::uint64_t> outcome_counts;  // by FusionOutcome::str()

    void add(const TrialRecord& r) {
        ++outcome_counts[r.outcome.str()];
        auto c = condition_of(r.outcome);
        if (!c) return;
        if (!r.readout) throw StateError("correlation: non-erased record without readout");
        cells[{*c, r.bases}].add((*r.readout)[0], (*r.readout)[1]);
    }

    void merge(const CorrelationTable& o) {
        for (const auto& [k, v] : o.cells) cells[k].merge(v);
        for (const auto& [k, v] : o.outcome_counts) outcome_counts[k] += v;
    }

    bool has(Condition c, BasisPair p) const {
        auto it = cells.find({c, p});
        return it != cells.end() && it->second.total() > 0;
    }

    Estimate estimate(Condition c, BasisPair p) const {
        auto it = cells.find({c, p});
        if (it == cells.end() || it->second.total() == 0) {
            throw StateError(std::string("correlation: no records for ") + to_string(c) + " in " + p.str());
        }
        return {it->second.expectation(), it->second.sigma(), it->second.total()};
    }

    std::uint64_t total_shots() const {
        std::uint64_t n = 0;
        for (const auto& [k, v] : outcome_counts) n += v;
        return n;
    }
};

inline CorrelationTable tabulate(std::span<const TrialRecord> records) {
    CorrelationTable t;
    for (const auto& r : records) t.add(r);
    return t;
}

inline Estimate conditional_expectation(std::span<const TrialRecord> records, Condition c, BasisPair p) {
    CorrelationCell cell;
    for (const auto& r : records) {
        if (r.bases != p || condition_of(r.outcome) != c) continue;
        cell.add((*r.readout)[0], (*r.readout)[1]);
    }
    if (cell.total() == 0) {
        throw StateError(std::string("conditional_expectation: no records for ") + to_string(c) + " in " + p.str());
    }
    return {cell.expectation(), cell.sigma(), cell.total()};
}

inline void check_expectation(double e, const char* what) {
    if (!(std::abs(e) <= 1.0 + 1e-12)) throw StateError(std::string(what) + ": expectation outside [-1, 1]");
}

/// Fraction of parity checks that disagree with stabilizer sign s.
inline double error_rate(double expectation, int s) {
    check_expectation(expectation, "error_rate");
    if (s != 1 && s != -1) throw StateError("error_rate: sign must be +1 or -1");
    return (1.0 - s * expectation) / 2.0;
}

inline double error_rate_sigma(double expectation_sigma) { return expectation_sigma / 2.0; }

enum class BellTarget { PsiPlus, PsiMinus };

struct Witness {
    double raw = 0.0;      // unclamped
    double value = 0.0;    // clamped to [0, 1]
    bool clamped = false;
};

/// Bell-state fidelity from the three diagonal correlations:
/// F = (1 - zz +- xx +- yy) / 4.
inline Witness witness_fidelity(double zz, double xx, double yy, BellTarget target) {
    check_expectation(zz, "witness_fidelity");
    check_expectation(xx, "witness_fidelity");
    check_expectation(yy, "witness_fidelity");
    double s = target == BellTarget::PsiPlus ? +1.0 : -1.0;
    Witness w;
    w.raw = (1.0 - zz + s * xx + s * yy) / 4.0;
    w.value = std::clamp(w.raw, 0.0, 1.0);
    w.clamped = w.value != w.raw;
    return w;
}

inline double witness_sigma(double s_zz, double s_xx, double s_yy) {
    return std::sqrt(s_zz * s_zz + s_xx * s_xx + s_yy * s_yy) / 4.0;
}

enum class Verdict { Entangled, Inconclusive };

inline const char* to_string(Verdict v) { return v == Verdict::Entangled ? "entangled" : "inconclusive"; }

/// Entangled when the fidelity clears 1/2 by k standard errors.
inline Verdict entanglement_verdict(double fidelity, double sigma, double k = 1.0) {
    return fidelity - k * sigma > 0.5 ? Verdict::Entangled : Verdict::Inconclusive;
}

}  // namespace tbfusion

#endif  // TBFUSION_ANALYSIS_HPP
