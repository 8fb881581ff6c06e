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

#ifndef TBFUSION_TABLEAU_HPP
#define TBFUSION_TABLEAU_HPP

/// Stabilizer groups over a growable set of qubits.
///
/// The tableau stores independent commuting generators. It may describe a
/// mixed state (fewer generators than qubits), which is what tracing out a
/// qubit produces. Qubits are addressed by caller-chosen integer ids.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbfusion/densop.hpp"
#include "tbfusion/rng.hpp"

namespace tbfusion {

/// Pauli product in binary symplectic form: letter j is X^x Z^z with
/// (1,1) meaning Y. The operator is (-1)^neg times the letter product.
struct PauliRow {
    std::vector<std::uint8_t> x, z;
    bool neg = false;

    explicit PauliRow(std::size_t n = 0) : x(n, 0), z(n, 0) {}

    std::size_t size() const { return x.size(); }

    char letter(std::size_t j) const {
        static constexpr char kLetters[4] = {'I', 'Z', 'X', 'Y'};
        return kLetters[2 * x[j] + z[j]];
    }

    void set(std::size_t j, char c) {
        x[j] = c == 'X' || c == 'Y';
        z[j] = c == 'Z' || c == 'Y';
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::size_t j = 0; j < size(); ++j) w += (x[j] | z[j]);
        return w;
    }

    bool is_identity() const { return weight() == 0; }

    bool commutes_with(const PauliRow& o) const {
        unsigned s = 0;
        for (std::size_t j = 0; j < size(); ++j) s ^= (x[j] & o.z[j]) ^ (z[j] & o.x[j]);
        return s == 0;
    }

    bool same_letters(const PauliRow& o) const { return x == o.x && z == o.z; }

    int sign() const { return neg ? -1 : +1; }
};

namespace detail {

// Exponent of i picked up by the single-qubit product (x1,z1)(x2,z2).
inline int pauli_phase(int x1, int z1, int x2, int z2) {
    if (x1 == 0 && z1 == 0) return 0;
    if (x1 == 1 && z1 == 1) return z2 - x2;
    if (x1 == 1) return z2 * (2 * x2 - 1);
    return x2 * (1 - 2 * z2);
}

}  // namespace detail

/// a * b for commuting a and b.
inline PauliRow multiply(const PauliRow& a, const PauliRow& b) {
    PauliRow out(a.size());
    int phase = 2 * a.neg + 2 * b.neg;
    for (std::size_t j = 0; j < a.size(); ++j) {
        phase += detail::pauli_phase(a.x[j], a.z[j], b.x[j], b.z[j]);
        out.x[j] = a.x[j] ^ b.x[j];
        out.z[j] = a.z[j] ^ b.z[j];
    }
    phase = ((phase % 4) + 4) % 4;
    if (phase % 2 != 0) throw StateError("multiply: operators anticommute");
    out.neg = phase == 2;
    return out;
}

class StabilizerTableau {
  public:
    StabilizerTableau() = default;

    /// Appends fresh qubits together with stabilizer generators acting on
    /// them only. Each generator is given as letters over `ids`.
    void add_state(const std::vector<int>& ids, const std::vector<PauliString>& generators) {
        for (int id : ids) {
            if (has_qubit(id)) throw StateError("add_state: qubit " + std::to_string(id) + " already present");
        }
        std::size_t old_n = ids_.size();
        ids_.insert(ids_.end(), ids.begin(), ids.end());
        for (auto& r : rows_) {
            r.x.resize(ids_.size(), 0);
            r.z.resize(ids_.size(), 0);
        }
        for (const auto& g : generators) {
            if (g.size() != ids.size()) throw StateError("add_state: generator length mismatch");
            PauliRow r(ids_.size());
            for (std::size_t k = 0; k < ids.size(); ++k) r.set(old_n + k, g.letters[k]);
            r.neg = g.sign < 0;
            rows_.push_back(std::move(r));
        }
        validate();
    }

    /// Bell pair stabilized by +ZZ and -XX.
    void add_bell_pair(int a, int b) { add_state({a, b}, {PauliString("ZZ"), PauliString("XX", -1)}); }

    const std::vector<int>& qubits() const { return ids_; }
    std::size_t num_qubits() const { return ids_.size(); }
    std::size_t num_generators() const { return rows_.size(); }
    const std::vector<PauliRow>& generators() const { return rows_; }
    bool is_pure() const { return rows_.size() == ids_.size(); }

    bool has_qubit(int id) const { return std::find(ids_.begin(), ids_.end(), id) != ids_.end(); }

    std::size_t column(int id) const {
        auto it = std::find(ids_.begin(), ids_.end(), id);
        if (it == ids_.end()) throw StateError("tableau: unknown qubit " + std::to_string(id));
        return static_cast<std::size_t>(it - ids_.begin());
    }

    /// Builds a row over the tableau columns from letters on the given ids.
    PauliRow row(const std::vector<int>& ids, std::string_view letters) const {
        if (ids.size() != letters.size()) throw StateError("tableau: Pauli length mismatch");
        PauliRow r(ids_.size());
        for (std::size_t k = 0; k < ids.size(); ++k) {
            char c = letters[k];
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') throw StateError("tableau: invalid Pauli letter");
            std::size_t col = column(ids[k]);
            if (r.x[col] || r.z[col]) throw StateError("tableau: repeated qubit in Pauli");
            r.set(col, c);
        }
        return r;
    }

    /// Sign s such that s*P is in the group, if +P or -P is.
    std::optional<int> group_sign(const PauliRow& p) const {
        auto echelon = reduced_rows();
        PauliRow residual = p;
        residual.neg = false;
        PauliRow acc(ids_.size());
        for (const auto& [r, pivot] : echelon) {
            if (!bit(residual, pivot)) continue;
            for (std::size_t j = 0; j < residual.size(); ++j) {
                residual.x[j] ^= r.x[j];
                residual.z[j] ^= r.z[j];
            }
            acc = multiply(acc, r);
        }
        if (!residual.is_identity()) return std::nullopt;
        return acc.sign();
    }

    /// <P> on the stabilizer state: +-1 if +-P is a stabilizer, 0 otherwise.
    int expectation(const PauliRow& p) const {
        for (const auto& r : rows_) {
            if (!r.commutes_with(p)) return 0;
        }
        auto s = group_sign(p);
        return s ? *s * p.sign() : 0;
    }

    int expectation(const std::vector<int>& ids, std::string_view letters) const {
        return expectation(row(ids, letters));
    }

    /// Measures the Pauli product P. A forced outcome postselects; forcing
    /// an outcome that has probability zero throws.
    int measure(const PauliRow& p_in, Rng& rng, std::optional<int> forced = std::nullopt) {
        if (forced && *forced != 1 && *forced != -1) throw StateError("measure: forced outcome must be +-1");
        if (p_in.size() != ids_.size()) throw StateError("measure: Pauli size mismatch");
        if (p_in.is_identity()) throw StateError("measure: identity measurement");
        PauliRow p = p_in;
        p.neg = false;

        std::optional<std::size_t> pivot;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].commutes_with(p)) continue;
            if (!pivot) {
                pivot = i;
            } else {
                rows_[i] = multiply(rows_[*pivot], rows_[i]);
            }
        }
        int outcome;
        if (pivot) {
            outcome = forced ? *forced : rng.random_sign();
            rows_[*pivot] = p;
            rows_[*pivot].neg = outcome < 0;
        } else if (auto s = group_sign(p)) {
            outcome = *s;
            if (forced && *forced != outcome) {
                throw StateError("measure: forced outcome has zero probability");
            }
        } else {
            outcome = forced ? *forced : rng.random_sign();
            p.neg = outcome < 0;
            rows_.push_back(p);
        }
        return outcome * p_in.sign();
    }

    int measure(const std::vector<int>& ids, std::string_view letters, Rng& rng,
                std::optional<int> forced = std::nullopt) {
        return measure(row(ids, letters), rng, forced);
    }

    /// Discards a qubit; the result stabilizes the reduced state.
    void trace_out(int id) {
        std::size_t q = column(id);
        std::vector<std::size_t> drop;
        auto eliminate = [&](auto has) {
            std::optional<std::size_t> piv;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (std::find(drop.begin(), drop.end(), i) != drop.end() || !has(rows_[i])) continue;
                if (!piv) {
                    piv = i;
                } else {
                    rows_[i] = multiply(rows_[*piv], rows_[i]);
                }
            }
            if (piv) drop.push_back(*piv);
        };
        eliminate([q](const PauliRow& r) { return r.x[q] != 0; });
        eliminate([q](const PauliRow& r) { return r.z[q] != 0; });
        std::sort(drop.rbegin(), drop.rend());
        for (std::size_t i : drop) rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        for (auto& r : rows_) {
            r.x.erase(r.x.begin() + static_cast<std::ptrdiff_t>(q));
            r.z.erase(r.z.begin() + static_cast<std::ptrdiff_t>(q));
        }
        ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(q));
    }

    /// Generators of the subgroup of elements supported inside `subset`,
    /// expressed over the subset columns in the given order.
    std::vector<PauliString> subgroup_on(const std::vector<int>& subset) const {
        std::vector<std::size_t> inside;
        for (int id : subset) inside.push_back(column(id));
        std::vector<std::size_t> outside;
        for (std::size_t j = 0; j < ids_.size(); ++j) {
            if (std::find(inside.begin(), inside.end(), j) == inside.end()) outside.push_back(j);
        }
        // Eliminate outside columns first; leftover rows live on the subset.
        std::vector<std::size_t> order;
        for (std::size_t j : outside) {
            order.push_back(2 * j);
            order.push_back(2 * j + 1);
        }
        for (std::size_t j : inside) {
            order.push_back(2 * j);
            order.push_back(2 * j + 1);
        }
        auto echelon = reduced_rows(order);
        std::vector<PauliString> out;
        for (const auto& [r, pivot] : echelon) {
            bool clean = true;
            for (std::size_t j : outside) clean &= !(r.x[j] | r.z[j]);
            if (!clean) continue;
            std::string letters;
            for (std::size_t j : inside) letters += r.letter(j);
            out.emplace_back(letters, r.sign());
        }
        return out;
    }

    /// Generators over the tableau columns, e.g. "-XXI".
    std::vector<std::string> str() const {
        std::vector<std::string> out;
        for (const auto& r : rows_) {
            std::string s = r.neg ? "-" : "+";
            for (std::size_t j = 0; j < r.size(); ++j) s += r.letter(j);
            out.push_back(s);
        }
        return out;
    }

    /// Throws unless the generators commute pairwise and are independent.
    void validate() const {
        if (rows_.size() > ids_.size()) throw StateError("tableau: more generators than qubits");
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].size() != ids_.size()) throw StateError("tableau: row width mismatch");
            if (rows_[i].is_identity()) throw StateError("tableau: identity generator");
            for (std::size_t k = i + 1; k < rows_.size(); ++k) {
                if (!rows_[i].commutes_with(rows_[k])) throw StateError("tableau: generators anticommute");
            }
        }
        if (reduced_rows().size() != rows_.size()) throw StateError("tableau: dependent generators");
    }

  private:
    // Symplectic bit c: even c = x of column c/2, odd c = z.
    static bool bit(const PauliRow& r, std::size_t c) { return c % 2 == 0 ? r.x[c / 2] : r.z[c / 2]; }

    // Row echelon form over the given column order, keeping signs exact.
    std::vector<std::pair<PauliRow, std::size_t>> reduced_rows(std::vector<std::size_t> order = {}) const {
        if (order.empty()) {
            for (std::size_t c = 0; c < 2 * ids_.size(); ++c) order.push_back(c);
        }
        std::vector<PauliRow> work = rows_;
        std::vector<std::pair<PauliRow, std::size_t>> out;
        for (std::size_t c : order) {
            auto it = std::find_if(work.begin(), work.end(), [&](const PauliRow& r) { return bit(r, c); });
            if (it == work.end()) continue;
            PauliRow piv = *it;
            work.erase(it);
            for (auto& r : work) {
                if (bit(r, c)) r = multiply(piv, r);
            }
            out.emplace_back(std::move(piv), c);
        }
        return out;
    }

    std::vector<int> ids_;
    std::vector<PauliRow> rows_;
};

}  // namespace tbfusion

#endif  // TBFUSION_TABLEAU_HPP
