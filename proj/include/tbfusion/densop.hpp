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

#ifndef TBFUSION_DENSOP_HPP
#define TBFUSION_DENSOP_HPP

/// Dense mixed-state engine for small qubit registers.
///
/// Basis ordering: the first label in a register is the most significant
/// bit of the basis index, so for labels (q0, q1) the index of |q0 q1> is
/// 2*q0 + q1. Every operator handed to apply_unitary / apply_channel /
/// project follows the same convention over its target list.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tbfusion {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxQubits = 8;

/// Raised when an argument violates an operation's precondition.
class StateError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct QubitLabel {
    enum class Kind : std::uint8_t {
        Spin,         // emitter spin at a given time index
        Photon,       // time-bin photonic qubit from a given emission slot
        PhotonFlag,   // occupation flag of a photonic qubit (void vs emitted)
    };

    Kind kind = Kind::Spin;
    int tag = 0;

    static QubitLabel spin(int time_index) { return {Kind::Spin, time_index}; }
    static QubitLabel photon(int slot) { return {Kind::Photon, slot}; }
    static QubitLabel flag(int slot) { return {Kind::PhotonFlag, slot}; }

    bool operator==(const QubitLabel&) const = default;

    std::string str() const {
        switch (kind) {
            case Kind::Spin:
                return "spin" + std::to_string(tag);
            case Kind::Photon:
                return "photon" + std::to_string(tag);
            case Kind::PhotonFlag:
                return "flag" + std::to_string(tag);
        }
        return "?";
    }
};

using Labels = std::vector<QubitLabel>;

/// Pauli operator with an overall sign, e.g. "-ZZ" or "+XIY".
struct PauliString {
    std::string letters;
    int sign = +1;

    PauliString() = default;
    PauliString(std::string ops, int s = +1) : letters(std::move(ops)), sign(s) {
        for (char c : letters) {
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw StateError("PauliString: invalid letter '" + std::string(1, c) + "'");
            }
        }
        if (sign != 1 && sign != -1) {
            throw StateError("PauliString: sign must be +1 or -1");
        }
    }

    static PauliString parse(std::string_view text) {
        int s = +1;
        if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
            s = text.front() == '-' ? -1 : +1;
            text.remove_prefix(1);
        }
        return PauliString(std::string(text), s);
    }

    std::size_t size() const { return letters.size(); }

    std::size_t weight() const {
        return static_cast<std::size_t>(std::count_if(letters.begin(), letters.end(), [](char c) { return c != 'I'; }));
    }

    std::string str() const { return (sign < 0 ? "-" : "+") + letters; }

    bool operator==(const PauliString&) const = default;
};

/// 2x2 Pauli matrices.
inline Matrix pauli_matrix(char letter) {
    Matrix m = Matrix::Zero(2, 2);
    switch (letter) {
        case 'I':
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            break;
        case 'X':
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 'Y':
            m(0, 1) = Complex(0, -1);
            m(1, 0) = Complex(0, 1);
            break;
        case 'Z':
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        default:
            throw StateError("pauli_matrix: invalid letter");
    }
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Matrix pauli_string_matrix(const PauliString& p) {
    Matrix m = Matrix::Identity(1, 1);
    for (char c : p.letters) {
        m = kron(m, pauli_matrix(c));
    }
    return static_cast<double>(p.sign) * m;
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
    if (u.rows() != u.cols()) {
        return false;
    }
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Kraus operators acting on a sub-register. Heralded channels are allowed
/// to be trace-decreasing (sum K^dag K <= I); ordinary ones must be complete.
struct KrausChannel {
    std::vector<Matrix> ops;
    bool heralded = false;

    Matrix completeness() const {
        if (ops.empty()) {
            throw StateError("KrausChannel: no operators");
        }
        Matrix acc = Matrix::Zero(ops.front().cols(), ops.front().cols());
        for (const auto& k : ops) {
            acc += k.adjoint() * k;
        }
        return acc;
    }

    void validate(double tol = 1e-10) const {
        Matrix acc = completeness();
        Matrix id = Matrix::Identity(acc.rows(), acc.cols());
        if (!heralded) {
            if ((acc - id).cwiseAbs().maxCoeff() > tol) {
                throw StateError("KrausChannel: sum of K^dag K differs from identity");
            }
            return;
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(id - acc);
        if (es.eigenvalues().minCoeff() < -tol) {
            throw StateError("KrausChannel: heralded channel exceeds identity");
        }
    }
};

class DensityMatrix {
  public:
    /// Validates Hermiticity, unit trace and positivity.
    DensityMatrix(Matrix rho, Labels labels) : rho_(std::move(rho)), labels_(std::move(labels)) {
        check_shape();
        validate();
    }

    static DensityMatrix from_pure(const Vector& psi, Labels labels) {
        double n = psi.norm();
        if (n < 1e-14) {
            throw StateError("from_pure: zero vector");
        }
        Vector v = psi / n;
        return DensityMatrix(v * v.adjoint(), std::move(labels));
    }

    static DensityMatrix basis(std::uint64_t index, Labels labels) {
        std::size_t dim = std::size_t{1} << labels.size();
        if (index >= dim) {
            throw StateError("basis: index out of range");
        }
        Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
        return DensityMatrix(std::move(rho), std::move(labels));
    }

    static DensityMatrix maximally_mixed(Labels labels) {
        auto dim = static_cast<Eigen::Index>(std::size_t{1} << labels.size());
        return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim), std::move(labels));
    }

    /// Skips validation; for engine-internal results that are valid by construction.
    static DensityMatrix trusted(Matrix rho, Labels labels) {
        DensityMatrix d;
        d.rho_ = std::move(rho);
        d.labels_ = std::move(labels);
        d.check_shape();
        d.rho_ = (d.rho_ + d.rho_.adjoint()).eval() * 0.5;
        return d;
    }

    const Matrix& matrix() const { return rho_; }
    const Labels& labels() const { return labels_; }
    std::size_t num_qubits() const { return labels_.size(); }
    Eigen::Index dim() const { return rho_.rows(); }

    double trace() const { return rho_.trace().real(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    double purity() const { return (rho_ * rho_).trace().real(); }

    std::size_t position(const QubitLabel& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) {
            throw StateError("unknown qubit label " + label.str());
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

    bool contains(const QubitLabel& label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    void validate(double herm_tol = 1e-12, double trace_tol = 1e-12, double psd_tol = 1e-10) const {
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) {
            throw StateError("DensityMatrix: not Hermitian");
        }
        if (std::abs(trace() - 1.0) > trace_tol) {
            throw StateError("DensityMatrix: trace differs from 1");
        }
        if (min_eigenvalue() < -psd_tol) {
            throw StateError("DensityMatrix: not positive semidefinite");
        }
    }

  private:
    DensityMatrix() = default;

    void check_shape() const {
        if (labels_.size() > kMaxQubits) {
            throw StateError("DensityMatrix: register exceeds " + std::to_string(kMaxQubits) + " qubits");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                if (labels_[i] == labels_[j]) {
                    throw StateError("DensityMatrix: duplicate label " + labels_[i].str());
                }
            }
        }
        auto dim = static_cast<Eigen::Index>(std::size_t{1} << labels_.size());
        if (rho_.rows() != dim || rho_.cols() != dim) {
            throw StateError("DensityMatrix: matrix size does not match label count");
        }
    }

    Matrix rho_;
    Labels labels_;
};

/// Result of a (possibly null) projective herald.
struct Projection {
    std::optional<DensityMatrix> state;
    double probability = 0.0;
    bool null() const { return !state.has_value(); }
};

namespace detail {

inline std::vector<std::size_t> positions_of(const DensityMatrix& rho, std::span<const QubitLabel> targets) {
    std::vector<std::size_t> pos;
    pos.reserve(targets.size());
    for (const auto& t : targets) {
        std::size_t p = rho.position(t);
        if (std::find(pos.begin(), pos.end(), p) != pos.end()) {
            throw StateError("duplicate target " + t.str());
        }
        pos.push_back(p);
    }
    return pos;
}

/// Bit of basis index `idx` belonging to register position `pos` (of n).
inline std::size_t bit_at(std::size_t idx, std::size_t pos, std::size_t n) { return (idx >> (n - 1 - pos)) & 1U; }

/// Sub-index over `targets` (first target most significant).
inline std::size_t sub_index(std::size_t idx, const std::vector<std::size_t>& targets, std::size_t n) {
    std::size_t s = 0;
    for (std::size_t p : targets) {
        s = (s << 1) | bit_at(idx, p, n);
    }
    return s;
}

inline std::size_t rest_mask(const std::vector<std::size_t>& targets, std::size_t n) {
    std::size_t full = (std::size_t{1} << n) - 1;
    for (std::size_t p : targets) {
        full &= ~(std::size_t{1} << (n - 1 - p));
    }
    return full;
}

/// Embeds an operator on `targets` into the full register (identity elsewhere).
/// Rectangular operators are not supported here; use Kraus rows in fusion code.
inline Matrix embed(const Matrix& op, const std::vector<std::size_t>& targets, std::size_t n) {
    auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    auto expected = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (op.rows() != expected || op.cols() != expected) {
        throw StateError("operator size does not match target count");
    }
    std::size_t mask = rest_mask(targets, n);
    Matrix full = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
        for (std::size_t j = 0; j < static_cast<std::size_t>(dim); ++j) {
            if ((i & mask) != (j & mask)) {
                continue;
            }
            full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                op(static_cast<Eigen::Index>(sub_index(i, targets, n)),
                   static_cast<Eigen::Index>(sub_index(j, targets, n)));
        }
    }
    return full;
}

}  // namespace detail

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    Labels labels = a.labels();
    for (const auto& l : b.labels()) {
        if (a.contains(l)) {
            throw StateError("tensor: label collision on " + l.str());
        }
        labels.push_back(l);
    }
    if (labels.size() > kMaxQubits) {
        throw StateError("tensor: register exceeds qubit cap");
    }
    return DensityMatrix::trusted(kron(a.matrix(), b.matrix()), std::move(labels));
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u, std::span<const QubitLabel> targets) {
    if (!is_unitary(u)) {
        throw StateError("apply_unitary: operator is not unitary");
    }
    auto pos = detail::positions_of(rho, targets);
    Matrix full = detail::embed(u, pos, rho.num_qubits());
    return DensityMatrix::trusted(full * rho.matrix() * full.adjoint(), rho.labels());
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u, std::initializer_list<QubitLabel> targets) {
    return apply_unitary(rho, u, std::span<const QubitLabel>(targets.begin(), targets.size()));
}

/// rho -> sum_k K rho K^dag. A heralded (trace-decreasing) channel returns
/// the unnormalized result; use project() for normalized heralds.
inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, std::span<const QubitLabel> targets) {
    if (!ch.heralded) {
        ch.validate();
    } else {
        throw StateError("apply_channel: heralded channels must go through project()");
    }
    auto pos = detail::positions_of(rho, targets);
    Matrix acc = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& k : ch.ops) {
        Matrix full = detail::embed(k, pos, rho.num_qubits());
        acc += full * rho.matrix() * full.adjoint();
    }
    return DensityMatrix::trusted(std::move(acc), rho.labels());
}

inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, std::initializer_list<QubitLabel> targets) {
    return apply_channel(rho, ch, std::span<const QubitLabel>(targets.begin(), targets.size()));
}

/// Tr(P rho) for a Pauli string over the whole register, in register order.
inline double expect(const DensityMatrix& rho, const PauliString& p) {
    std::size_t n = rho.num_qubits();
    if (p.size() != n) {
        throw StateError("expect: Pauli length " + std::to_string(p.size()) + " does not match register size " +
                         std::to_string(n));
    }
    std::size_t xmask = 0;
    for (std::size_t q = 0; q < n; ++q) {
        char c = p.letters[q];
        if (c == 'X' || c == 'Y') {
            xmask |= std::size_t{1} << (n - 1 - q);
        }
    }
    // P|k> = phase(k) |k ^ xmask>, so Tr(P rho) = sum_k phase(k) rho(k, k ^ xmask).
    Complex acc = 0.0;
    std::size_t dim = std::size_t{1} << n;
    for (std::size_t k = 0; k < dim; ++k) {
        Complex phase = 1.0;
        for (std::size_t q = 0; q < n; ++q) {
            std::size_t bit = detail::bit_at(k, q, n);
            switch (p.letters[q]) {
                case 'Z':
                    if (bit) phase = -phase;
                    break;
                case 'Y':
                    phase *= bit ? Complex(0, -1) : Complex(0, 1);
                    break;
                default:
                    break;
            }
        }
        acc += phase * rho.matrix()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ xmask));
    }
    return static_cast<double>(p.sign) * acc.real();
}

/// Expectation of a Pauli given on a subset of labels (identity elsewhere).
inline double expect_on(const DensityMatrix& rho, const PauliString& p, std::span<const QubitLabel> on) {
    if (p.size() != on.size()) {
        throw StateError("expect_on: Pauli length does not match label list");
    }
    std::string full(rho.num_qubits(), 'I');
    for (std::size_t i = 0; i < on.size(); ++i) {
        full[rho.position(on[i])] = p.letters[i];
    }
    return expect(rho, PauliString(full, p.sign));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const QubitLabel> keep) {
    auto kpos = detail::positions_of(rho, keep);
    std::size_t n = rho.num_qubits();
    std::vector<std::size_t> tpos;
    for (std::size_t q = 0; q < n; ++q) {
        if (std::find(kpos.begin(), kpos.end(), q) == kpos.end()) {
            tpos.push_back(q);
        }
    }
    std::size_t kd = std::size_t{1} << kpos.size();
    std::size_t td = std::size_t{1} << tpos.size();
    auto compose = [&](std::size_t ki, std::size_t ti) {
        std::size_t idx = 0;
        for (std::size_t b = 0; b < kpos.size(); ++b) {
            std::size_t bit = (ki >> (kpos.size() - 1 - b)) & 1U;
            idx |= bit << (n - 1 - kpos[b]);
        }
        for (std::size_t b = 0; b < tpos.size(); ++b) {
            std::size_t bit = (ti >> (tpos.size() - 1 - b)) & 1U;
            idx |= bit << (n - 1 - tpos[b]);
        }
        return static_cast<Eigen::Index>(idx);
    };
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
    for (std::size_t i = 0; i < kd; ++i) {
        for (std::size_t j = 0; j < kd; ++j) {
            Complex acc = 0.0;
            for (std::size_t t = 0; t < td; ++t) {
                acc += rho.matrix()(compose(i, t), compose(j, t));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    Labels labels(keep.begin(), keep.end());
    return DensityMatrix::trusted(std::move(out), std::move(labels));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<QubitLabel> keep) {
    return partial_trace(rho, std::span<const QubitLabel>(keep.begin(), keep.size()));
}

/// Same state with the register permuted into `order`.
inline DensityMatrix reorder(const DensityMatrix& rho, std::span<const QubitLabel> order) {
    if (order.size() != rho.num_qubits()) {
        throw StateError("reorder: label list must cover the register");
    }
    return partial_trace(rho, order);
}

/// Heralds `M` on `targets`: returns (M rho M^dag / p, p). A probability
/// below 1e-14 yields a null result instead of an error.
inline Projection project(const DensityMatrix& rho, const Matrix& m, std::span<const QubitLabel> targets) {
    KrausChannel check{{m}, true};
    check.validate();
    auto pos = detail::positions_of(rho, targets);
    Matrix full = detail::embed(m, pos, rho.num_qubits());
    Matrix out = full * rho.matrix() * full.adjoint();
    double p = out.trace().real();
    if (p < 1e-14) {
        return {std::nullopt, 0.0};
    }
    return {DensityMatrix::trusted(out / p, rho.labels()), p};
}

inline Projection project(const DensityMatrix& rho, const Matrix& m, std::initializer_list<QubitLabel> targets) {
    return project(rho, m, std::span<const QubitLabel>(targets.begin(), targets.size()));
}

/// <psi| rho |psi> for a pure target in register order.
inline double fidelity_to_pure(const DensityMatrix& rho, const Vector& psi) {
    if (psi.size() != rho.dim()) {
        throw StateError("fidelity_to_pure: dimension mismatch");
    }
    Vector v = psi.normalized();
    return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

inline double trace_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw StateError("trace_distance: dimension mismatch");
    }
    Matrix d = a - b;
    d = (d + d.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.labels() != b.labels()) {
        throw StateError("trace_distance: registers differ");
    }
    return trace_distance(a.matrix(), b.matrix());
}

/// Named two-qubit Bell vectors in the computational basis.
namespace bell {
inline Vector phi_plus() {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return v;
}
inline Vector phi_minus() {
    Vector v = Vector::Zero(4);
    v(0) = 1.0 / std::sqrt(2.0);
    v(3) = -1.0 / std::sqrt(2.0);
    return v;
}
inline Vector psi_plus() {
    Vector v = Vector::Zero(4);
    v(1) = v(2) = 1.0 / std::sqrt(2.0);
    return v;
}
inline Vector psi_minus() {
    Vector v = Vector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return v;
}
}  // namespace bell

}  // namespace tbfusion

#endif  // TBFUSION_DENSOP_HPP
