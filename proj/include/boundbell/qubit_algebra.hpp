// Copyright 2026 The boundbell Authors
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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

/// N-qubit states and operators, plus the tensor/expectation primitives the
/// rest of the library is built on.
///
/// Basis convention, shared by every module: the computational basis state
/// |l_1 l_2 ... l_N> has index b = sum_k l_k 2^(N-k), i.e. the first qubit is
/// the most significant bit. |00...0> is index 0 and |11...1> is index 2^N-1.
namespace boundbell {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;

namespace tolerance {
inline constexpr double kStructural = 1e-12;
inline constexpr double kDerived = 1e-9;
inline constexpr double kHermitianInput = 1e-10;
inline constexpr double kNegativeEigenvalue = 1e-10;
inline constexpr double kImaginaryResidue = 1e-9;
}  // namespace tolerance

/// Raised when an iterative numerical routine cannot produce a trustworthy
/// answer (iteration caps, marginal pivots, non-convergence).
class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Number of qubits, 1 <= n <= 12.
class QubitCount {
  public:
    static constexpr int kMax = 12;

    explicit QubitCount(int n) : n_(n) {
        if (n < 1 || n > kMax) {
            throw std::invalid_argument("qubit count must be in [1, 12], got " + std::to_string(n));
        }
    }

    [[nodiscard]] int value() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{1} << n_; }
    [[nodiscard]] std::size_t last_index() const noexcept { return dim() - 1; }

    auto operator<=>(const QubitCount &) const = default;

  private:
    int n_;
};

/// Bit of qubit `qubit` (0-based, qubit 0 is the leftmost tensor factor).
[[nodiscard]] inline int qubit_bit(std::size_t index, int qubit, QubitCount n) noexcept {
    return static_cast<int>((index >> (n.value() - 1 - qubit)) & 1U);
}

/// Index of the basis state |bits[0] bits[1] ...>.
[[nodiscard]] inline std::size_t basis_index(std::span<const int> bits) {
    std::size_t index = 0;
    for (int bit : bits) {
        if (bit != 0 && bit != 1) {
            throw std::invalid_argument("basis bits must be 0 or 1");
        }
        index = (index << 1U) | static_cast<std::size_t>(bit);
    }
    return index;
}

namespace detail {

inline QubitCount qubits_for_dim(std::size_t dim) {
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw std::invalid_argument("matrix dimension must be a power of two >= 2, got " + std::to_string(dim));
    }
    return QubitCount(std::countr_zero(dim));
}

inline double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest elementwise |A - A^dagger|.
inline double hermitian_defect(const Matrix &m) {
    return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Symmetrize to (A + A^dagger)/2 when the asymmetry is below `tol` relative to
/// max(1, max|A_ij|); throw otherwise.
inline void hermitize(Matrix &m, double tol, const char *what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix is not square");
    }
    const double scale = std::max(1.0, max_abs(m));
    if (hermitian_defect(m) > tol * scale) {
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
    }
    Matrix sym = (m + m.adjoint()) * 0.5;
    m = std::move(sym);
}

}  // namespace detail

/// Normalized N-qubit pure state.
class StateVector {
  public:
    explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)), n_(detail::qubits_for_dim(amplitudes_.size())) {
        if (std::abs(amplitudes_.squaredNorm() - 1.0) > tolerance::kStructural) {
            throw std::invalid_argument("state vector is not normalized");
        }
    }

    [[nodiscard]] const Vector &amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] QubitCount qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  private:
    Vector amplitudes_;
    QubitCount n_;
};

/// Hermitian, unit-trace N-qubit density matrix.
///
/// The constructor checks shape, Hermiticity and trace. Positivity is checked by
/// `from_matrix`; the library's own factories produce positive matrices by
/// construction and skip the O(dim^3) eigenvalue pass.
class DensityMatrix {
  public:
    explicit DensityMatrix(Matrix entries) : entries_(std::move(entries)), n_(detail::qubits_for_dim(entries_.rows())) {
        detail::hermitize(entries_, tolerance::kStructural, "density matrix");
        if (std::abs(entries_.trace() - Complex(1.0)) > tolerance::kStructural) {
            throw std::invalid_argument("density matrix trace is not 1");
        }
    }

    /// Fully validated construction, including eigenvalues >= -1e-10.
    static DensityMatrix from_matrix(Matrix entries) {
        DensityMatrix rho(std::move(entries));
        if (rho.min_eigenvalue() < -tolerance::kNegativeEigenvalue) {
            throw std::invalid_argument("density matrix has a negative eigenvalue");
        }
        return rho;
    }

    static DensityMatrix projector(const StateVector &psi) {
        const Vector &a = psi.amplitudes();
        return DensityMatrix(a * a.adjoint());
    }

    static DensityMatrix maximally_mixed(QubitCount n) {
        const auto d = static_cast<Eigen::Index>(n.dim());
        return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
    }

    [[nodiscard]] const Matrix &matrix() const noexcept { return entries_; }
    [[nodiscard]] QubitCount qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    [[nodiscard]] Complex operator()(std::size_t r, std::size_t c) const {
        return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    [[nodiscard]] double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

  private:
    Matrix entries_;
    QubitCount n_;
};

/// (|0...0> + e^{i alpha}|1...1>)/sqrt(2).
[[nodiscard]] inline StateVector ghz(QubitCount n, double alpha) {
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(n.dim()));
    const double h = 1.0 / std::numbers::sqrt2;
    amps(0) = h;
    amps(static_cast<Eigen::Index>(n.last_index())) = std::polar(h, alpha);
    return StateVector(std::move(amps));
}

/// The one-parameter bound-entangled family
///   rho_N(alpha) = (|psi(alpha)><psi(alpha)| + 1/2 sum_k (P_k + Pbar_k)) / (N+1),
/// where P_k projects on the single excitation at qubit k and Pbar_k on its
/// bit complement.
[[nodiscard]] inline DensityMatrix dur_state(QubitCount n, double alpha) {
    if (n.value() < 2) {
        throw std::invalid_argument("dur_state requires n >= 2");
    }
    const auto d = static_cast<Eigen::Index>(n.dim());
    const auto last = d - 1;
    const double weight = 1.0 / (2.0 * (n.value() + 1));
    Matrix m = Matrix::Zero(d, d);
    m(0, 0) = weight;
    m(last, last) = weight;
    m(0, last) = std::polar(weight, -alpha);
    m(last, 0) = std::polar(weight, alpha);
    for (int k = 0; k < n.value(); ++k) {
        const auto excitation = static_cast<Eigen::Index>(std::size_t{1} << (n.value() - 1 - k));
        const auto hole = last ^ excitation;
        m(excitation, excitation) += weight;
        m(hole, hole) += weight;
    }
    return DensityMatrix(std::move(m));
}

/// (1 - v) rho + v I / 2^N.
[[nodiscard]] inline DensityMatrix mix_with_noise(const DensityMatrix &rho, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("noise fraction must lie in [0, 1]");
    }
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Matrix m = (1.0 - v) * rho.matrix();
    m.diagonal().array() += v / static_cast<double>(d);
    return DensityMatrix(std::move(m));
}

/// Single-qubit pure state cos(theta)|0> + e^{i phi} sin(theta)|1>.
struct QubitAngles {
    double theta = 0.0;
    double phi = 0.0;
};

struct ProductProjectorSpec {
    std::vector<QubitAngles> qubits;

    [[nodiscard]] QubitCount count() const { return QubitCount(static_cast<int>(qubits.size())); }
};

[[nodiscard]] inline Eigen::Vector2cd qubit_state(const QubitAngles &a) {
    return {Complex(std::cos(a.theta), 0.0), std::polar(std::sin(a.theta), a.phi)};
}

[[nodiscard]] inline StateVector product_state(const ProductProjectorSpec &spec) {
    const QubitCount n = spec.count();
    Vector v = Vector::Ones(static_cast<Eigen::Index>(n.dim()));
    for (std::size_t b = 0; b < n.dim(); ++b) {
        Complex amp = 1.0;
        for (int k = 0; k < n.value(); ++k) {
            amp *= qubit_state(spec.qubits[static_cast<std::size_t>(k)])(qubit_bit(b, k, n));
        }
        v(static_cast<Eigen::Index>(b)) = amp;
    }
    return StateVector(std::move(v));
}

/// Rank-one projector P_1 (x) ... (x) P_N onto the product state of `spec`.
[[nodiscard]] inline DensityMatrix product_projector(const ProductProjectorSpec &spec) {
    return DensityMatrix::projector(product_state(spec));
}

/// Tr(op rho) for Hermitian `op`. The imaginary residue must be below 1e-9
/// (relative to the operator scale) and is discarded.
[[nodiscard]] inline double expectation(const Matrix &op, const DensityMatrix &rho) {
    if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != rho.dim()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    const double scale = std::max(1.0, detail::max_abs(op));
    if (detail::hermitian_defect(op) > tolerance::kHermitianInput * scale) {
        throw std::invalid_argument("expectation: operator is not Hermitian");
    }
    const Complex value = op.cwiseProduct(rho.matrix().transpose()).sum();
    if (std::abs(value.imag()) > tolerance::kImaginaryResidue * scale) {
        throw NumericalFailure("expectation: imaginary residue too large");
    }
    return value.real();
}

/// Kronecker product a (x) b.
[[nodiscard]] inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// In place: rho <- (I (x) U (x) I) rho (I (x) U^dagger (x) I), with U acting on `qubit`.
inline void apply_local_unitary(Matrix &rho, int qubit, const Mat2 &u, QubitCount n) {
    const auto d = static_cast<Eigen::Index>(n.dim());
    const auto stride = static_cast<Eigen::Index>(std::size_t{1} << (n.value() - 1 - qubit));
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r0 = 0; r0 < d; ++r0) {
            if (r0 & stride) continue;
            const Eigen::Index r1 = r0 | stride;
            const Complex x0 = rho(r0, c);
            const Complex x1 = rho(r1, c);
            rho(r0, c) = u(0, 0) * x0 + u(0, 1) * x1;
            rho(r1, c) = u(1, 0) * x0 + u(1, 1) * x1;
        }
    }
    const Mat2 ud = u.adjoint();
    for (Eigen::Index c0 = 0; c0 < d; ++c0) {
        if (c0 & stride) continue;
        const Eigen::Index c1 = c0 | stride;
        for (Eigen::Index r = 0; r < d; ++r) {
            const Complex x0 = rho(r, c0);
            const Complex x1 = rho(r, c1);
            rho(r, c0) = x0 * ud(0, 0) + x1 * ud(1, 0);
            rho(r, c1) = x0 * ud(0, 1) + x1 * ud(1, 1);
        }
    }
}

/// Conjugation by U(alpha/N)^{(x)N} with U(t) = |0><0| + e^{it}|1><1|:
/// entry (r, c) picks up e^{i (alpha/N)(popcount(r) - popcount(c))}.
[[nodiscard]] inline Matrix phase_rotate(const Matrix &op, double alpha, QubitCount n) {
    if (static_cast<std::size_t>(op.rows()) != n.dim() || op.rows() != op.cols()) {
        throw std::invalid_argument("phase_rotate: dimension mismatch");
    }
    const double step = alpha / n.value();
    Matrix out = op;
    for (Eigen::Index r = 0; r < op.rows(); ++r) {
        const int pr = std::popcount(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < op.cols(); ++c) {
            if (op(r, c) == Complex(0.0)) continue;
            const int pc = std::popcount(static_cast<std::size_t>(c));
            out(r, c) *= std::polar(1.0, step * (pr - pc));
        }
    }
    return out;
}

// Debug serialization: {"dim": d, "entries": [[re, im], ...]} in row-major order.

[[nodiscard]] inline nlohmann::json matrix_to_json(const Matrix &m) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            entries.push_back({m(r, c).real(), m(r, c).imag()});
        }
    }
    return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

[[nodiscard]] inline Matrix matrix_from_json(const nlohmann::json &j) {
    const auto d = j.at("dim").get<Eigen::Index>();
    const auto &entries = j.at("entries");
    if (d < 0 || entries.size() != static_cast<std::size_t>(d * d)) {
        throw std::invalid_argument("matrix json: entry count does not match dim");
    }
    Matrix m(d, d);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c, ++k) {
            m(r, c) = Complex(entries[k].at(0).get<double>(), entries[k].at(1).get<double>());
        }
    }
    return m;
}

}  // namespace boundbell
