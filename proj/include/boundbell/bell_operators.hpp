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

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boundbell/qubit_algebra.hpp"

namespace boundbell {

/// Per-observer phases of the three measurement settings.
struct SettingPhaseTable {
    std::vector<std::array<double, 3>> phases;

    /// Observer 1: (pi/6, pi/2, 5pi/6); observers 2..N: (0, pi/3, 2pi/3).
    static SettingPhaseTable standard(QubitCount n) {
        SettingPhaseTable table;
        table.phases.push_back({kPi / 6.0, kPi / 2.0, 5.0 * kPi / 6.0});
        for (int k = 1; k < n.value(); ++k) {
            table.phases.push_back({0.0, kPi / 3.0, 2.0 * kPi / 3.0});
        }
        return table;
    }

    [[nodiscard]] int observers() const noexcept { return static_cast<int>(phases.size()); }
};

/// U(phi) = (1/sqrt 2) [[1, 1], [e^{i phi}, -e^{i phi}]].
[[nodiscard]] inline Mat2 setting_unitary(double phi) {
    const double h = 1.0 / std::numbers::sqrt2;
    const Complex e = std::polar(h, phi);
    Mat2 u;
    u << h, h, e, -e;
    return u;
}

struct ProjectorPair {
    Mat2 outcome0;
    Mat2 outcome1;
};

/// P(j) = U(phi)|j><j|U(phi)^dagger.
[[nodiscard]] inline ProjectorPair projector_pair(double phi) {
    const Mat2 u = setting_unitary(phi);
    return {u.col(0) * u.col(0).adjoint(), u.col(1) * u.col(1).adjoint()};
}

/// Value ascribed to outcome j: P(0) -> -1, P(1) -> +1.
[[nodiscard]] constexpr int outcome_value(int j) noexcept { return j == 0 ? -1 : 1; }

/// P(1) - P(0) for the setting with phase phi.
[[nodiscard]] inline Mat2 setting_observable(double phi) {
    const ProjectorPair p = projector_pair(phi);
    return outcome_value(1) * p.outcome1 + outcome_value(0) * p.outcome0;
}

/// c_{k_1...k_N} = cos(phi^1_{k_1} + ... + phi^N_{k_N}), stored densely with the
/// first observer's choice as the most significant base-3 digit.
class CoefficientTensor {
  public:
    explicit CoefficientTensor(const SettingPhaseTable &table) : n_(table.observers()) {
        if (n_ < 1) throw std::invalid_argument("coefficient tensor needs at least one observer");
        std::size_t size = 1;
        for (int i = 0; i < n_; ++i) size *= 3;
        entries_.resize(size);
        std::vector<int> digits(static_cast<std::size_t>(n_), 0);
        for (std::size_t idx = 0; idx < size; ++idx) {
            std::size_t rest = idx;
            double phase = 0.0;
            for (int i = n_ - 1; i >= 0; --i) {
                phase += table.phases[static_cast<std::size_t>(i)][rest % 3];
                rest /= 3;
            }
            entries_[idx] = std::cos(phase);
        }
    }

    [[nodiscard]] int observers() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] double operator[](std::size_t flat) const { return entries_[flat]; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

    /// Choices are 1-based, as in c_{k_1...k_N}.
    [[nodiscard]] double at(std::span<const int> choices) const { return entries_[flat_index(choices)]; }

    [[nodiscard]] std::size_t flat_index(std::span<const int> choices) const {
        if (static_cast<int>(choices.size()) != n_) {
            throw std::invalid_argument("coefficient tensor: wrong number of setting choices");
        }
        std::size_t idx = 0;
        for (int k : choices) {
            if (k < 1 || k > 3) throw std::invalid_argument("setting choice must be 1, 2 or 3");
            idx = idx * 3 + static_cast<std::size_t>(k - 1);
        }
        return idx;
    }

  private:
    int n_;
    std::vector<double> entries_;
};

/// Outcome distribution of measuring every qubit in the eigenbasis given by
/// `bases[i]` (P(j) = U|j><j|U^dagger): p(l) = <l| U^dagger rho U |l>.
[[nodiscard]] inline std::vector<double> measurement_distribution(const DensityMatrix &rho, std::span<const Mat2> bases) {
    const QubitCount n = rho.qubits();
    if (static_cast<int>(bases.size()) != n.value()) {
        throw std::invalid_argument("measurement_distribution: one basis per qubit required");
    }
    Matrix work = rho.matrix();
    for (int q = 0; q < n.value(); ++q) {
        apply_local_unitary(work, q, bases[static_cast<std::size_t>(q)].adjoint(), n);
    }
    std::vector<double> p(n.dim());
    for (std::size_t b = 0; b < n.dim(); ++b) p[b] = work(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real();
    return p;
}

/// E_{k_1...k_N}: the mean of the product of +-1 outcome values under the Born
/// probabilities. Choices are 1-based.
[[nodiscard]] inline double correlation(const DensityMatrix &rho, std::span<const int> choices, const SettingPhaseTable &table) {
    const QubitCount n = rho.qubits();
    if (table.observers() != n.value() || static_cast<int>(choices.size()) != n.value()) {
        throw std::invalid_argument("correlation: dimension mismatch");
    }
    std::vector<Mat2> bases;
    bases.reserve(choices.size());
    for (std::size_t i = 0; i < choices.size(); ++i) {
        const int k = choices[i];
        if (k < 1 || k > 3) throw std::invalid_argument("setting choice must be 1, 2 or 3");
        bases.push_back(setting_unitary(table.phases[i][static_cast<std::size_t>(k - 1)]));
    }
    const std::vector<double> p = measurement_distribution(rho, bases);
    double e = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
        int sign = 1;
        for (int q = 0; q < n.value(); ++q) sign *= outcome_value(qubit_bit(b, q, n));
        e += sign * p[b];
    }
    return e;
}

/// Hermitian Bell operator with the LHV bound of its inequality.
class BellOperator {
  public:
    BellOperator(Matrix matrix, double classical_bound) : matrix_(std::move(matrix)), bound_(classical_bound) {
        detail::hermitize(matrix_, tolerance::kStructural, "Bell operator");
        if (!(classical_bound > 0.0)) throw std::invalid_argument("Bell operator: classical bound must be positive");
        n_ = detail::qubits_for_dim(static_cast<std::size_t>(matrix_.rows())).value();
    }

    [[nodiscard]] const Matrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] double classical_bound() const noexcept { return bound_; }
    [[nodiscard]] QubitCount qubits() const { return QubitCount(n_); }

  private:
    Matrix matrix_;
    double bound_;
    int n_ = 1;
};

/// 2^{N-1} sqrt(3).
[[nodiscard]] inline double three_setting_bound(QubitCount n) {
    return std::ldexp(std::sqrt(3.0), n.value() - 1);
}

/// (-3)^N / 2, the corner entry of the assembled three-setting operator.
[[nodiscard]] inline double three_setting_corner(QubitCount n) {
    return 0.5 * std::pow(-3.0, n.value());
}

/// Zero matrix except for the two corner entries <0...0|M|1...1> = corner and
/// its conjugate.
[[nodiscard]] inline Matrix corner_matrix(QubitCount n, Complex corner) {
    const auto d = static_cast<Eigen::Index>(n.dim());
    Matrix m = Matrix::Zero(d, d);
    m(0, d - 1) = corner;
    m(d - 1, 0) = std::conj(corner);
    return m;
}

namespace detail {

// Adds coef * (ops[0] (x) ops[1] (x) ...) into out, visiting only nonzero
// factor entries.
inline void accumulate_product(Matrix &out, std::span<const Mat2> ops, double coef) {
    const int n = static_cast<int>(ops.size());
    std::function<void(int, Eigen::Index, Eigen::Index, Complex)> visit = [&](int q, Eigen::Index r, Eigen::Index c, Complex v) {
        if (q == n) {
            out(r, c) += coef * v;
            return;
        }
        const Mat2 &op = ops[static_cast<std::size_t>(q)];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const Complex x = op(i, j);
                if (x == Complex(0.0)) continue;
                visit(q + 1, 2 * r + i, 2 * c + j, v * x);
            }
        }
    };
    visit(0, 0, 0, Complex(1.0));
}

}  // namespace detail

/// B_N = sum_k c_k sum_l (-1)^{...} P^1_{k_1}(l_1) (x) ... (x) P^N_{k_N}(l_N),
/// assembled term by term over all 3^N setting choices.
[[nodiscard]] inline BellOperator bell_operator_three(QubitCount n, const SettingPhaseTable &table) {
    if (n.value() < 2) throw std::invalid_argument("bell_operator_three requires n >= 2");
    if (table.observers() != n.value()) throw std::invalid_argument("phase table does not match qubit count");
    const CoefficientTensor coeffs(table);
    std::vector<std::array<Mat2, 3>> observables(static_cast<std::size_t>(n.value()));
    for (int i = 0; i < n.value(); ++i) {
        for (int k = 0; k < 3; ++k) {
            observables[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                setting_observable(table.phases[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
        }
    }
    const auto d = static_cast<Eigen::Index>(n.dim());
    Matrix b = Matrix::Zero(d, d);
    std::vector<Mat2> term(static_cast<std::size_t>(n.value()));
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        std::size_t rest = idx;
        for (int i = n.value() - 1; i >= 0; --i) {
            term[static_cast<std::size_t>(i)] = observables[static_cast<std::size_t>(i)][rest % 3];
            rest /= 3;
        }
        if (coeffs[idx] == 0.0) continue;
        detail::accumulate_product(b, term, coeffs[idx]);
    }
    return BellOperator(std::move(b), three_setting_bound(n));
}

[[nodiscard]] inline BellOperator bell_operator_three(QubitCount n) {
    return bell_operator_three(n, SettingPhaseTable::standard(n));
}

/// U(alpha/N)^{(x)N} B U(-alpha/N)^{(x)N}.
[[nodiscard]] inline BellOperator rotate_operator(const BellOperator &b, double alpha, QubitCount n) {
    if (b.qubits() != n) throw std::invalid_argument("rotate_operator: dimension mismatch");
    return BellOperator(phase_rotate(b.matrix(), alpha, n), b.classical_bound());
}

/// Exhaustive maximum of |sum_k c_k prod_i v_i(k_i)| over all 8^N deterministic
/// assignments v_i: {1,2,3} -> {-1,+1}. The coefficient tensor is contracted one
/// observer at a time, last observer first, so shared prefixes are reused.
[[nodiscard]] inline double lhv_bound_enumeration(QubitCount n, const SettingPhaseTable &table) {
    if (n.value() > 7) throw std::invalid_argument("lhv_bound_enumeration supports n <= 7");
    if (table.observers() != n.value()) throw std::invalid_argument("phase table does not match qubit count");
    const CoefficientTensor coeffs(table);
    std::vector<std::vector<double>> levels(static_cast<std::size_t>(n.value()) + 1);
    levels[static_cast<std::size_t>(n.value())].assign(coeffs.entries().begin(), coeffs.entries().end());
    double best = 0.0;
    std::function<void(int)> descend = [&](int remaining) {
        const auto &in = levels[static_cast<std::size_t>(remaining)];
        if (remaining == 0) {
            best = std::max(best, std::abs(in[0]));
            return;
        }
        auto &out = levels[static_cast<std::size_t>(remaining) - 1];
        out.assign(in.size() / 3, 0.0);
        for (unsigned strategy = 0; strategy < 8; ++strategy) {
            const double v[3] = {(strategy & 1U) ? 1.0 : -1.0, (strategy & 2U) ? 1.0 : -1.0, (strategy & 4U) ? 1.0 : -1.0};
            for (std::size_t j = 0; j < out.size(); ++j) {
                out[j] = v[0] * in[3 * j] + v[1] * in[3 * j + 1] + v[2] * in[3 * j + 2];
            }
            descend(remaining - 1);
        }
    };
    descend(n.value());
    return best;
}

/// White-noise fraction below which the violation survives.
struct NoiseThreshold {
    double value = 0.0;
    bool violated = false;
};

/// max{0, 1 - 2^N (N+1) sqrt(3) / 3^N}; `violated` is false when the formula is
/// not positive (N <= 6).
[[nodiscard]] inline NoiseThreshold noise_threshold_three(QubitCount n) {
    const double raw = 1.0 - std::ldexp(1.0, n.value()) * (n.value() + 1) * std::sqrt(3.0) / std::pow(3.0, n.value());
    if (raw <= 0.0) return {0.0, false};
    return {raw, true};
}

}  // namespace boundbell
