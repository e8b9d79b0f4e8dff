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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "boundbell/bell_operators.hpp"
#include "boundbell/parallel.hpp"
#include "boundbell/qubit_algebra.hpp"

namespace boundbell {

enum class WitnessKind { bell_generated, strengthened };

/// Identity-plus-corner witness: diagonal 1, <0...0|W|1...1> = -c e^{-i alpha}
/// and its conjugate. `kappa` is only meaningful for the strengthened family.
class WitnessOperator {
  public:
    WitnessOperator(Matrix matrix, WitnessKind kind, double kappa, double alpha)
        : matrix_(std::move(matrix)), kind_(kind), kappa_(kappa), alpha_(alpha),
          n_(detail::qubits_for_dim(static_cast<std::size_t>(matrix_.rows())).value()) {
        detail::hermitize(matrix_, tolerance::kStructural, "witness");
    }

    [[nodiscard]] const Matrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] WitnessKind kind() const noexcept { return kind_; }
    [[nodiscard]] double kappa() const noexcept { return kappa_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] QubitCount qubits() const { return QubitCount(n_); }

  private:
    Matrix matrix_;
    WitnessKind kind_;
    double kappa_;
    double alpha_;
    int n_;
};

namespace detail {

inline Matrix corner_witness_matrix(QubitCount n, double corner_modulus, double alpha) {
    Matrix w = corner_matrix(n, Complex(-corner_modulus));
    w.diagonal().setOnes();
    return phase_rotate(w, alpha, n);
}

}  // namespace detail

/// (2^{N-1} sqrt3 I - |B|_N(alpha)) / (2^{N-1} sqrt3): corners -3^N/(2^N sqrt3).
[[nodiscard]] inline WitnessOperator witness_from_bell(QubitCount n, double alpha) {
    if (n.value() < 2) throw std::invalid_argument("witness_from_bell requires n >= 2");
    const double corner = std::abs(three_setting_corner(n)) / three_setting_bound(n);
    return {detail::corner_witness_matrix(n, corner, alpha), WitnessKind::bell_generated, corner / std::ldexp(1.0, n.value() - 1), alpha};
}

/// S_N(alpha) with |S_N| = kappa 2^{N-1}, 0 <= kappa <= 1.
[[nodiscard]] inline WitnessOperator s_witness(QubitCount n, double kappa, double alpha) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
    return {detail::corner_witness_matrix(n, kappa * std::ldexp(1.0, n.value() - 1), alpha), WitnessKind::strengthened, kappa, alpha};
}

namespace detail {

struct SparseEntry {
    std::size_t row;
    std::size_t col;
    Complex value;
};

inline std::vector<SparseEntry> nonzero_entries(const Matrix &m) {
    std::vector<SparseEntry> out;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (m(r, c) != Complex(0.0)) out.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), m(r, c)});
        }
    }
    return out;
}

// <v|W|v> for the product state v of `qubits`, touching only the nonzero
// entries of W.
inline double sparse_product_expectation(std::span<const SparseEntry> entries, std::span<const QubitAngles> qubits) {
    const int n = static_cast<int>(qubits.size());
    std::vector<Eigen::Vector2cd> local(qubits.size());
    for (std::size_t k = 0; k < qubits.size(); ++k) local[k] = qubit_state(qubits[k]);
    auto amp = [&](std::size_t b) {
        Complex a = 1.0;
        for (int k = 0; k < n; ++k) a *= local[static_cast<std::size_t>(k)]((b >> (n - 1 - k)) & 1U);
        return a;
    };
    Complex sum = 0.0;
    for (const auto &e : entries) sum += std::conj(amp(e.row)) * e.value * amp(e.col);
    return sum.real();
}

}  // namespace detail

/// Tr(W P_1 (x) ... (x) P_N).
[[nodiscard]] inline double product_expectation(const WitnessOperator &w, const ProductProjectorSpec &spec) {
    if (spec.count() != w.qubits()) throw std::invalid_argument("product_expectation: dimension mismatch");
    const auto entries = detail::nonzero_entries(w.matrix());
    return detail::sparse_product_expectation(entries, spec.qubits);
}

struct PositivityScan {
    double minimum = 0.0;
    ProductProjectorSpec argmin;
};

struct PositivityScanOptions {
    /// Best samples refined by local descent.
    std::size_t refine = 8;
    int max_sweeps = 2000;
    double tolerance = 1e-15;
};

/// Minimum of Tr(W P) over `samples` random product projectors, drawn uniformly
/// on each qubit's Bloch sphere (cos 2theta uniform on [-1,1], phi uniform on
/// [0, 2pi)), refined by exact coordinate descent from the best samples.
[[nodiscard]] inline PositivityScan positivity_scan(const WitnessOperator &w, std::size_t samples, std::uint64_t seed,
                                                    const PositivityScanOptions &options = {}) {
    if (samples < 1) throw std::invalid_argument("positivity_scan needs at least one sample");
    const int n = w.qubits().value();
    const auto entries = detail::nonzero_entries(w.matrix());
    auto eval = [&](std::span<const QubitAngles> q) { return detail::sparse_product_expectation(entries, q); };

    std::vector<std::vector<QubitAngles>> points(samples);
    std::vector<double> values(samples);
    parallel_for(samples, [&](std::size_t i) {
        std::mt19937_64 rng(split_seed(seed, i));
        std::uniform_real_distribution<double> cos2theta(-1.0, 1.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        auto &p = points[i];
        p.resize(static_cast<std::size_t>(n));
        for (auto &q : p) {
            q.theta = 0.5 * std::acos(cos2theta(rng));
            q.phi = phase(rng);
        }
        values[i] = eval(p);
    });

    std::vector<std::size_t> order(samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min(options.refine, samples);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) { return values[a] < values[b] || (values[a] == values[b] && a < b); });

    // In any single theta_k (via t = 2 theta_k) or phi_k the objective is
    // A cos t + B sin t + C, minimized at C - hypot(A, B).
    auto descend = [&](std::vector<QubitAngles> p) {
        double current = eval(p);
        for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
            const double before = current;
            for (auto &q : p) {
                for (int which = 0; which < 2; ++which) {
                    const double scale = which == 0 ? 0.5 : 1.0;
                    double &coord = which == 0 ? q.theta : q.phi;
                    coord = 0.0;
                    const double f0 = eval(p);
                    coord = scale * kPi / 2.0;
                    const double f1 = eval(p);
                    coord = scale * kPi;
                    const double f2 = eval(p);
                    const double c = 0.5 * (f0 + f2);
                    const double a = 0.5 * (f0 - f2);
                    const double b = f1 - c;
                    coord = scale * (std::atan2(b, a) + kPi);
                    current = eval(p);
                }
            }
            if (before - current < options.tolerance) break;
        }
        return std::pair{current, std::move(p)};
    };

    PositivityScan best{values[order[0]], ProductProjectorSpec{points[order[0]]}};
    for (std::size_t r = 0; r < keep; ++r) {
        auto [value, p] = descend(points[order[r]]);
        if (value < best.minimum) best = {value, ProductProjectorSpec{std::move(p)}};
    }
    return best;
}

/// Tr(S_N(kappa, alpha) rho_N(alpha)).
[[nodiscard]] inline double detection_value(QubitCount n, double kappa, double alpha) {
    return expectation(s_witness(n, kappa, alpha).matrix(), dur_state(n, alpha));
}

/// Smallest kappa at which S_N detects the family: (1 + N) / 2^{N-1}.
[[nodiscard]] inline double detection_kappa_threshold(QubitCount n) {
    return (1.0 + n.value()) / std::ldexp(1.0, n.value() - 1);
}

}  // namespace boundbell
