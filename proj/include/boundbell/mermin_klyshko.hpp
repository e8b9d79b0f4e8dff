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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "boundbell/bell_operators.hpp"
#include "boundbell/parallel.hpp"
#include "boundbell/qubit_algebra.hpp"

// Two-setting Mermin-Klyshko operators built from equatorial observables
// sigma(a) = cos(a) sigma_x + sin(a) sigma_y, via the recursion
//   M_1 = sigma(a_1)
//   M_k = 1/2 M_{k-1} (x) (sigma(a_k) + sigma(a'_k)) + 1/2 M'_{k-1} (x) (sigma(a_k) - sigma(a'_k))
// where M' swaps a <-> a'. The LHV bound is 1.
//
// Every sigma(a) is purely off-diagonal, so M_N only has entries at (b, ~b).
// Operators are carried as that anti-diagonal: x[b] = M(b, ~b).
namespace boundbell {

struct MkSettings {
    /// (a_k, a'_k) per observer, radians.
    std::vector<std::pair<double, double>> angles;

    MkSettings() = default;
    explicit MkSettings(std::vector<std::pair<double, double>> a) : angles(std::move(a)) {
        for (auto &[x, y] : angles) {
            if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("MK angles must be finite");
            x = std::remainder(x, 2.0 * kPi);
            y = std::remainder(y, 2.0 * kPi);
        }
    }

    [[nodiscard]] int observers() const noexcept { return static_cast<int>(angles.size()); }
};

/// Anti-diagonal of M_N: entry b is <b|M_N|~b>.
[[nodiscard]] inline Vector mk_antidiagonal(const MkSettings &s) {
    if (s.observers() < 1) throw std::invalid_argument("MK settings need at least one observer");
    // sigma(a) anti-diagonal: (e^{-ia}, e^{ia}).
    auto sig = [](double a) { return std::pair{std::polar(1.0, -a), std::polar(1.0, a)}; };
    Vector m(2), mp(2);
    {
        const auto [a, ap] = s.angles[0];
        std::tie(m(0), m(1)) = sig(a);
        std::tie(mp(0), mp(1)) = sig(ap);
    }
    for (int k = 1; k < s.observers(); ++k) {
        const auto [a, ap] = s.angles[static_cast<std::size_t>(k)];
        const auto [s0, s1] = sig(a);
        const auto [t0, t1] = sig(ap);
        const Complex plus[2] = {0.5 * (s0 + t0), 0.5 * (s1 + t1)};
        const Complex minus[2] = {0.5 * (s0 - t0), 0.5 * (s1 - t1)};
        Vector next(2 * m.size()), next_p(2 * m.size());
        for (Eigen::Index b = 0; b < m.size(); ++b) {
            for (int c = 0; c < 2; ++c) {
                next(2 * b + c) = m(b) * plus[c] + mp(b) * minus[c];
                // M'_k = 1/2 M'_{k-1} (x) (sigma(a') + sigma(a)) + 1/2 M_{k-1} (x) (sigma(a') - sigma(a))
                next_p(2 * b + c) = mp(b) * plus[c] - m(b) * minus[c];
            }
        }
        m = std::move(next);
        mp = std::move(next_p);
    }
    return m;
}

/// Dense M_N with classical bound 1.
[[nodiscard]] inline BellOperator mk_operator(QubitCount n, const MkSettings &settings) {
    if (n.value() < 2) throw std::invalid_argument("mk_operator requires n >= 2");
    if (settings.observers() != n.value()) throw std::invalid_argument("MK settings do not match qubit count");
    const Vector anti = mk_antidiagonal(settings);
    const auto d = static_cast<Eigen::Index>(n.dim());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) m(b, (d - 1) ^ b) = anti(b);
    return BellOperator(std::move(m), 1.0);
}

/// Tr(M_N rho) from the anti-diagonals alone; O(2^N).
[[nodiscard]] inline double mk_expectation(const MkSettings &settings, const DensityMatrix &rho) {
    if (settings.observers() != rho.qubits().value()) throw std::invalid_argument("MK settings do not match state");
    const Vector anti = mk_antidiagonal(settings);
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Complex sum = 0.0;
    for (Eigen::Index b = 0; b < d; ++b) sum += anti(b) * rho.matrix()((d - 1) ^ b, b);
    return sum.real();
}

struct MkOptimum {
    double value = 0.0;
    MkSettings settings;
    bool converged = false;
};

struct MkSearchOptions {
    int starts = 32;
    std::uint64_t seed = 0x4d4b;
    double tolerance = 1e-10;
    int max_sweeps = 5000;
};

/// Maximizes Tr(M_N rho) over the 2N angles by multi-start coordinate ascent.
/// The objective is A cos(t) + B sin(t) + C in each single angle t, so every
/// coordinate step is solved exactly from three evaluations.
[[nodiscard]] inline MkOptimum mk_optimize(const DensityMatrix &rho, const MkSearchOptions &options = {}) {
    const int n = rho.qubits().value();
    if (n < 2) throw std::invalid_argument("mk_optimize requires n >= 2");
    if (options.starts < 1) throw std::invalid_argument("mk_optimize needs at least one start");
    std::vector<MkOptimum> results(static_cast<std::size_t>(options.starts));
    parallel_for(results.size(), [&](std::size_t start) {
        std::mt19937_64 rng(split_seed(options.seed, start));
        std::uniform_real_distribution<double> angle(-kPi, kPi);
        std::vector<double> x(static_cast<std::size_t>(2 * n));
        for (double &a : x) a = angle(rng);
        auto settings_of = [&](const std::vector<double> &v) {
            MkSettings s;
            s.angles.resize(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) s.angles[static_cast<std::size_t>(k)] = {v[2 * static_cast<std::size_t>(k)], v[2 * static_cast<std::size_t>(k) + 1]};
            return s;
        };
        auto f = [&] { return mk_expectation(settings_of(x), rho); };
        double current = f();
        bool converged = false;
        for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
            const double before = current;
            for (double &coord : x) {
                coord = 0.0;
                const double f0 = f();
                coord = kPi / 2.0;
                const double f1 = f();
                coord = kPi;
                const double f2 = f();
                const double c = 0.5 * (f0 + f2);
                const double a = 0.5 * (f0 - f2);
                const double b = f1 - c;
                coord = std::atan2(b, a);
                current = c + std::hypot(a, b);
            }
            converged = current - before < options.tolerance;
        }
        results[start] = MkOptimum{current, MkSettings(settings_of(x).angles), converged};
    });
    MkOptimum best = results.front();
    for (const auto &r : results) {
        if (r.value > best.value) best = r;
    }
    return best;
}

/// Best MK expectation on the bound-entangled family member rho_N(alpha).
[[nodiscard]] inline MkOptimum mk_dur_optimum(QubitCount n, double alpha, const MkSearchOptions &options = {}) {
    if (n.value() < 4) throw std::invalid_argument("mk_dur_optimum requires n >= 4");
    return mk_optimize(dur_state(n, alpha), options);
}

/// pi / (4(N-1)), the family parameter used for MK comparisons.
[[nodiscard]] inline double mk_default_alpha(QubitCount n) { return kPi / (4.0 * (n.value() - 1)); }

/// Optimum values within this margin of the LHV bound 1 count as no violation.
inline constexpr double kMkViolationMargin = 1e-9;

/// max{0, 1 - 1/optimum} at alpha = pi/(4(N-1)).
[[nodiscard]] inline NoiseThreshold noise_threshold_mk(QubitCount n, const MkSearchOptions &options = {}) {
    const MkOptimum opt = mk_dur_optimum(n, mk_default_alpha(n), options);
    if (!opt.converged) throw NumericalFailure("MK setting optimization did not converge");
    if (opt.value <= 1.0 + kMkViolationMargin) return {0.0, false};
    return {1.0 - 1.0 / opt.value, true};
}

}  // namespace boundbell
