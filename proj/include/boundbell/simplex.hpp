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

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace boundbell {

enum class SimplexStatus { optimal, unbounded, iteration_limit };

struct SimplexOptions {
    /// Pivot elements at or below this magnitude are treated as zero.
    double pivot_tolerance = 1e-9;
    /// Reduced costs must be below -this to enter.
    double cost_tolerance = 1e-11;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    std::size_t degenerate_streak = 50;
    /// 0 means 20 (rows + cols) + 1000.
    std::size_t max_pivots = 0;
};

/// Dense two-phase tableau simplex for
///   minimize c.x  subject to  A x = b, x >= 0.
///
/// Phase one minimizes the sum of one artificial variable per row. Entering
/// columns follow Dantzig's rule; after a run of degenerate pivots the rule
/// switches to Bland's (lowest eligible index) until the objective moves again.
/// Leaving-row ties go to the lowest basic variable index.
///
/// With an exact Scalar (std::numeric_limits<Scalar>::is_exact) all tolerances
/// are zero.
template <class Scalar>
class TableauSimplex {
  public:
    TableauSimplex(std::size_t rows, std::size_t cols, std::span<const Scalar> a_row_major, std::span<const Scalar> b,
                   const SimplexOptions &options = {})
        : rows_(rows), cols_(cols), width_(cols + rows + 1), options_(options), table_(rows * width_, Scalar(0)),
          objective_(width_, Scalar(0)), cost_(cols + rows, Scalar(0)), sign_(rows, 1), basis_(rows) {
        if (a_row_major.size() != rows * cols || b.size() != rows) {
            throw std::invalid_argument("TableauSimplex: A or b has the wrong size");
        }
        if constexpr (kExact) {
            pivot_tol_ = Scalar(0);
            cost_tol_ = Scalar(0);
        } else {
            pivot_tol_ = Scalar(options.pivot_tolerance);
            cost_tol_ = Scalar(options.cost_tolerance);
        }
        max_pivots_ = options.max_pivots != 0 ? options.max_pivots : 20 * (rows + cols) + 1000;
        for (std::size_t i = 0; i < rows; ++i) {
            const bool flip = b[i] < Scalar(0);
            sign_[i] = flip ? -1 : 1;
            Scalar *row = &table_[i * width_];
            for (std::size_t j = 0; j < cols; ++j) row[j] = flip ? Scalar(-a_row_major[i * cols + j]) : a_row_major[i * cols + j];
            row[cols + i] = Scalar(1);
            row[width_ - 1] = flip ? Scalar(-b[i]) : b[i];
            basis_[i] = cols + i;
        }
    }

    /// Minimizes the sum of artificials. Afterwards objective() is the phase-one
    /// optimum; the system is feasible iff that is (numerically) zero.
    SimplexStatus phase_one() {
        for (std::size_t j = 0; j < cols_ + rows_; ++j) cost_[j] = j < cols_ ? Scalar(0) : Scalar(1);
        price_out();
        return iterate();
    }

    /// Minimizes cost.x from the feasible basis left by phase_one().
    SimplexStatus phase_two(std::span<const Scalar> cost) {
        if (cost.size() != cols_) throw std::invalid_argument("TableauSimplex: cost has the wrong size");
        drive_out_artificials();
        for (std::size_t j = 0; j < cols_ + rows_; ++j) cost_[j] = j < cols_ ? cost[j] : Scalar(0);
        price_out();
        return iterate();
    }

    /// Current objective value.
    [[nodiscard]] Scalar objective() const { return Scalar(-objective_[width_ - 1]); }

    /// Values of the structural variables.
    [[nodiscard]] std::vector<Scalar> primal() const {
        std::vector<Scalar> x(cols_, Scalar(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < cols_) x[basis_[i]] = table_[i * width_ + width_ - 1];
        }
        return x;
    }

    /// Simplex multipliers y for the original (unflipped) rows, with reduced
    /// costs c_j - y.A_j >= 0 at optimality.
    [[nodiscard]] std::vector<Scalar> duals() const {
        std::vector<Scalar> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Scalar yi = cost_[cols_ + i] - objective_[cols_ + i];
            y[i] = sign_[i] < 0 ? Scalar(-yi) : yi;
        }
        return y;
    }

    [[nodiscard]] std::size_t pivots() const noexcept { return pivots_; }

  private:
    static constexpr bool kExact = std::numeric_limits<Scalar>::is_exact;

    static Scalar magnitude(const Scalar &x) { return x < Scalar(0) ? Scalar(-x) : x; }

    void price_out() {
        for (std::size_t j = 0; j < width_ - 1; ++j) objective_[j] = cost_[j];
        objective_[width_ - 1] = Scalar(0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Scalar cb = cost_[basis_[i]];
            if (cb == Scalar(0)) continue;
            const Scalar *row = &table_[i * width_];
            for (std::size_t j = 0; j < width_; ++j) objective_[j] -= cb * row[j];
        }
    }

    void pivot(std::size_t r, std::size_t col) {
        Scalar *prow = &table_[r * width_];
        const Scalar inv = Scalar(1) / prow[col];
        for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
        prow[col] = Scalar(1);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            Scalar *row = &table_[i * width_];
            const Scalar f = row[col];
            if (f == Scalar(0)) continue;
            for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
            row[col] = Scalar(0);
        }
        const Scalar f = objective_[col];
        if (f != Scalar(0)) {
            for (std::size_t j = 0; j < width_; ++j) objective_[j] -= f * prow[j];
            objective_[col] = Scalar(0);
        }
        basis_[r] = col;
        ++pivots_;
    }

    SimplexStatus iterate() {
        bool bland = false;
        std::size_t streak = 0;
        while (true) {
            // Artificial columns never re-enter.
            std::size_t enter = cols_;
            Scalar best = Scalar(0);
            for (std::size_t j = 0; j < cols_; ++j) {
                const Scalar d = objective_[j];
                if (!(d < Scalar(-cost_tol_))) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (enter == cols_ || d < best) {
                    enter = j;
                    best = d;
                }
            }
            if (enter == cols_) return SimplexStatus::optimal;
            if (pivots_ >= max_pivots_) return SimplexStatus::iteration_limit;

            std::size_t leave = rows_;
            Scalar best_ratio = Scalar(0);
            for (std::size_t i = 0; i < rows_; ++i) {
                const Scalar a = table_[i * width_ + enter];
                if (!(a > pivot_tol_)) continue;
                const Scalar ratio = table_[i * width_ + width_ - 1] / a;
                if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == rows_) return SimplexStatus::unbounded;

            const bool degenerate = !(magnitude(best_ratio) > pivot_tol_);
            pivot(leave, enter);
            if (degenerate) {
                if (++streak >= options_.degenerate_streak) bland = true;
            } else {
                streak = 0;
                bland = false;
            }
        }
    }

    // Swap basic artificials (at zero after a feasible phase one) for
    // structural columns where the row allows it; rows with no usable entry are
    // redundant and keep their artificial, which can then never move.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < cols_) continue;
            const Scalar *row = &table_[i * width_];
            std::size_t best = cols_;
            Scalar best_mag = pivot_tol_;
            for (std::size_t j = 0; j < cols_; ++j) {
                const Scalar m = magnitude(row[j]);
                if (m > best_mag) {
                    best = j;
                    best_mag = m;
                }
            }
            if (best != cols_) pivot(i, best);
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::size_t width_;
    SimplexOptions options_;
    std::vector<Scalar> table_;
    std::vector<Scalar> objective_;
    std::vector<Scalar> cost_;
    std::vector<int> sign_;
    std::vector<std::size_t> basis_;
    Scalar pivot_tol_{};
    Scalar cost_tol_{};
    std::size_t max_pivots_ = 0;
    std::size_t pivots_ = 0;
};

}  // namespace boundbell
