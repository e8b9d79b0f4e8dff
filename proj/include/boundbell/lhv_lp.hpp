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

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "boundbell/bell_operators.hpp"
#include "boundbell/parallel.hpp"
#include "boundbell/qubit_algebra.hpp"
#include "boundbell/simplex.hpp"

// Local-hidden-variable feasibility by linear programming.
//
// A behavior p(l_1..l_n | k_1..k_n) has a local model iff it is a convex
// combination of deterministic strategies, each of which fixes an outcome
// l_i(k) for every observer i and setting k. Strategy weights are the LP
// variables, one per column; one behavior entry per row.
//
// Layouts used throughout:
//  - behavior row = setting_tuple * 2^n + outcome_tuple, where setting_tuple is
//    the base-m number k_1...k_n (0-based, observer 1 most significant) and
//    outcome_tuple the binary number l_1...l_n (observer 1 most significant);
//  - strategy column s stores l_i(k) in bit i*m + k.
namespace boundbell {

/// A problem too large for the dense solver or the strategy enumeration cap.
class CapacityExceeded : public std::length_error {
  public:
    using std::length_error::length_error;
};

namespace lhv_tolerance {
inline constexpr double kProbability = 1e-12;
inline constexpr double kNormalization = 1e-10;
inline constexpr double kNoSignalling = 1e-9;
inline constexpr double kReconstruction = 1e-8;
inline constexpr double kNegativeWeight = 1e-10;
inline constexpr double kCertificateGap = 1e-8;
}  // namespace lhv_tolerance

namespace detail {

inline std::size_t checked_power(std::size_t base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<std::size_t>::max() / base) throw CapacityExceeded("size overflow");
        out *= base;
    }
    return out;
}

}  // namespace detail

/// n observers, each with m two-outcome measurements. Setting k of observer i
/// is the basis of unitary U: P(j) = U|j><j|U^dagger.
class ExperimentSpec {
  public:
    explicit ExperimentSpec(std::vector<std::vector<Mat2>> bases) : bases_(std::move(bases)) {
        if (bases_.empty() || bases_.front().empty()) throw std::invalid_argument("experiment needs observers and settings");
        for (const auto &observer : bases_) {
            if (observer.size() != bases_.front().size()) throw std::invalid_argument("every observer needs the same number of settings");
            for (const Mat2 &u : observer) {
                // P(0) + P(1) = U U^dagger.
                if ((u * u.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() > tolerance::kStructural) {
                    throw std::invalid_argument("measurement basis is not unitary");
                }
            }
        }
    }

    [[nodiscard]] int observers() const noexcept { return static_cast<int>(bases_.size()); }
    [[nodiscard]] int settings() const noexcept { return static_cast<int>(bases_.front().size()); }
    [[nodiscard]] const Mat2 &basis(int observer, int setting) const {
        return bases_[static_cast<std::size_t>(observer)][static_cast<std::size_t>(setting)];
    }
    [[nodiscard]] const std::vector<std::vector<Mat2>> &bases() const noexcept { return bases_; }

  private:
    std::vector<std::vector<Mat2>> bases_;
};

/// Settings given by phases, measured with setting_unitary(phi).
[[nodiscard]] inline ExperimentSpec experiment_from_phases(const std::vector<std::vector<double>> &phases) {
    std::vector<std::vector<Mat2>> bases;
    for (const auto &observer : phases) {
        auto &row = bases.emplace_back();
        for (double phi : observer) row.push_back(setting_unitary(phi));
    }
    return ExperimentSpec(std::move(bases));
}

[[nodiscard]] inline ExperimentSpec experiment_from_phases(const SettingPhaseTable &table) {
    std::vector<std::vector<double>> phases;
    for (const auto &p : table.phases) phases.emplace_back(p.begin(), p.end());
    return experiment_from_phases(phases);
}

/// Haar-random element of U(2) (uniform unit quaternion).
template <class Rng>
[[nodiscard]] Mat2 haar_unitary(Rng &rng) {
    std::normal_distribution<double> normal;
    double x[4];
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double &v : x) {
            v = normal(rng);
            norm += v * v;
        }
    } while (norm < 1e-24);
    norm = std::sqrt(norm);
    const Complex a(x[0] / norm, x[1] / norm);
    const Complex b(x[2] / norm, x[3] / norm);
    Mat2 u;
    u << a, -std::conj(b), b, std::conj(a);
    return u;
}

/// Row bookkeeping shared by behaviors and LP problems.
struct BehaviorLayout {
    int observers = 1;
    int settings = 1;

    [[nodiscard]] std::size_t setting_tuples() const { return detail::checked_power(static_cast<std::size_t>(settings), observers); }
    [[nodiscard]] std::size_t outcome_tuples() const { return std::size_t{1} << observers; }
    [[nodiscard]] std::size_t rows() const { return setting_tuples() * outcome_tuples(); }
    [[nodiscard]] std::size_t row(std::size_t setting_tuple, std::size_t outcome_tuple) const {
        return setting_tuple * outcome_tuples() + outcome_tuple;
    }
    /// 0-based setting of observer i within a setting tuple.
    [[nodiscard]] int setting_of(std::size_t setting_tuple, int observer) const {
        for (int j = observers - 1; j > observer; --j) setting_tuple /= static_cast<std::size_t>(settings);
        return static_cast<int>(setting_tuple % static_cast<std::size_t>(settings));
    }
    [[nodiscard]] int outcome_of(std::size_t outcome_tuple, int observer) const {
        return static_cast<int>((outcome_tuple >> (observers - 1 - observer)) & 1U);
    }
    [[nodiscard]] std::size_t setting_stride(int observer) const {
        return detail::checked_power(static_cast<std::size_t>(settings), observers - 1 - observer);
    }
};

/// Joint outcome probabilities p(l | k) for every setting tuple.
class QuantumBehavior {
  public:
    QuantumBehavior(int observers, int settings, std::vector<double> probabilities)
        : layout_{observers, settings}, p_(std::move(probabilities)) {
        if (observers < 1 || settings < 1) throw std::invalid_argument("behavior needs observers and settings");
        if (p_.size() != layout_.rows()) throw std::invalid_argument("behavior has the wrong number of entries");
        validate();
    }

    [[nodiscard]] int observers() const noexcept { return layout_.observers; }
    [[nodiscard]] int settings() const noexcept { return layout_.settings; }
    [[nodiscard]] const BehaviorLayout &layout() const noexcept { return layout_; }
    [[nodiscard]] std::size_t rows() const noexcept { return p_.size(); }
    [[nodiscard]] double operator[](std::size_t row) const { return p_[row]; }
    [[nodiscard]] const std::vector<double> &probabilities() const noexcept { return p_; }

    /// Settings 1-based, outcomes 0/1.
    [[nodiscard]] double at(std::span<const int> settings, std::span<const int> outcomes) const {
        if (static_cast<int>(settings.size()) != observers() || static_cast<int>(outcomes.size()) != observers()) {
            throw std::invalid_argument("behavior lookup: wrong tuple length");
        }
        std::size_t s = 0;
        for (int k : settings) {
            if (k < 1 || k > layout_.settings) throw std::invalid_argument("behavior lookup: setting out of range");
            s = s * static_cast<std::size_t>(layout_.settings) + static_cast<std::size_t>(k - 1);
        }
        return p_[layout_.row(s, basis_index(outcomes))];
    }

    /// Largest change of any single-observer marginal under a change of that
    /// observer's setting.
    [[nodiscard]] double signalling() const {
        double worst = 0.0;
        const std::size_t outcomes = layout_.outcome_tuples();
        for (int i = 0; i < observers(); ++i) {
            const std::size_t stride = layout_.setting_stride(i);
            const std::size_t bit = std::size_t{1} << (observers() - 1 - i);
            for (std::size_t s = 0; s < layout_.setting_tuples(); ++s) {
                if (layout_.setting_of(s, i) != 0) continue;
                for (int x = 1; x < settings(); ++x) {
                    const std::size_t s2 = s + static_cast<std::size_t>(x) * stride;
                    for (std::size_t o = 0; o < outcomes; ++o) {
                        if (o & bit) continue;
                        const double m1 = p_[layout_.row(s, o)] + p_[layout_.row(s, o | bit)];
                        const double m2 = p_[layout_.row(s2, o)] + p_[layout_.row(s2, o | bit)];
                        worst = std::max(worst, std::abs(m1 - m2));
                    }
                }
            }
        }
        return worst;
    }

  private:
    void validate() const {
        for (double v : p_) {
            if (!(v >= -lhv_tolerance::kProbability && v <= 1.0 + lhv_tolerance::kProbability)) {
                throw std::invalid_argument("behavior entry outside [0, 1]");
            }
        }
        const std::size_t outcomes = layout_.outcome_tuples();
        for (std::size_t s = 0; s < layout_.setting_tuples(); ++s) {
            double sum = 0.0;
            for (std::size_t o = 0; o < outcomes; ++o) sum += p_[layout_.row(s, o)];
            if (std::abs(sum - 1.0) > lhv_tolerance::kNormalization) throw std::invalid_argument("behavior is not normalized");
        }
        if (signalling() > lhv_tolerance::kNoSignalling) throw std::invalid_argument("behavior violates no-signalling");
    }

    BehaviorLayout layout_;
    std::vector<double> p_;
};

/// Born-rule behavior p(l | k) = Tr(rho (x)_i P^i_{k_i}(l_i)).
[[nodiscard]] inline QuantumBehavior quantum_behavior(const DensityMatrix &rho, const ExperimentSpec &spec) {
    const QubitCount n = rho.qubits();
    if (spec.observers() != n.value()) throw std::invalid_argument("quantum_behavior: dimension mismatch");
    const BehaviorLayout layout{spec.observers(), spec.settings()};
    std::vector<double> p(layout.rows());
    std::vector<Matrix> work(static_cast<std::size_t>(n.value()) + 1);
    work[0] = rho.matrix();
    std::size_t tuple = 0;
    // Depth-first over observers so each partial basis change is shared.
    auto descend = [&](auto &self, int observer) -> void {
        if (observer == n.value()) {
            const Matrix &m = work[static_cast<std::size_t>(observer)];
            for (std::size_t o = 0; o < layout.outcome_tuples(); ++o) {
                p[layout.row(tuple, o)] = m(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(o)).real();
            }
            ++tuple;
            return;
        }
        for (int k = 0; k < spec.settings(); ++k) {
            Matrix &next = work[static_cast<std::size_t>(observer) + 1];
            next = work[static_cast<std::size_t>(observer)];
            apply_local_unitary(next, observer, spec.basis(observer, k).adjoint(), n);
            self(self, observer + 1);
        }
    };
    descend(descend, 0);
    return QuantumBehavior(n.value(), spec.settings(), std::move(p));
}

/// The LP skeleton for n observers with m settings each: 0/1 matrix with one
/// row per behavior entry and one column per deterministic strategy. Every
/// column has exactly m^n ones, so the normalization sum_s w_s = 1 is implied
/// by the rows of any single setting tuple.
///
/// The rows have rank (m+1)^n. A fixed independent subset is kept: per
/// observer, the local rows (k=1, l=0), (k=1, l=1), (k, l=0) for k >= 2, and
/// their products. Any other row follows from
///   (k, 1) = (1, 0) + (1, 1) - (k, 0).
class LhvProblem {
  public:
    static constexpr int kMaxStrategyBits = 24;
    static constexpr std::size_t kDenseCapacity = std::size_t{1} << 25;

    LhvProblem(int observers, int settings) : layout_{observers, settings} {
        if (observers < 1 || settings < 1) throw std::invalid_argument("strategy_matrix needs n >= 1 and m >= 1");
        if (observers * settings > kMaxStrategyBits) {
            throw CapacityExceeded("strategy_matrix: m*n = " + std::to_string(observers * settings) + " exceeds 24");
        }
        columns_ = std::size_t{1} << (observers * settings);
        const std::size_t local = static_cast<std::size_t>(settings) + 1;
        const std::size_t reduced = detail::checked_power(local, observers);
        reduced_rows_.reserve(reduced);
        for (std::size_t idx = 0; idx < reduced; ++idx) {
            std::size_t rest = idx;
            std::size_t tuple = 0;
            std::size_t outcome = 0;
            std::vector<std::size_t> digits(static_cast<std::size_t>(observers));
            for (int i = observers - 1; i >= 0; --i) {
                digits[static_cast<std::size_t>(i)] = rest % local;
                rest /= local;
            }
            for (int i = 0; i < observers; ++i) {
                const auto [k, l] = local_row(digits[static_cast<std::size_t>(i)]);
                tuple = tuple * static_cast<std::size_t>(settings) + static_cast<std::size_t>(k);
                outcome = (outcome << 1U) | static_cast<std::size_t>(l);
            }
            reduced_rows_.push_back(layout_.row(tuple, outcome));
        }
        if (reduced * (columns_ + reduced + 1) <= kDenseCapacity) {
            reduced_matrix_.assign(reduced * columns_, 0.0);
            for (std::size_t r = 0; r < reduced; ++r) {
                for (std::size_t s = 0; s < columns_; ++s) reduced_matrix_[r * columns_ + s] = entry(reduced_rows_[r], s) ? 1.0 : 0.0;
            }
        }
    }

    [[nodiscard]] int observers() const noexcept { return layout_.observers; }
    [[nodiscard]] int settings() const noexcept { return layout_.settings; }
    [[nodiscard]] const BehaviorLayout &layout() const noexcept { return layout_; }
    [[nodiscard]] std::size_t rows() const { return layout_.rows(); }
    [[nodiscard]] std::size_t columns() const noexcept { return columns_; }

    /// Outcome strategy `s` assigns to observer i at setting k (0-based).
    [[nodiscard]] int strategy_outcome(std::size_t s, int observer, int setting) const {
        return static_cast<int>((s >> (observer * layout_.settings + setting)) & 1U);
    }

    [[nodiscard]] bool entry(std::size_t row, std::size_t column) const {
        const std::size_t tuple = row / layout_.outcome_tuples();
        const std::size_t outcome = row % layout_.outcome_tuples();
        for (int i = 0; i < layout_.observers; ++i) {
            if (strategy_outcome(column, i, layout_.setting_of(tuple, i)) != layout_.outcome_of(outcome, i)) return false;
        }
        return true;
    }

    /// The row that strategy `s` marks within setting tuple `tuple`.
    [[nodiscard]] std::size_t predicted_row(std::size_t s, std::size_t tuple) const {
        std::size_t outcome = 0;
        for (int i = 0; i < layout_.observers; ++i) {
            outcome = (outcome << 1U) | static_cast<std::size_t>(strategy_outcome(s, i, layout_.setting_of(tuple, i)));
        }
        return layout_.row(tuple, outcome);
    }

    [[nodiscard]] const std::vector<std::size_t> &reduced_rows() const noexcept { return reduced_rows_; }
    [[nodiscard]] bool dense_available() const noexcept { return !reduced_matrix_.empty(); }
    /// Row-major reduced_rows() x columns() 0/1 matrix; empty beyond kDenseCapacity.
    [[nodiscard]] const std::vector<double> &reduced_matrix() const noexcept { return reduced_matrix_; }

  private:
    // Local basis row j -> (setting, outcome).
    [[nodiscard]] static std::pair<int, int> local_row(std::size_t j) {
        if (j == 0) return {0, 0};
        if (j == 1) return {0, 1};
        return {static_cast<int>(j) - 1, 0};
    }

    BehaviorLayout layout_;
    std::size_t columns_ = 0;
    std::vector<std::size_t> reduced_rows_;
    std::vector<double> reduced_matrix_;
};

[[nodiscard]] inline LhvProblem strategy_matrix(int observers, int settings) { return LhvProblem(observers, settings); }

enum class Verdict { feasible, infeasible };

[[nodiscard]] inline const char *to_string(Verdict v) noexcept { return v == Verdict::feasible ? "feasible" : "infeasible"; }

struct FeasibilityResult {
    Verdict verdict = Verdict::feasible;
    /// Feasible: one weight per strategy column.
    std::vector<double> weights;
    /// Feasible: max |A w - b| over all behavior rows.
    double reconstruction_error = 0.0;
    /// Infeasible: one coefficient per behavior row. Normalized so that the
    /// uniform behavior scores 0 and the best deterministic strategy scores 2.
    std::vector<double> certificate;
    double classical_max = 0.0;
    double quantum_value = 0.0;
    /// Infeasible: largest v with v p + (1 - v) p_uniform still local.
    double critical_visibility = 1.0;
};

namespace detail {

inline std::vector<double> reduced_rhs(const LhvProblem &problem, const QuantumBehavior &behavior) {
    std::vector<double> b;
    b.reserve(problem.reduced_rows().size());
    for (std::size_t r : problem.reduced_rows()) b.push_back(behavior[r]);
    return b;
}

inline void check_solvable(const LhvProblem &problem, const QuantumBehavior &behavior) {
    if (problem.observers() != behavior.observers() || problem.settings() != behavior.settings()) {
        throw std::invalid_argument("lhv_feasible: behavior does not match the problem layout");
    }
    if (!problem.dense_available()) {
        throw CapacityExceeded("lhv_feasible: " + std::to_string(problem.reduced_rows().size()) + " x " +
                               std::to_string(problem.columns()) + " exceeds the dense solver capacity");
    }
}

// max over all rows of |A w - p|, with A applied column by column.
inline double reconstruction_error(const LhvProblem &problem, const QuantumBehavior &behavior, std::span<const double> w) {
    std::vector<double> acc(problem.rows(), 0.0);
    const std::size_t tuples = problem.layout().setting_tuples();
    for (std::size_t s = 0; s < w.size(); ++s) {
        if (w[s] == 0.0) continue;
        for (std::size_t t = 0; t < tuples; ++t) acc[problem.predicted_row(s, t)] += w[s];
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < acc.size(); ++r) worst = std::max(worst, std::abs(acc[r] - behavior[r]));
    return worst;
}

// Separating functional from the visibility LP
//   maximize v  s.t.  A w - v (p - u) = u,  w >= 0, v >= 0,
// with u the uniform behavior. Its optimal multipliers f satisfy f.a <= 0 for
// every strategy, f.u = -v*, f.p = 1 - v*.
inline void attach_certificate(const LhvProblem &problem, const QuantumBehavior &behavior, FeasibilityResult &result) {
    const auto &rows = problem.reduced_rows();
    const std::size_t r_count = rows.size();
    const std::size_t cols = problem.columns();
    const double uniform = 1.0 / static_cast<double>(problem.layout().outcome_tuples());
    const std::vector<double> b = reduced_rhs(problem, behavior);

    std::vector<double> a(r_count * (cols + 1));
    const auto &dense = problem.reduced_matrix();
    for (std::size_t r = 0; r < r_count; ++r) {
        std::copy_n(dense.begin() + static_cast<std::ptrdiff_t>(r * cols), cols, a.begin() + static_cast<std::ptrdiff_t>(r * (cols + 1)));
        a[r * (cols + 1) + cols] = -(b[r] - uniform);
    }
    const std::vector<double> rhs(r_count, uniform);
    TableauSimplex<double> lp(r_count, cols + 1, a, rhs);
    if (lp.phase_one() != SimplexStatus::optimal || lp.objective() > lhv_tolerance::kReconstruction) {
        throw NumericalFailure("certificate LP: the uniform behavior was not recovered");
    }
    std::vector<double> cost(cols + 1, 0.0);
    cost[cols] = -1.0;
    const SimplexStatus status = lp.phase_two(cost);
    if (status != SimplexStatus::optimal) throw NumericalFailure("certificate LP did not reach an optimum");
    const std::vector<double> f = lp.duals();
    result.critical_visibility = lp.primal()[cols];

    const std::size_t outcomes = problem.layout().outcome_tuples();
    double f_uniform = 0.0;
    std::vector<double> normalization(r_count, 0.0);
    for (std::size_t r = 0; r < r_count; ++r) {
        f_uniform += f[r] * uniform;
        // Rows of setting tuple 0 sum to one for every behavior and strategy.
        if (rows[r] < outcomes) normalization[r] = 1.0;
    }
    auto column_scores = [&](std::span<const double> g) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < cols; ++s) {
            double v = 0.0;
            for (std::size_t r = 0; r < r_count; ++r) v += g[r] * dense[r * cols + s];
            best = std::max(best, v);
        }
        return best;
    };
    const double spread = column_scores(f) - f_uniform;
    if (!(spread > 0.0)) throw NumericalFailure("certificate LP returned a degenerate functional");
    std::vector<double> g(r_count);
    for (std::size_t r = 0; r < r_count; ++r) g[r] = 2.0 / spread * (f[r] - f_uniform * normalization[r]);

    result.classical_max = column_scores(g);
    result.quantum_value = 0.0;
    for (std::size_t r = 0; r < r_count; ++r) result.quantum_value += g[r] * b[r];
    if (result.quantum_value - result.classical_max < lhv_tolerance::kCertificateGap) {
        throw NumericalFailure("infeasibility certificate gap below tolerance");
    }
    result.certificate.assign(problem.rows(), 0.0);
    for (std::size_t r = 0; r < r_count; ++r) result.certificate[rows[r]] = g[r];
}

}  // namespace detail

/// Phase-one simplex on the reduced rows. Feasible results carry strategy
/// weights; infeasible ones a violated Bell-type inequality.
/// Throws NumericalFailure when the solver cannot decide.
[[nodiscard]] inline FeasibilityResult lhv_feasible(const LhvProblem &problem, const QuantumBehavior &behavior) {
    detail::check_solvable(problem, behavior);
    const auto &rows = problem.reduced_rows();
    const std::vector<double> b = detail::reduced_rhs(problem, behavior);
    TableauSimplex<double> lp(rows.size(), problem.columns(), problem.reduced_matrix(), b);
    if (lp.phase_one() != SimplexStatus::optimal) throw NumericalFailure("phase-one simplex hit its pivot limit");

    FeasibilityResult result;
    std::vector<double> w = lp.primal();
    const double error = detail::reconstruction_error(problem, behavior, w);
    const double min_w = *std::min_element(w.begin(), w.end());
    double total = 0.0;
    for (double x : w) total += x;
    if (error <= lhv_tolerance::kReconstruction && min_w >= -lhv_tolerance::kNegativeWeight &&
        std::abs(total - 1.0) <= lhv_tolerance::kNormalization) {
        result.verdict = Verdict::feasible;
        result.weights = std::move(w);
        result.reconstruction_error = error;
        return result;
    }
    result.verdict = Verdict::infeasible;
    detail::attach_certificate(problem, behavior, result);
    return result;
}

[[nodiscard]] inline FeasibilityResult lhv_feasible(const QuantumBehavior &behavior) {
    return lhv_feasible(LhvProblem(behavior.observers(), behavior.settings()), behavior);
}

using Rational = boost::multiprecision::cpp_rational;

/// Exact rational phase one on the same reduced system. The behavior's doubles
/// are converted exactly; entries in [-1e-12, 0) are taken as 0.
[[nodiscard]] inline Verdict lhv_feasible_exact(const LhvProblem &problem, const QuantumBehavior &behavior) {
    detail::check_solvable(problem, behavior);
    const auto &rows = problem.reduced_rows();
    std::vector<Rational> a(problem.reduced_matrix().size());
    std::transform(problem.reduced_matrix().begin(), problem.reduced_matrix().end(), a.begin(),
                   [](double x) { return x != 0.0 ? Rational(1) : Rational(0); });
    std::vector<Rational> b;
    b.reserve(rows.size());
    for (std::size_t r : rows) b.emplace_back(std::max(0.0, behavior[r]));
    TableauSimplex<Rational> lp(rows.size(), problem.columns(), a, b);
    if (lp.phase_one() != SimplexStatus::optimal) throw NumericalFailure("exact phase one hit its pivot limit");
    return lp.objective() == 0 ? Verdict::feasible : Verdict::infeasible;
}

enum class TrialStatus { feasible, infeasible, failed };

[[nodiscard]] inline const char *to_string(TrialStatus s) noexcept {
    switch (s) {
        case TrialStatus::feasible: return "feasible";
        case TrialStatus::infeasible: return "infeasible";
        case TrialStatus::failed: return "failed";
    }
    return "failed";
}

struct TrialOutcome {
    std::size_t index = 0;
    TrialStatus status = TrialStatus::failed;
    /// Infeasible trials only.
    double critical_visibility = 1.0;
    std::string error;
    /// Kept for infeasible trials.
    std::vector<std::vector<Mat2>> settings;
};

struct ScanReport {
    std::size_t feasible = 0;
    std::size_t infeasible = 0;
    std::size_t failed = 0;
    std::vector<TrialOutcome> trials;
};

/// Random Haar settings per observer and trial; trial t draws from the stream
/// split_seed(seed, t), so results do not depend on thread scheduling.
[[nodiscard]] inline ScanReport random_setting_scan(const DensityMatrix &rho, int settings, std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("random_setting_scan needs at least one trial");
    const int n = rho.qubits().value();
    const LhvProblem problem(n, settings);
    if (!problem.dense_available()) throw CapacityExceeded("random_setting_scan: problem exceeds the dense solver capacity");
    ScanReport report;
    report.trials.resize(trials);
    parallel_for(trials, [&](std::size_t t) {
        TrialOutcome &out = report.trials[t];
        out.index = t;
        std::mt19937_64 rng(split_seed(seed, t));
        std::vector<std::vector<Mat2>> bases(static_cast<std::size_t>(n));
        for (auto &observer : bases) {
            for (int k = 0; k < settings; ++k) observer.push_back(haar_unitary(rng));
        }
        try {
            const ExperimentSpec spec(bases);
            const FeasibilityResult r = lhv_feasible(problem, quantum_behavior(rho, spec));
            if (r.verdict == Verdict::feasible) {
                out.status = TrialStatus::feasible;
            } else {
                out.status = TrialStatus::infeasible;
                out.critical_visibility = r.critical_visibility;
                out.settings = std::move(bases);
            }
        } catch (const NumericalFailure &e) {
            out.status = TrialStatus::failed;
            out.error = e.what();
        }
    });
    for (const auto &t : report.trials) {
        switch (t.status) {
            case TrialStatus::feasible: ++report.feasible; break;
            case TrialStatus::infeasible: ++report.infeasible; break;
            case TrialStatus::failed: ++report.failed; break;
        }
    }
    return report;
}

// CSV: header k_1,...,k_n,l_1,...,l_n,p; settings 1-based, outcomes 0/1.

inline void write_behavior_csv(std::ostream &out, const QuantumBehavior &behavior) {
    const int n = behavior.observers();
    for (int i = 1; i <= n; ++i) out << "k_" << i << ',';
    for (int i = 1; i <= n; ++i) out << "l_" << i << ',';
    out << "p\n";
    const BehaviorLayout &layout = behavior.layout();
    char buf[32];
    for (std::size_t s = 0; s < layout.setting_tuples(); ++s) {
        for (std::size_t o = 0; o < layout.outcome_tuples(); ++o) {
            for (int i = 0; i < n; ++i) out << layout.setting_of(s, i) + 1 << ',';
            for (int i = 0; i < n; ++i) out << layout.outcome_of(o, i) << ',';
            std::snprintf(buf, sizeof buf, "%.17g", behavior[layout.row(s, o)]);
            out << buf << '\n';
        }
    }
}

[[nodiscard]] inline QuantumBehavior read_behavior_csv(std::istream &in) {
    auto split = [](const std::string &line) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            if (!f.empty() && f.back() == '\r') f.pop_back();
            fields.push_back(f);
        }
        return fields;
    };
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("behavior csv: missing header");
    const auto header = split(line);
    if (header.size() < 3 || (header.size() - 1) % 2 != 0 || header.back() != "p") {
        throw std::invalid_argument("behavior csv: malformed header");
    }
    const int n = static_cast<int>((header.size() - 1) / 2);
    for (int i = 0; i < n; ++i) {
        if (header[static_cast<std::size_t>(i)] != "k_" + std::to_string(i + 1) ||
            header[static_cast<std::size_t>(n + i)] != "l_" + std::to_string(i + 1)) {
            throw std::invalid_argument("behavior csv: malformed header");
        }
    }
    struct Entry {
        std::vector<int> k;
        std::vector<int> l;
        double p;
    };
    std::vector<Entry> entries;
    int m = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split(line);
        if (fields.size() != header.size()) throw std::invalid_argument("behavior csv: wrong field count");
        Entry e;
        for (int i = 0; i < 2 * n; ++i) {
            int v = 0;
            const std::string &f = fields[static_cast<std::size_t>(i)];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size()) throw std::invalid_argument("behavior csv: bad index '" + f + "'");
            (i < n ? e.k : e.l).push_back(v);
        }
        try {
            std::size_t used = 0;
            e.p = std::stod(fields.back(), &used);
            if (used != fields.back().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception &) {
            throw std::invalid_argument("behavior csv: bad probability '" + fields.back() + "'");
        }
        for (int k : e.k) {
            if (k < 1) throw std::invalid_argument("behavior csv: settings are 1-based");
            m = std::max(m, k);
        }
        for (int l : e.l) {
            if (l != 0 && l != 1) throw std::invalid_argument("behavior csv: outcomes must be 0 or 1");
        }
        entries.push_back(std::move(e));
    }
    if (m == 0) throw std::invalid_argument("behavior csv: no data rows");
    const BehaviorLayout layout{n, m};
    std::vector<double> p(layout.rows(), std::numeric_limits<double>::quiet_NaN());
    for (const auto &e : entries) {
        std::size_t s = 0;
        for (int k : e.k) s = s * static_cast<std::size_t>(m) + static_cast<std::size_t>(k - 1);
        const std::size_t row = layout.row(s, basis_index(e.l));
        if (!std::isnan(p[row])) throw std::invalid_argument("behavior csv: duplicate row");
        p[row] = e.p;
    }
    if (std::any_of(p.begin(), p.end(), [](double v) { return std::isnan(v); })) {
        throw std::invalid_argument("behavior csv: missing rows");
    }
    return QuantumBehavior(n, m, std::move(p));
}

}  // namespace boundbell
