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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <vector>

#include "boundbell/lhv_lp.hpp"

namespace boundbell {
namespace {

ExperimentSpec random_spec(int n, int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Mat2>> bases(static_cast<std::size_t>(n));
    for (auto &o : bases) {
        for (int k = 0; k < m; ++k) o.push_back(haar_unitary(rng));
    }
    return ExperimentSpec(bases);
}

ExperimentSpec chsh_spec() {
    return experiment_from_phases(std::vector<std::vector<double>>{{0.0, kPi / 2.0}, {-kPi / 4.0, kPi / 4.0}});
}

// Computed row by row from entry(), independent of the solver's bookkeeping.
double full_residual(const LhvProblem &p, const QuantumBehavior &b, const std::vector<double> &w) {
    double worst = 0.0;
    for (std::size_t r = 0; r < p.rows(); ++r) {
        double v = 0.0;
        for (std::size_t s = 0; s < p.columns(); ++s) {
            if (p.entry(r, s)) v += w[s];
        }
        worst = std::max(worst, std::abs(v - b[r]));
    }
    return worst;
}

double classical_max(const LhvProblem &p, const std::vector<double> &g) {
    double best = -1e300;
    for (std::size_t s = 0; s < p.columns(); ++s) {
        double v = 0.0;
        for (std::size_t r = 0; r < p.rows(); ++r) {
            if (p.entry(r, s)) v += g[r];
        }
        best = std::max(best, v);
    }
    return best;
}

double dot(const std::vector<double> &g, const QuantumBehavior &b) {
    double v = 0.0;
    for (std::size_t r = 0; r < b.rows(); ++r) v += g[r] * b[r];
    return v;
}

void expect_sound(const LhvProblem &p, const QuantumBehavior &b, const FeasibilityResult &r) {
    if (r.verdict == Verdict::feasible) {
        EXPECT_LE(full_residual(p, b, r.weights), 1e-8);
        for (double w : r.weights) EXPECT_GE(w, -1e-10);
    } else {
        const double cmax = classical_max(p, r.certificate);
        EXPECT_NEAR(cmax, r.classical_max, 1e-9);
        EXPECT_NEAR(dot(r.certificate, b), r.quantum_value, 1e-9);
        EXPECT_GE(dot(r.certificate, b) - cmax, 1e-8);
    }
}

TEST(StrategyMatrix, Shape) {
    const LhvProblem p = strategy_matrix(2, 3);
    EXPECT_EQ(p.rows(), 9U * 4U);
    EXPECT_EQ(p.columns(), 64U);
    EXPECT_EQ(p.reduced_rows().size(), 16U);
    for (std::size_t s = 0; s < p.columns(); ++s) {
        int ones = 0;
        for (std::size_t r = 0; r < p.rows(); ++r) ones += p.entry(r, s) ? 1 : 0;
        EXPECT_EQ(ones, 9);
    }
    // Row layout: setting tuple (k_1, k_2) = (2, 1) 0-based, outcomes (1, 0).
    const std::size_t row = (2 * 3 + 1) * 4 + 2;
    for (std::size_t s = 0; s < p.columns(); ++s) {
        const bool marks = ((s >> (0 * 3 + 2)) & 1U) == 1 && ((s >> (1 * 3 + 1)) & 1U) == 0;
        EXPECT_EQ(p.entry(row, s), marks);
    }
}

TEST(StrategyMatrix, ReducedRowsSpanAllRows) {
    for (auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const LhvProblem p = strategy_matrix(n, m);
        Eigen::MatrixXd full(static_cast<Eigen::Index>(p.rows()), static_cast<Eigen::Index>(p.columns()));
        for (std::size_t r = 0; r < p.rows(); ++r)
            for (std::size_t s = 0; s < p.columns(); ++s) full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = p.entry(r, s);
        Eigen::MatrixXd reduced(static_cast<Eigen::Index>(p.reduced_rows().size()), full.cols());
        for (std::size_t i = 0; i < p.reduced_rows().size(); ++i)
            reduced.row(static_cast<Eigen::Index>(i)) = full.row(static_cast<Eigen::Index>(p.reduced_rows()[i]));
        const auto rank_full = Eigen::FullPivLU<Eigen::MatrixXd>(full).rank();
        const auto rank_reduced = Eigen::FullPivLU<Eigen::MatrixXd>(reduced).rank();
        EXPECT_EQ(rank_full, static_cast<Eigen::Index>(std::pow(m + 1, n)));
        EXPECT_EQ(rank_reduced, rank_full);
    }
}

TEST(StrategyMatrix, Caps) {
    EXPECT_THROW(strategy_matrix(5, 5), CapacityExceeded);
    EXPECT_THROW(strategy_matrix(0, 2), std::invalid_argument);
    const LhvProblem big = strategy_matrix(7, 3);
    EXPECT_FALSE(big.dense_available());
    EXPECT_TRUE(strategy_matrix(4, 3).dense_available());
}

TEST(Behavior, MatchesCorrelation) {
    const QubitCount n(3);
    const SettingPhaseTable table = SettingPhaseTable::standard(n);
    const DensityMatrix rho = dur_state(n, 0.3);
    const QuantumBehavior b = quantum_behavior(rho, experiment_from_phases(table));
    for (int k0 = 1; k0 <= 3; ++k0) {
        const int k[] = {k0, 2, 3};
        double e = 0.0;
        for (int o = 0; o < 8; ++o) {
            const int l[] = {(o >> 2) & 1, (o >> 1) & 1, o & 1};
            e += outcome_value(l[0]) * outcome_value(l[1]) * outcome_value(l[2]) * b.at(k, l);
        }
        EXPECT_NEAR(e, correlation(rho, k, table), 1e-12);
    }
}

TEST(Behavior, Validation) {
    std::vector<double> p(16, 0.25);
    EXPECT_NO_THROW(QuantumBehavior(2, 2, p));
    auto bad = p;
    bad[0] = 0.3;
    EXPECT_THROW(QuantumBehavior(2, 2, bad), std::invalid_argument);
    // Normalized but signalling: observer 2's marginal depends on observer 1's setting.
    std::vector<double> sig(16, 0.0);
    for (int s = 0; s < 4; ++s) {
        const bool a1 = (s >> 1) == 1;
        sig[s * 4 + (a1 ? 0 : 1)] = 1.0;
    }
    EXPECT_THROW(QuantumBehavior(2, 2, sig), std::invalid_argument);
    auto neg = p;
    neg[0] = -0.1;
    neg[1] = 0.6;
    EXPECT_THROW(QuantumBehavior(2, 2, neg), std::invalid_argument);
    EXPECT_THROW(QuantumBehavior(2, 2, std::vector<double>(15, 0.25)), std::invalid_argument);
}

TEST(Behavior, CsvRoundTrip) {
    const QuantumBehavior b = quantum_behavior(dur_state(QubitCount(3), 0.7), random_spec(3, 2, 4));
    std::stringstream ss;
    write_behavior_csv(ss, b);
    const std::string text = ss.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "k_1,k_2,k_3,l_1,l_2,l_3,p");
    const QuantumBehavior back = read_behavior_csv(ss);
    EXPECT_EQ(back.probabilities(), b.probabilities());
    EXPECT_EQ(back.settings(), 2);

    std::stringstream missing("k_1,k_2,l_1,l_2,p\n1,1,0,0,1\n");
    EXPECT_THROW((void)read_behavior_csv(missing), std::invalid_argument);
    std::stringstream header("k_1,l_2,p\n");
    EXPECT_THROW((void)read_behavior_csv(header), std::invalid_argument);
}

TEST(Haar, UnitaryAndUniform) {
    std::mt19937_64 rng(17);
    double mean = 0.0;
    const int samples = 20000;
    for (int i = 0; i < samples; ++i) {
        const Mat2 u = haar_unitary(rng);
        ASSERT_LT((u * u.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-14);
        mean += std::norm(u(0, 0));
    }
    // |U_00|^2 is uniform on [0, 1] under the Haar measure.
    EXPECT_NEAR(mean / samples, 0.5, 0.01);
}

TEST(LhvFeasible, ChshIsInfeasibleWithTsirelsonCertificate) {
    const QuantumBehavior b = quantum_behavior(DensityMatrix::projector(ghz(QubitCount(2), 0.0)), chsh_spec());
    const LhvProblem p = strategy_matrix(2, 2);
    const FeasibilityResult r = lhv_feasible(p, b);
    ASSERT_EQ(r.verdict, Verdict::infeasible);
    EXPECT_NEAR(r.classical_max, 2.0, 1e-9);
    EXPECT_NEAR(r.quantum_value, 2.0 * std::sqrt(2.0), 1e-6);
    EXPECT_NEAR(r.critical_visibility, 1.0 / std::sqrt(2.0), 1e-9);
    expect_sound(p, b, r);
    EXPECT_EQ(lhv_feasible_exact(p, b), Verdict::infeasible);
}

TEST(LhvFeasible, ProductStatesAreLocal) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
        for (int trial = 0; trial < 3; ++trial) {
            ProductProjectorSpec spec;
            for (int k = 0; k < n; ++k) spec.qubits.push_back({u(rng) / 2.0, 2.0 * u(rng)});
            const QuantumBehavior b = quantum_behavior(product_projector(spec), random_spec(n, m, rng()));
            const LhvProblem p = strategy_matrix(n, m);
            const FeasibilityResult r = lhv_feasible(p, b);
            ASSERT_EQ(r.verdict, Verdict::feasible);
            EXPECT_LE(r.reconstruction_error, 1e-8);
            expect_sound(p, b, r);
        }
    }
}

TEST(LhvFeasible, MaximallyMixedIsLocal) {
    const QuantumBehavior b = quantum_behavior(DensityMatrix::maximally_mixed(QubitCount(3)), random_spec(3, 3, 8));
    EXPECT_EQ(lhv_feasible(b).verdict, Verdict::feasible);
}

TEST(LhvFeasible, ExactResolveAgrees) {
    int infeasible = 0;
    for (auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const LhvProblem p = strategy_matrix(n, m);
        const QubitCount q(n);
        const std::vector<DensityMatrix> states = {
            DensityMatrix::projector(ghz(q, 0.0)), mix_with_noise(DensityMatrix::projector(ghz(q, 0.5)), 0.2),
            dur_state(q, 0.0), DensityMatrix::maximally_mixed(q)};
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::uint64_t seed = 0; seed < 4; ++seed) {
                const QuantumBehavior b = quantum_behavior(states[i], random_spec(n, m, 100 * i + seed));
                const FeasibilityResult r = lhv_feasible(p, b);
                expect_sound(p, b, r);
                EXPECT_EQ(lhv_feasible_exact(p, b), r.verdict) << "n=" << n << " m=" << m << " state=" << i;
                infeasible += r.verdict == Verdict::infeasible;
            }
        }
    }
    EXPECT_GT(infeasible, 0);
}

TEST(LhvFeasible, InfeasibleWheneverThreeSettingInequalityIsViolated) {
    for (int n : {3, 4}) {
        const QubitCount q(n);
        const SettingPhaseTable table = SettingPhaseTable::standard(q);
        const CoefficientTensor c(table);
        const LhvProblem p = strategy_matrix(n, 3);
        for (double v : {0.1, 0.3, 0.45}) {
            const DensityMatrix rho = mix_with_noise(DensityMatrix::projector(ghz(q, 0.0)), v);
            const QuantumBehavior b = quantum_behavior(rho, experiment_from_phases(table));
            // Bell value from the behavior itself.
            double value = 0.0;
            for (std::size_t s = 0; s < b.layout().setting_tuples(); ++s) {
                double e = 0.0;
                for (std::size_t o = 0; o < b.layout().outcome_tuples(); ++o) {
                    int sign = 1;
                    for (int i = 0; i < n; ++i) sign *= outcome_value(b.layout().outcome_of(o, i));
                    e += sign * b[b.layout().row(s, o)];
                }
                value += c[s] * e;
            }
            const FeasibilityResult r = lhv_feasible(p, b);
            expect_sound(p, b, r);
            if (std::abs(value) > three_setting_bound(q) + 1e-9) {
                EXPECT_EQ(r.verdict, Verdict::infeasible) << "n=" << n << " v=" << v;
            }
        }
    }
}

TEST(LhvFeasible, CapacityIsReported) {
    const QubitCount q(7);
    const QuantumBehavior b = quantum_behavior(mix_with_noise(dur_state(q, 0.0), 0.05),
                                               experiment_from_phases(SettingPhaseTable::standard(q)));
    EXPECT_THROW((void)lhv_feasible(b), CapacityExceeded);
}

TEST(LhvFeasible, ObserverRelabelingKeepsVerdict) {
    const int n = 3;
    const int m = 2;
    const QubitCount q(n);
    const DensityMatrix rho = mix_with_noise(DensityMatrix::projector(ghz(q, 0.2)), 0.25);
    const LhvProblem p = strategy_matrix(n, m);
    const int perm[] = {2, 0, 1};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const QuantumBehavior b = quantum_behavior(rho, random_spec(n, m, 500 + seed));
        const BehaviorLayout &L = b.layout();
        std::vector<double> permuted(b.rows());
        for (std::size_t s = 0; s < L.setting_tuples(); ++s) {
            for (std::size_t o = 0; o < L.outcome_tuples(); ++o) {
                std::size_t s2 = 0, o2 = 0;
                for (int i = 0; i < n; ++i) {
                    s2 = s2 * m + static_cast<std::size_t>(L.setting_of(s, perm[i]));
                    o2 = (o2 << 1U) | static_cast<std::size_t>(L.outcome_of(o, perm[i]));
                }
                permuted[L.row(s2, o2)] = b[L.row(s, o)];
            }
        }
        const QuantumBehavior b2(n, m, permuted);
        EXPECT_EQ(lhv_feasible(p, b).verdict, lhv_feasible(p, b2).verdict);
    }
}

TEST(Scan, GhzPairFindsViolations) {
    const ScanReport r = random_setting_scan(DensityMatrix::projector(ghz(QubitCount(2), 0.0)), 2, 200, 42);
    EXPECT_EQ(r.feasible + r.infeasible + r.failed, 200U);
    EXPECT_GT(r.infeasible, 0U);
    EXPECT_EQ(r.failed, 0U);
    for (const auto &t : r.trials) {
        if (t.status == TrialStatus::infeasible) {
            EXPECT_EQ(t.settings.size(), 2U);
            EXPECT_LT(t.critical_visibility, 1.0);
        }
    }
}

TEST(Scan, MixedStateIsAlwaysLocal) {
    const ScanReport r = random_setting_scan(DensityMatrix::maximally_mixed(QubitCount(3)), 2, 10, 1);
    EXPECT_EQ(r.feasible, 10U);
}

TEST(Scan, IndependentOfThreadCount) {
    const DensityMatrix rho = DensityMatrix::projector(ghz(QubitCount(2), 0.3));
    ::setenv("BOUNDBELL_THREADS", "1", 1);
    const ScanReport a = random_setting_scan(rho, 2, 40, 9);
    ::setenv("BOUNDBELL_THREADS", "3", 1);
    const ScanReport b = random_setting_scan(rho, 2, 40, 9);
    ::unsetenv("BOUNDBELL_THREADS");
    ASSERT_EQ(a.trials.size(), b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        EXPECT_EQ(a.trials[i].status, b.trials[i].status);
        EXPECT_EQ(a.trials[i].critical_visibility, b.trials[i].critical_visibility);
    }
    EXPECT_THROW((void)random_setting_scan(rho, 2, 0, 9), std::invalid_argument);
}

}  // namespace
}  // namespace boundbell
