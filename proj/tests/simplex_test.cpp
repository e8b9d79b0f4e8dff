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

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "boundbell/simplex.hpp"

namespace boundbell {
namespace {

using Rational = boost::multiprecision::cpp_rational;

TEST(Simplex, SmallOptimum) {
    // min -x - 2y  s.t.  x + y + s1 = 4,  x + 3y + s2 = 6.  Optimum at (3, 1): -5.
    const std::vector<double> a = {1, 1, 1, 0, 1, 3, 0, 1};
    const std::vector<double> b = {4, 6};
    TableauSimplex<double> lp(2, 4, a, b);
    ASSERT_EQ(lp.phase_one(), SimplexStatus::optimal);
    EXPECT_NEAR(lp.objective(), 0.0, 1e-12);
    const std::vector<double> c = {-1, -2, 0, 0};
    ASSERT_EQ(lp.phase_two(c), SimplexStatus::optimal);
    EXPECT_NEAR(lp.objective(), -5.0, 1e-12);
    const auto x = lp.primal();
    EXPECT_NEAR(x[0], 3.0, 1e-12);
    EXPECT_NEAR(x[1], 1.0, 1e-12);
    // Dual feasibility and strong duality.
    const auto y = lp.duals();
    EXPECT_NEAR(y[0] * b[0] + y[1] * b[1], -5.0, 1e-12);
    for (int j = 0; j < 4; ++j) EXPECT_GE(c[j] - (y[0] * a[j] + y[1] * a[4 + j]), -1e-12);
}

TEST(Simplex, NegativeRightHandSide) {
    // -x - y = -1 with x, y >= 0.
    const std::vector<double> a = {-1, -1};
    const std::vector<double> b = {-1};
    TableauSimplex<double> lp(1, 2, a, b);
    ASSERT_EQ(lp.phase_one(), SimplexStatus::optimal);
    EXPECT_NEAR(lp.objective(), 0.0, 1e-12);
    const auto x = lp.primal();
    EXPECT_NEAR(x[0] + x[1], 1.0, 1e-12);
    const std::vector<double> c = {1, 2};
    ASSERT_EQ(lp.phase_two(c), SimplexStatus::optimal);
    EXPECT_NEAR(lp.objective(), 1.0, 1e-12);
    EXPECT_NEAR(lp.duals()[0] * b[0], 1.0, 1e-12);
}

TEST(Simplex, InfeasibleSystem) {
    // x + y = 1 and x + y = 2.
    const std::vector<double> a = {1, 1, 1, 1};
    const std::vector<double> b = {1, 2};
    TableauSimplex<double> lp(2, 2, a, b);
    ASSERT_EQ(lp.phase_one(), SimplexStatus::optimal);
    EXPECT_NEAR(lp.objective(), 1.0, 1e-12);
    // Phase-one multipliers: y.A_j <= 0 for every column, y.b = residual.
    const auto y = lp.duals();
    EXPECT_NEAR(y[0] * 1 + y[1] * 2, 1.0, 1e-12);
    EXPECT_LE(y[0] + y[1], 1e-12);
}

TEST(Simplex, RedundantRowsAndUnbounded) {
    const std::vector<double> a = {1, -1, 2, -2};
    const std::vector<double> b = {0, 0};
    TableauSimplex<double> lp(2, 2, a, b);
    ASSERT_EQ(lp.phase_one(), SimplexStatus::optimal);
    const std::vector<double> c = {-1, 0};
    EXPECT_EQ(lp.phase_two(c), SimplexStatus::unbounded);
}

TEST(Simplex, BealeCyclingExampleTerminates) {
    // Beale's example cycles under the textbook Dantzig rule without anti-cycling.
    const std::vector<Rational> a = {
        Rational(1, 4), -8, -1, 9,  1, 0, 0,  //
        Rational(1, 2), -12, Rational(-1, 2), 3, 0, 1, 0,  //
        0, 0, 1, 0, 0, 0, 1};
    const std::vector<Rational> b = {0, 0, 1};
    const std::vector<Rational> c = {Rational(-3, 4), 20, Rational(-1, 2), 6, 0, 0, 0};
    TableauSimplex<Rational> lp(3, 7, a, b);
    ASSERT_EQ(lp.phase_one(), SimplexStatus::optimal);
    EXPECT_EQ(lp.objective(), 0);
    ASSERT_EQ(lp.phase_two(c), SimplexStatus::optimal);
    EXPECT_EQ(lp.objective(), Rational(-5, 4));

    std::vector<double> ad, bd = {0, 0, 1}, cd;
    for (const auto &v : a) ad.push_back(static_cast<double>(v));
    for (const auto &v : c) cd.push_back(static_cast<double>(v));
    TableauSimplex<double> lpd(3, 7, ad, bd);
    ASSERT_EQ(lpd.phase_one(), SimplexStatus::optimal);
    ASSERT_EQ(lpd.phase_two(cd), SimplexStatus::optimal);
    EXPECT_NEAR(lpd.objective(), -1.25, 1e-12);
}

TEST(Simplex, ExactFeasibilityIsExact) {
    // x + y = 1/3, x - y = 1/3: feasible only with y = 0 exactly.
    const std::vector<Rational> a = {1, 1, 1, -1};
    const std::vector<Rational> b = {Rational(1, 3), Rational(1, 3)};
    TableauSimplex<Rational> lp(2, 2, a, b);
    ASSERT_EQ(lp.phase_one(), SimplexStatus::optimal);
    EXPECT_EQ(lp.objective(), 0);
    EXPECT_EQ(lp.primal()[0], Rational(1, 3));
    EXPECT_EQ(lp.primal()[1], 0);
}

TEST(Simplex, IterationLimit) {
    const std::vector<double> a = {1, 1, 1, 3};
    const std::vector<double> b = {4, 6};
    SimplexOptions opts;
    opts.max_pivots = 1;
    TableauSimplex<double> lp(2, 2, a, b, opts);
    EXPECT_EQ(lp.phase_one(), SimplexStatus::iteration_limit);
}

TEST(Simplex, RejectsBadShapes) {
    const std::vector<double> a = {1, 1};
    const std::vector<double> b = {1, 1};
    EXPECT_THROW(TableauSimplex<double>(2, 2, a, b), std::invalid_argument);
}

}  // namespace
}  // namespace boundbell
