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
#include <sstream>

#include "boundbell/commands.hpp"

namespace boundbell::cli {
namespace {

double number(const Cell &c) { return std::get<double>(c); }

TEST(Violation, SevenQubits) {
    const Result r = cmd_violation(7, 0.0);
    const auto &row = r.table.rows.at(0);
    EXPECT_NEAR(number(row[2]), -136.6875, 1e-9);
    EXPECT_NEAR(number(row[3]), 110.8513, 5e-5);
    // 136.6875 / 110.8513 = 1.23307.
    EXPECT_NEAR(number(row[4]), 2187.0 / (1024.0 * std::sqrt(3.0)), 1e-12);
    EXPECT_NEAR(number(row[4]), 1.2331, 5e-5);
    EXPECT_EQ(std::get<std::string>(row[5]), "VIOLATED");
    EXPECT_NE(r.human.find("-136.68750"), std::string::npos);
}

TEST(Violation, BelowSeven) {
    const Result six = cmd_violation(6, 0.4);
    EXPECT_NEAR(number(six.table.rows[0][4]), std::pow(3.0, 6) / (64.0 * 7.0 * std::sqrt(3.0)), 1e-12);
    EXPECT_EQ(std::get<std::string>(six.table.rows[0][5]), "NOT VIOLATED");
    const Result four = cmd_violation(4, 0.0);
    EXPECT_NEAR(number(four.table.rows[0][2]), 8.1, 1e-12);
    EXPECT_NEAR(number(four.table.rows[0][3]), 13.8564, 5e-5);
    EXPECT_THROW((void)cmd_violation(1, 0.0), UsageError);
    EXPECT_THROW((void)cmd_violation(11, 0.0), UsageError);
}

TEST(Thresholds, SmallRange) {
    const Result r = cmd_thresholds(4, 5);
    ASSERT_EQ(r.table.columns, (std::vector<std::string>{"N", "v_three", "v_mk"}));
    ASSERT_EQ(r.table.rows.size(), 2U);
    EXPECT_EQ(number(r.table.rows[0][1]), 0.0);
    EXPECT_EQ(number(r.table.rows[0][2]), 0.0);
    EXPECT_THROW((void)cmd_thresholds(3, 5), UsageError);
    EXPECT_THROW((void)cmd_thresholds(6, 5), UsageError);
    EXPECT_THROW((void)cmd_thresholds(4, 13), UsageError);
}

TEST(Thresholds, BeyondMkRangeLeavesCellEmpty) {
    const Result r = cmd_thresholds(11, 12);
    EXPECT_TRUE(std::holds_alternative<std::monostate>(r.table.rows[0][2]));
    EXPECT_GT(number(r.table.rows[0][1]), 0.39178);
    std::stringstream ss;
    write_csv(ss, r.table);
    EXPECT_NE(ss.str().find("11,"), std::string::npos);
    EXPECT_TRUE(to_json(r.table)[0]["v_mk"].is_null());
}

TEST(Witness, Examples) {
    const Result one = cmd_witness(4, 1.0, 0.0, 1000, 1);
    EXPECT_NEAR(number(one.table.rows[0][3]), -0.6, 1e-12);
    EXPECT_NEAR(number(one.table.rows[0][5]), 0.0, 1e-6);
    const Result half = cmd_witness(4, 0.5, 0.0, 1000, 1);
    EXPECT_NEAR(number(half.table.rows[0][3]), 0.2, 1e-12);
    EXPECT_EQ(std::get<std::string>(half.table.rows[0][4]), "NOT DETECTED");
    const Result eight = cmd_witness(8, 1.0, 0.0, 200, 1);
    EXPECT_NEAR(number(eight.table.rows[0][3]), (1.0 - 128.0 + 8.0) / 9.0, 1e-12);
    EXPECT_THROW((void)cmd_witness(4, 1.5, 0.0, 10, 1), UsageError);
    EXPECT_THROW((void)cmd_witness(1, 1.0, 0.0, 10, 1), UsageError);
}

TEST(BoundEnum, Examples) {
    EXPECT_NEAR(number(cmd_bound_enum(2).table.rows[0][1]), 2.0 * std::sqrt(3.0), 1e-9);
    const Result three = cmd_bound_enum(3);
    EXPECT_NEAR(number(three.table.rows[0][1]), number(three.table.rows[0][2]), 1e-9);
    EXPECT_NE(three.human.find("6.92820"), std::string::npos);
    const Result five = cmd_bound_enum(5);
    EXPECT_NEAR(number(five.table.rows[0][1]), 27.71281, 5e-6);
    EXPECT_THROW((void)cmd_bound_enum(8), UsageError);
}

TEST(LpScan, ValidationAndSummary) {
    LpScanConfig c;
    c.trials = 0;
    EXPECT_THROW((void)cmd_lp_scan(c), UsageError);
    c.trials = 5;
    c.n = 7;
    EXPECT_THROW((void)cmd_lp_scan(c), UsageError);
    c.n = 2;
    c.settings = 2;
    c.state = ScanState::ghz;
    c.trials = 50;
    const Result r = cmd_lp_scan(c);
    EXPECT_EQ(r.table.rows.size(), 50U);
    EXPECT_EQ(r.human.rfind("feasible=", 0), 0U);
    EXPECT_EQ(r.status, ExitCode::ok);
}

TEST(Tables, CsvRoundTripIsExact) {
    Table t;
    t.columns = {"a", "b", "c", "d"};
    t.rows.push_back({std::int64_t{7}, 0.1 + 0.2, std::string("VIOLATED"), std::monostate{}});
    t.rows.push_back({std::int64_t{-3}, 0.0, std::string("x"), 1e-300});
    t.rows.push_back({std::int64_t{0}, -2.0, std::string("NOT VIOLATED"), 123456789.0});
    std::stringstream ss;
    write_csv(ss, t);
    EXPECT_EQ(read_csv(ss), t);
}

TEST(Tables, CommandTablesRoundTrip) {
    for (const Result &r : {cmd_violation(7, 0.3), cmd_thresholds(6, 8), cmd_bound_enum(3)}) {
        std::stringstream ss;
        write_csv(ss, r.table);
        EXPECT_EQ(read_csv(ss), r.table);
        const auto j = to_json(r.table);
        ASSERT_EQ(j.size(), r.table.rows.size());
        for (const auto &col : r.table.columns) EXPECT_TRUE(j[0].contains(col));
    }
}

}  // namespace
}  // namespace boundbell::cli
