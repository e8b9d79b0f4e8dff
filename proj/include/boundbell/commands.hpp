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

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "boundbell/bell_operators.hpp"
#include "boundbell/lhv_lp.hpp"
#include "boundbell/mermin_klyshko.hpp"
#include "boundbell/qubit_algebra.hpp"
#include "boundbell/witnesses.hpp"

// Command implementations behind the boundbell executable. Each command
// returns a Table (what gets written as CSV or JSON) plus a human report.
namespace boundbell::cli {

/// Bad flags or flag combinations; maps to exit status 1.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class ExitCode : int { ok = 0, usage = 1, numerical = 2 };

enum class Format { human, csv, json };

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    friend bool operator==(const Table &, const Table &) = default;
};

/// Lossless: %.17g, with ".0" appended when the text would read as an integer.
[[nodiscard]] inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_not_of("-0123456789") == std::string::npos) s += ".0";
    return s;
}

[[nodiscard]] inline std::string fixed5(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    std::string s(buf);
    if (s == "-0.00000") s.erase(0, 1);
    return s;
}

namespace detail {

inline std::string cell_text(const Cell &c) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else {
                return v;
            }
        },
        c);
}

inline Cell parse_cell(const std::string &text) {
    if (text.empty()) return std::monostate{};
    std::int64_t i = 0;
    const char *end = text.data() + text.size();
    if (auto [p, ec] = std::from_chars(text.data(), end, i); ec == std::errc() && p == end) return i;
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(text.data(), end, d); ec == std::errc() && p == end) return d;
    return text;
}

}  // namespace detail

// Cells never contain commas or quotes, so no quoting is done.
inline void write_csv(std::ostream &out, const Table &t) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
    out << '\n';
    for (const auto &row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << detail::cell_text(row[j]);
        out << '\n';
    }
}

[[nodiscard]] inline Table read_csv(std::istream &in) {
    auto split = [](std::string line) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return fields;
    };
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: missing header");
    t.columns = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != t.columns.size()) throw std::invalid_argument("csv: wrong field count");
        auto &row = t.rows.emplace_back();
        for (const auto &f : fields) row.push_back(detail::parse_cell(f));
    }
    return t;
}

/// Array of objects, keys in column order.
[[nodiscard]] inline nlohmann::ordered_json to_json(const Table &t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::visit(
                [&](const auto &v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) {
                        obj[t.columns[j]] = nullptr;
                    } else {
                        obj[t.columns[j]] = v;
                    }
                },
                row[j]);
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_table(std::ostream &out, const Table &t, Format f) {
    if (f == Format::json) {
        out << to_json(t).dump(2) << '\n';
    } else {
        write_csv(out, t);
    }
}

struct Result {
    Table table;
    std::string human;
    ExitCode status = ExitCode::ok;
};

inline void require(bool ok, const std::string &message) {
    if (!ok) throw UsageError(message);
}

// violation -----------------------------------------------------------------

[[nodiscard]] inline Result cmd_violation(int n, double alpha) {
    require(n >= 2 && n <= 10, "violation: --n must lie in [2, 10]");
    require(std::isfinite(alpha), "violation: --alpha must be finite");
    const QubitCount q(n);
    const double bound = three_setting_bound(q);
    const BellOperator b(corner_matrix(q, Complex(three_setting_corner(q))), bound);
    const double value = expectation(rotate_operator(b, alpha, q).matrix(), dur_state(q, alpha));
    const double ratio = std::abs(value) / bound;
    const bool violated = ratio > 1.0;
    const std::string verdict = violated ? "VIOLATED" : "NOT VIOLATED";

    Result r;
    r.table.columns = {"N", "alpha", "value", "bound", "ratio", "verdict"};
    r.table.rows.push_back({std::int64_t{n}, alpha, value, bound, ratio, verdict});
    std::ostringstream h;
    h << "N        " << n << '\n'
      << "alpha    " << fixed5(alpha) << '\n'
      << "value    " << fixed5(value) << '\n'
      << "bound    " << fixed5(bound) << '\n'
      << "ratio    " << fixed5(ratio) << '\n'
      << "verdict  " << verdict << '\n';
    r.human = h.str();
    return r;
}

// thresholds ----------------------------------------------------------------

inline constexpr int kThresholdMin = 4;
inline constexpr int kThresholdMax = 12;
inline constexpr int kMkMax = 10;

[[nodiscard]] inline Result cmd_thresholds(int n_min, int n_max) {
    require(n_min >= kThresholdMin && n_max <= kThresholdMax, "thresholds: range must lie within [4, 12]");
    require(n_min <= n_max, "thresholds: --n-min exceeds --n-max");
    Result r;
    r.table.columns = {"N", "v_three", "v_mk"};
    std::ostringstream h;
    h << "N   v_three   v_mk\n";
    for (int n = n_min; n <= n_max; ++n) {
        const QubitCount q(n);
        const NoiseThreshold three = noise_threshold_three(q);
        std::optional<NoiseThreshold> mk;
        if (n <= kMkMax) mk = noise_threshold_mk(q);
        Cell mk_cell = mk ? Cell{mk->value} : Cell{};
        r.table.rows.push_back({std::int64_t{n}, three.value, mk_cell});
        char line[96];
        std::snprintf(line, sizeof line, "%-3d %s   %s", n, fixed5(three.value).c_str(), mk ? fixed5(mk->value).c_str() : "   -   ");
        h << line;
        if (!three.violated && !(mk && mk->violated)) h << "   (no violation)";
        h << '\n';
    }
    r.human = h.str();
    return r;
}

// witness -------------------------------------------------------------------

inline constexpr std::size_t kDefaultWitnessSamples = 4096;

[[nodiscard]] inline Result cmd_witness(int n, double kappa, double alpha, std::size_t samples, std::uint64_t seed) {
    require(n >= 2 && n <= 12, "witness: --n must lie in [2, 12]");
    require(kappa >= 0.0 && kappa <= 1.0, "witness: --kappa must lie in [0, 1]");
    require(std::isfinite(alpha), "witness: --alpha must be finite");
    require(samples >= 1, "witness: --samples must be positive");
    const QubitCount q(n);
    const double detection = detection_value(q, kappa, alpha);
    const PositivityScan scan = positivity_scan(s_witness(q, kappa, alpha), samples, seed);
    const double threshold = detection_kappa_threshold(q);
    const bool detected = detection < 0.0;

    Result r;
    r.table.columns = {"N", "kappa", "alpha", "detection", "detected", "positivity_min", "kappa_threshold"};
    r.table.rows.push_back({std::int64_t{n}, kappa, alpha, detection, std::string(detected ? "DETECTED" : "NOT DETECTED"),
                            scan.minimum, threshold});
    std::ostringstream h;
    h << "N                " << n << '\n'
      << "kappa            " << fixed5(kappa) << '\n'
      << "alpha            " << fixed5(alpha) << '\n'
      << "detection        " << fixed5(detection) << (detected ? "  DETECTED" : "  NOT DETECTED") << '\n'
      << "positivity min   " << fixed5(scan.minimum) << '\n'
      << "kappa threshold  " << fixed5(threshold) << '\n';
    r.human = h.str();
    return r;
}

// lp-scan -------------------------------------------------------------------

enum class ScanState { dur, ghz };

struct LpScanConfig {
    int n = 4;
    double alpha = 0.0;
    int settings = 3;
    std::size_t trials = 100;
    std::uint64_t seed = 42;
    ScanState state = ScanState::dur;
    double noise = 0.0;
};

[[nodiscard]] inline Result cmd_lp_scan(const LpScanConfig &c) {
    require(c.n >= 2 && c.n <= 12, "lp-scan: --n must lie in [2, 12]");
    require(c.settings >= 1, "lp-scan: --settings must be positive");
    require(c.trials >= 1, "lp-scan: --trials must be positive");
    require(c.noise >= 0.0 && c.noise <= 1.0, "lp-scan: --noise must lie in [0, 1]");
    require(std::isfinite(c.alpha), "lp-scan: --alpha must be finite");
    const QubitCount q(c.n);
    if (c.n * c.settings > LhvProblem::kMaxStrategyBits) throw UsageError("lp-scan: n*m exceeds 24");
    // Cheap pre-check of the dense capacity before building any matrix.
    const std::size_t reduced = boundbell::detail::checked_power(static_cast<std::size_t>(c.settings) + 1, c.n);
    const std::size_t columns = std::size_t{1} << (c.n * c.settings);
    if (reduced * (columns + reduced + 1) > LhvProblem::kDenseCapacity) {
        throw UsageError("lp-scan: problem exceeds the dense solver capacity");
    }
    const DensityMatrix base = c.state == ScanState::dur ? dur_state(q, c.alpha) : DensityMatrix::projector(ghz(q, c.alpha));
    const ScanReport report = random_setting_scan(mix_with_noise(base, c.noise), c.settings, c.trials, c.seed);

    Result r;
    r.table.columns = {"trial", "verdict", "critical_visibility"};
    for (const auto &t : report.trials) {
        Cell vis = t.status == TrialStatus::infeasible ? Cell{t.critical_visibility} : Cell{};
        r.table.rows.push_back({static_cast<std::int64_t>(t.index), std::string(to_string(t.status)), vis});
    }
    std::ostringstream h;
    h << "feasible=" << report.feasible << " infeasible=" << report.infeasible << " failed=" << report.failed << '\n';
    r.human = h.str();
    if (report.failed > 0) r.status = ExitCode::numerical;
    return r;
}

// bound-enum ----------------------------------------------------------------

[[nodiscard]] inline Result cmd_bound_enum(int n) {
    require(n >= 2 && n <= 7, "bound-enum: --n must lie in [2, 7]");
    const QubitCount q(n);
    const double enumerated = lhv_bound_enumeration(q, SettingPhaseTable::standard(q));
    const double analytic = three_setting_bound(q);
    Result r;
    r.table.columns = {"N", "enumerated", "analytic"};
    r.table.rows.push_back({std::int64_t{n}, enumerated, analytic});
    r.human = "N " + std::to_string(n) + "  enumerated " + fixed5(enumerated) + "  analytic " + fixed5(analytic) + '\n';
    return r;
}

}  // namespace boundbell::cli
