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


// boundbell: Bell-violation, witness and local-model numerics for the
// bound-entangled N-qubit family.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "boundbell/commands.hpp"

namespace {

using namespace boundbell;
using namespace boundbell::cli;

struct Options {
    int n = 4;
    int n_min = 4;
    int n_max = 10;
    std::optional<double> alpha;
    double kappa = 1.0;
    double noise = 0.0;
    int settings = 3;
    long long trials = 100;
    std::uint64_t seed = 42;
    long long samples = static_cast<long long>(kDefaultWitnessSamples);
    std::string state = "dur";
    std::string out;
    std::string format;
};

int emit(const Result &r, const Options &o, Format fallback) {
    Format f = fallback;
    if (o.format == "csv") f = Format::csv;
    if (o.format == "json") f = Format::json;
    if (o.format == "human") f = Format::human;
    if (!o.out.empty()) {
        std::ofstream file(o.out);
        if (!file) throw UsageError("cannot open --out file '" + o.out + "'");
        write_table(file, r.table, f == Format::human ? Format::csv : f);
        std::cout << r.human;
    } else if (f == Format::human) {
        std::cout << r.human;
    } else {
        write_table(std::cout, r.table, f);
        // Keeps stdout machine-readable.
        if (!r.human.empty() && r.table.columns.front() == "trial") std::cerr << r.human;
    }
    return static_cast<int>(r.status);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Bell inequalities, witnesses and local-model tests for a bound-entangled qubit family"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--out", o.out, "Write the table to this file");
        sub->add_option("--format", o.format, "human, csv or json")->check(CLI::IsMember({"human", "csv", "json"}));
    };

    auto *violation = app.add_subcommand("violation", "Three-setting Bell value on the family");
    violation->add_option("--n", o.n, "Number of qubits (2-10)")->required();
    violation->add_option("--alpha", o.alpha, "Family phase (radians)");
    add_common(violation);

    auto *thresholds = app.add_subcommand("thresholds", "Critical noise fractions per N (CSV by default)");
    thresholds->add_option("--n-min", o.n_min, "Smallest N (>= 4)");
    thresholds->add_option("--n-max", o.n_max, "Largest N (<= 12; MK column up to 10)");
    add_common(thresholds);

    auto *witness = app.add_subcommand("witness", "Strengthened witness on the family");
    witness->add_option("--n", o.n, "Number of qubits")->required();
    witness->add_option("--kappa", o.kappa, "Corner strength in [0, 1]");
    witness->add_option("--alpha", o.alpha, "Family phase (radians)");
    witness->add_option("--samples", o.samples, "Product states sampled in the positivity scan");
    witness->add_option("--seed", o.seed, "Random seed");
    add_common(witness);

    auto *scan = app.add_subcommand("lp-scan", "Local-model LP over random measurement settings");
    scan->add_option("--n", o.n, "Number of qubits");
    scan->add_option("--alpha", o.alpha, "State phase (radians)");
    scan->add_option("--settings", o.settings, "Settings per observer");
    scan->add_option("--trials", o.trials, "Number of random setting draws");
    scan->add_option("--seed", o.seed, "Random seed");
    scan->add_option("--noise", o.noise, "White-noise fraction in [0, 1]");
    scan->add_option("--state", o.state, "dur or ghz")->check(CLI::IsMember({"dur", "ghz"}));
    add_common(scan);

    auto *bound = app.add_subcommand("bound-enum", "Exhaustive local bound of the three-setting inequality");
    bound->add_option("--n", o.n, "Number of qubits (2-7)")->required();
    add_common(bound);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    }

    try {
        if (*violation) return emit(cmd_violation(o.n, o.alpha.value_or(0.0)), o, Format::human);
        if (*thresholds) return emit(cmd_thresholds(o.n_min, o.n_max), o, Format::csv);
        if (*witness) {
            require(o.samples >= 1, "witness: --samples must be positive");
            return emit(cmd_witness(o.n, o.kappa, o.alpha.value_or(0.0), static_cast<std::size_t>(o.samples), o.seed), o,
                        Format::human);
        }
        if (*scan) {
            require(o.trials >= 1, "lp-scan: --trials must be positive");
            LpScanConfig c;
            c.n = o.n;
            c.alpha = o.alpha.value_or(0.0);
            c.settings = o.settings;
            c.trials = static_cast<std::size_t>(o.trials);
            c.seed = o.seed;
            c.noise = o.noise;
            c.state = o.state == "ghz" ? ScanState::ghz : ScanState::dur;
            return emit(cmd_lp_scan(c), o, Format::human);
        }
        if (*bound) return emit(cmd_bound_enum(o.n), o, Format::human);
    } catch (const NumericalFailure &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical);
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    } catch (const std::length_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    }
    return static_cast<int>(ExitCode::usage);
}
