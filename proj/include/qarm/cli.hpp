// Copyright 2026 The qarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Experiment commands behind the `qarm` executable. Each command returns a
 * Report holding a JSON document, a human-readable table and an exit code
 * (0 ok, 1 assertion failure, 2 usage or configuration error).
 */
#pragma once

#include "qarm/mining.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace qarm {

inline constexpr int kReportSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitUsage = 2 };

struct ExperimentConfig {
    /// FIMI file path.
    std::optional<std::string> dataset;
    /// "toy" or "random:N:M:DENSITY:SEED".
    std::optional<std::string> synthetic;
    Ratio min_supp{1, 2};
    std::optional<double> min_conf;
    BasisIndex T = 8;
    /// Highest k to mine; 0 means until no candidates remain.
    unsigned k_max = 0;
    AmplificationMode mode = AmplificationMode::Bbht;
    OracleMode oracle_mode = OracleMode::Diagonal;
    std::uint64_t seed = 1;
    unsigned qubit_cap = kDefaultQubitCap;
    unsigned patience = 25;
    /// Single-candidate confirmation shots per observed itemset.
    unsigned confirmation_shots = 5;
    /// Exact-support check of boundary-uncertain quantum results.
    bool verify_boundary = true;
    /// Target error of the sampling baseline; m = ceil(1 / epsilon^2).
    double epsilon = 0.05;
    std::optional<std::string> output;
    std::optional<std::string> csv;
    /// Adds wall-clock timings to the report (makes it non-reproducible).
    bool timings = false;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

/// Qubit cap from QARM_QUBIT_CAP, or the built-in default.
unsigned default_qubit_cap_from_env();

struct Report {
    nlohmann::ordered_json json;
    std::string text;
    int exit_code = kExitOk;
};

/// The 4 x 3 database with rows 111, 110, 100, 000.
TransactionDB toy_db();

TransactionDB load_database(const ExperimentConfig &config);

Report cmd_mine_classical(const ExperimentConfig &config);
Report cmd_mine_sampling(const ExperimentConfig &config);
Report cmd_mine_quantum(const ExperimentConfig &config);
Report cmd_compare(const ExperimentConfig &config);

struct AppendixPaths {
    std::optional<std::string> retail;
    std::optional<std::string> kosarak;
};

/// Apriori on the FIMI retail and kosarak files at 1% and 2% against the
/// published level counts and ratios. Missing files are reported SKIPPED.
Report cmd_reproduce_appendix(const AppendixPaths &paths);

/// Canonical dataset file names; never downloads anything.
Report cmd_datasets();

/// Writes JSON to config.output and stats CSV to config.csv when set.
void write_outputs(const ExperimentConfig &config, const Report &report);

} // namespace qarm
