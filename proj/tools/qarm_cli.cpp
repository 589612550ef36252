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

#include "qarm/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_experiment_flags(CLI::App *cmd, qarm::ExperimentConfig &config, std::string &min_supp,
                          std::string &mode, std::string &oracle) {
    cmd->add_option("--dataset", config.dataset, "FIMI .dat file");
    cmd->add_option("--synthetic", config.synthetic, "toy | random:N:M:DENSITY:SEED");
    cmd->add_option("--min-supp", min_supp, "support threshold, e.g. 0.5, 1/2 or 2%")->capture_default_str();
    cmd->add_option("--min-conf", config.min_conf, "confidence threshold for rule generation");
    cmd->add_option("--T", config.T, "estimation grid size (power of two)")->capture_default_str();
    cmd->add_option("--k-max", config.k_max, "highest itemset size to mine (0 = all)")->capture_default_str();
    cmd->add_option("--mode", mode, "ideal-projection | grover-known | bbht")->capture_default_str();
    cmd->add_option("--oracle", oracle, "diagonal | circuit")->capture_default_str();
    cmd->add_option("--seed", config.seed, "random seed")->capture_default_str();
    cmd->add_option("--qubit-cap", config.qubit_cap, "maximum simulated qubits (env QARM_QUBIT_CAP)")
        ->capture_default_str();
    cmd->add_option("--patience", config.patience, "draws without a new itemset before stopping")
        ->capture_default_str();
    cmd->add_option("--confirm-shots", config.confirmation_shots, "single-candidate shots confirming each result")
        ->capture_default_str();
    cmd->add_flag("!--no-verify", config.verify_boundary, "keep boundary-uncertain results unchecked");
    cmd->add_option("--epsilon", config.epsilon, "sampling baseline target error")->capture_default_str();
    cmd->add_option("--output", config.output, "write the JSON report here");
    cmd->add_option("--csv", config.csv, "write per-level stats as CSV here");
    cmd->add_flag("--timings", config.timings, "include wall-clock timings in the report");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum association rules mining simulator and classical baselines"};
    app.require_subcommand(1);

    qarm::ExperimentConfig config;
    config.qubit_cap = qarm::default_qubit_cap_from_env();
    std::string min_supp = "1/2";
    std::string mode = "bbht";
    std::string oracle = "diagonal";
    bool json_stdout = false;
    app.add_flag("--json", json_stdout, "print the JSON report instead of the text table");

    auto *classical = app.add_subcommand("mine-classical", "exact Apriori with per-level counts");
    auto *sampling = app.add_subcommand("mine-sampling", "sampling-based support estimates");
    auto *quantum = app.add_subcommand("mine-quantum", "simulated quantum mining (toy scale)");
    auto *compare = app.add_subcommand("compare", "all three miners on one database");
    for (auto *cmd : {classical, sampling, quantum, compare}) add_experiment_flags(cmd, config, min_supp, mode, oracle);

    qarm::AppendixPaths paths;
    auto *appendix = app.add_subcommand("reproduce-appendix", "check published Apriori level counts");
    appendix->add_option("--retail", paths.retail, "path to retail.dat");
    appendix->add_option("--kosarak", paths.kosarak, "path to kosarak.dat");
    auto *datasets = app.add_subcommand("datasets", "print the dataset file names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? qarm::kExitOk : qarm::kExitUsage;
    }

    qarm::Report report;
    try {
        config.min_supp = qarm::parse_ratio(min_supp);
        config.mode = qarm::parse_amplification_mode(mode);
        if (oracle == "circuit") config.oracle_mode = qarm::OracleMode::Circuit;
        else if (oracle != "diagonal") throw std::invalid_argument("unknown oracle mode '" + oracle + "'");

        if (*classical) report = qarm::cmd_mine_classical(config);
        else if (*sampling) report = qarm::cmd_mine_sampling(config);
        else if (*quantum) report = qarm::cmd_mine_quantum(config);
        else if (*compare) report = qarm::cmd_compare(config);
        else if (*appendix) report = qarm::cmd_reproduce_appendix(paths);
        else if (*datasets) report = qarm::cmd_datasets();
        qarm::write_outputs(config, report);
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return qarm::kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return qarm::kExitUsage;
    }

    if (json_stdout) std::cout << report.json.dump(2) << "\n";
    else std::cout << report.text;
    return report.exit_code;
}
