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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace qarm {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::string ratio_text(const Ratio &r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

Json itemset_json(const Itemset &x) { return Json(x.items()); }

Json counters_json(const QueryCounter &c) {
    return Json{{"basic_oracle_calls", c.basic_oracle_calls},
                {"phase_oracle_k_calls", c.phase_oracle_k_calls},
                {"grover_applications", c.grover_applications},
                {"amplification_iterations", c.amplification_iterations},
                {"measurements", c.measurements},
                {"classical_row_scans", c.classical_row_scans},
                {"generalized_cnot_gates", c.generalized_cnot_gates}};
}

Json stats_json(std::span<const IterationStats> stats) {
    Json out = Json::array();
    for (const auto &s : stats) out.push_back({{"k", s.k}, {"m_candidates", s.m_candidates}, {"m_frequent", s.m_frequent}});
    return out;
}

std::string stats_table(std::span<const IterationStats> stats) {
    std::string t = fmt("%4s %14s %14s\n", "k", "M_c", "M_f");
    for (const auto &s : stats)
        t += fmt("%4u %14llu %14llu\n", s.k, static_cast<unsigned long long>(s.m_candidates),
                 static_cast<unsigned long long>(s.m_frequent));
    return t;
}

Json gamma_json(std::span<const IterationStats> stats) {
    try {
        return Json{{"unweighted", gamma_metric(stats, GammaMode::Unweighted)},
                    {"weighted", gamma_metric(stats, GammaMode::Weighted)}};
    } catch (const std::invalid_argument &) {
        return nullptr;
    }
}

Json config_json(const ExperimentConfig &c) {
    Json j;
    j["dataset"] = c.dataset ? Json(*c.dataset) : Json(nullptr);
    j["synthetic"] = c.synthetic ? Json(*c.synthetic) : Json(nullptr);
    j["min_supp"] = ratio_text(c.min_supp);
    j["min_conf"] = c.min_conf ? Json(*c.min_conf) : Json(nullptr);
    j["T"] = c.T;
    j["k_max"] = c.k_max;
    j["mode"] = std::string(to_string(c.mode));
    j["oracle_mode"] = c.oracle_mode == OracleMode::Circuit ? "circuit" : "diagonal";
    j["seed"] = c.seed;
    j["qubit_cap"] = c.qubit_cap;
    j["patience"] = c.patience;
    j["confirmation_shots"] = c.confirmation_shots;
    j["verify_boundary"] = c.verify_boundary;
    j["epsilon"] = c.epsilon;
    return j;
}

Json header(const std::string &command, const ExperimentConfig &config, const TransactionDB &db) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command;
    j["config"] = config_json(config);
    j["database"] = {{"n_transactions", db.n_transactions()}, {"n_items", db.n_items()}, {"nonzeros", db.nonzeros()}};
    return j;
}

std::string db_line(const TransactionDB &db) {
    return fmt("database: N=%zu M=%zu nonzeros=%zu\n", db.n_transactions(), db.n_items(), db.nonzeros());
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SamplingLevel {
    IterationStats stats;
    std::vector<std::pair<Itemset, double>> frequent;
    QueryCounter counter;
};

std::vector<SamplingLevel> sampling_levels(const TransactionDB &db, const ExperimentConfig &config, std::uint64_t m,
                                           Rng &rng) {
    std::vector<SamplingLevel> levels;
    std::vector<Itemset> candidates;
    for (ItemId j = 0; j < db.n_items(); ++j) candidates.push_back(Itemset{j});
    const double threshold = config.min_supp.value();
    for (unsigned k = 1; !candidates.empty() && (config.k_max == 0 || k <= config.k_max); ++k) {
        SamplingLevel level;
        const auto est = sampling_estimate(db, candidates, m, rng, level.counter);
        std::vector<Itemset> next;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (est[c] >= threshold) {
                level.frequent.emplace_back(candidates[c], est[c]);
                next.push_back(candidates[c]);
            }
        }
        level.stats = {k, candidates.size(), level.frequent.size()};
        levels.push_back(std::move(level));
        candidates = cand_gen(next);
    }
    return levels;
}

/// Exact level-wise frequent sets with every level's candidates starting
/// from all M singletons, as the quantum loop sees them.
struct ExactLevels {
    std::vector<std::set<Itemset>> frequent;
    std::vector<std::vector<Itemset>> candidates;
};

ExactLevels exact_levels(const TransactionDB &db, const ExperimentConfig &config) {
    ExactLevels out;
    std::vector<Itemset> candidates;
    for (ItemId j = 0; j < db.n_items(); ++j) candidates.push_back(Itemset{j});
    QueryCounter scratch;
    for (unsigned k = 1; !candidates.empty() && (config.k_max == 0 || k <= config.k_max); ++k) {
        auto f = fre_exam(db, candidates, config.min_supp, scratch);
        std::set<Itemset> level;
        for (const auto &x : f) level.insert(x.items);
        out.candidates.push_back(candidates);
        out.frequent.push_back(level);
        candidates = cand_gen(std::vector<Itemset>(level.begin(), level.end()));
    }
    return out;
}

MiningOptions mining_options(const ExperimentConfig &config) {
    MiningOptions o;
    o.qubit_cap = config.qubit_cap;
    o.oracle_mode = config.oracle_mode;
    o.patience = config.patience;
    o.max_k = config.k_max;
    o.verify_boundary = config.verify_boundary;
    o.confirmation_shots = config.confirmation_shots;
    return o;
}

std::uint64_t samples_for(double epsilon) {
    return static_cast<std::uint64_t>(std::ceil(1.0 / (epsilon * epsilon) - 1e-9));
}

} // namespace

void ExperimentConfig::validate() const {
    if (dataset && synthetic) throw std::invalid_argument("give either --dataset or --synthetic, not both");
    if (!dataset && !synthetic) throw std::invalid_argument("a --dataset or --synthetic source is required");
    if (min_supp.num == 0 || min_supp.num > min_supp.den) throw std::invalid_argument("min_supp must lie in (0, 1]");
    if (min_conf && !(*min_conf >= 0.0 && *min_conf <= 1.0)) throw std::invalid_argument("min_conf must lie in [0, 1]");
    if (!is_power_of_two(T) || T < 2) throw std::invalid_argument("T must be a power of two >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (patience == 0) throw std::invalid_argument("patience must be positive");
}

unsigned default_qubit_cap_from_env() {
    if (const char *v = std::getenv("QARM_QUBIT_CAP")) {
        try {
            const long cap = std::stol(v);
            if (cap > 0 && cap <= 40) return static_cast<unsigned>(cap);
        } catch (const std::exception &) {
        }
    }
    return kDefaultQubitCap;
}

TransactionDB toy_db() { return TransactionDB::from_dense({{1, 1, 1}, {1, 1, 0}, {1, 0, 0}, {0, 0, 0}}); }

TransactionDB load_database(const ExperimentConfig &config) {
    if (config.dataset) return load_fimi(*config.dataset);
    const std::string &spec = *config.synthetic;
    if (spec == "toy") return toy_db();
    if (spec.rfind("random:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(spec.substr(7));
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 4) throw std::invalid_argument("synthetic spec must be random:N:M:DENSITY:SEED");
        return random_db(std::stoull(parts[0]), std::stoull(parts[1]), std::stod(parts[2]), std::stoull(parts[3]));
    }
    throw std::invalid_argument("unknown synthetic spec '" + spec + "'");
}

// ------------------------------------------------------------------ commands

Report cmd_mine_classical(const ExperimentConfig &config) {
    config.validate();
    const auto db = load_database(config);
    const auto start = Clock::now();
    QueryCounter counter;
    const auto result = apriori(db, config.min_supp, counter,
                                config.k_max ? std::optional<unsigned>(config.k_max) : std::nullopt);
    Report r;
    r.json = header("mine-classical", config, db);
    r.json["iterations"] = stats_json(result.stats);
    Json items = Json::array();
    std::map<Itemset, double> supports;
    for (const auto &f : result.frequents) {
        items.push_back({{"items", itemset_json(f.items)},
                         {"support", f.support.value()},
                         {"support_exact", std::to_string(f.support.numerator) + "/" + std::to_string(f.support.denominator)}});
        supports[f.items] = f.support.value();
    }
    r.json["itemsets"] = items;
    r.json["counters"] = counters_json(counter);
    r.json["gamma"] = gamma_json(result.stats);
    r.text = db_line(db) + "apriori, min_supp " + ratio_text(config.min_supp) + "\n" + stats_table(result.stats);
    if (config.min_conf) {
        Json rules = Json::array();
        for (const auto &rule : generate_rules(supports, *config.min_conf))
            rules.push_back({{"antecedent", itemset_json(rule.antecedent)},
                             {"consequent", itemset_json(rule.consequent)},
                             {"support", rule.support},
                             {"confidence", rule.confidence}});
        r.text += fmt("rules with confidence >= %.4f: %zu\n", *config.min_conf, rules.size());
        r.json["rules"] = rules;
    }
    if (!r.json["gamma"].is_null())
        r.text += fmt("gamma: %.2f (unweighted), %.2f (weighted)\n", r.json["gamma"]["unweighted"].get<double>(),
                      r.json["gamma"]["weighted"].get<double>());
    if (config.timings) r.json["timings"] = {{"apriori_seconds", seconds_since(start)}};
    return r;
}

Report cmd_mine_sampling(const ExperimentConfig &config) {
    config.validate();
    const auto db = load_database(config);
    const auto start = Clock::now();
    Rng rng(config.seed);
    const auto m = samples_for(config.epsilon);
    const auto levels = sampling_levels(db, config, m, rng);

    Report r;
    r.json = header("mine-sampling", config, db);
    r.json["samples_per_candidate"] = m;
    std::vector<IterationStats> stats;
    QueryCounter total;
    Json items = Json::array();
    for (const auto &level : levels) {
        stats.push_back(level.stats);
        total += level.counter;
        for (const auto &[x, s] : level.frequent) items.push_back({{"items", itemset_json(x)}, {"support", s}});
    }
    r.json["iterations"] = stats_json(stats);
    r.json["itemsets"] = items;
    r.json["counters"] = counters_json(total);
    r.text = db_line(db) + fmt("sampling, m=%llu per candidate\n", static_cast<unsigned long long>(m)) +
             stats_table(stats) +
             fmt("basic-oracle-equivalent row checks: %llu\n", static_cast<unsigned long long>(total.basic_oracle_calls));
    if (config.timings) r.json["timings"] = {{"sampling_seconds", seconds_since(start)}};
    return r;
}

Report cmd_mine_quantum(const ExperimentConfig &config) {
    config.validate();
    const auto db = load_database(config);
    Report r;
    r.json = header("mine-quantum", config, db);
    const auto start = Clock::now();
    Rng rng(config.seed);
    QarmRun run;
    try {
        run = qarm_full(db, config.min_supp.value(), config.T, config.mode, rng, mining_options(config));
    } catch (const QubitCapExceeded &e) {
        r.exit_code = kExitUsage;
        r.json["error"] = e.what();
        r.text = std::string("refusing to simulate: ") + e.what() +
                 " (raise --qubit-cap or QARM_QUBIT_CAP, or use a smaller database)\n";
        return r;
    } catch (const std::invalid_argument &e) {
        r.exit_code = kExitUsage;
        r.json["error"] = e.what();
        r.text = std::string("refusing to simulate: ") + e.what() + "\n";
        return r;
    }

    Json levels = Json::array();
    r.text = db_line(db) + fmt("quantum mining, T=%llu, mode %s\n", static_cast<unsigned long long>(config.T),
                               std::string(to_string(config.mode)).c_str());
    for (const auto &level : run.levels) {
        Json found = Json::array();
        for (const auto &f : level.found) {
            found.push_back({{"items", itemset_json(f.items)},
                             {"support", f.estimate.value},
                             {"grid_y", f.estimate.y},
                             {"boundary_uncertain", f.boundary_uncertain},
                             {"observations", f.observations}});
            r.text += fmt("  k=%u %-20s s~%.6f (y=%llu/%llu)%s\n", level.k, f.items.to_string().c_str(),
                          f.estimate.value, static_cast<unsigned long long>(f.estimate.y),
                          static_cast<unsigned long long>(config.T), f.boundary_uncertain ? " boundary" : "");
        }
        levels.push_back({{"k", level.k},
                          {"m_candidates", level.m_candidates},
                          {"found", found},
                          {"shots_used", level.shots_used},
                          {"draws", level.draws},
                          {"counters", counters_json(level.counters)}});
    }
    r.json["iterations"] = stats_json(run.stats);
    r.json["levels"] = levels;
    r.json["counters"] = counters_json(run.total);
    r.text += stats_table(run.stats) +
              fmt("basic-oracle calls: %llu\n", static_cast<unsigned long long>(run.total.basic_oracle_calls));
    if (config.timings) r.json["timings"] = {{"quantum_seconds", seconds_since(start)}};
    return r;
}

Report cmd_compare(const ExperimentConfig &config) {
    config.validate();
    const auto db = load_database(config);
    Report r;
    r.json = header("compare", config, db);

    Rng rng(config.seed);
    QarmRun quantum;
    try {
        quantum = qarm_full(db, config.min_supp.value(), config.T, config.mode, rng, mining_options(config));
    } catch (const QubitCapExceeded &e) {
        r.exit_code = kExitUsage;
        r.json["error"] = e.what();
        r.text = std::string("refusing to simulate: ") + e.what() + "\n";
        return r;
    }
    const auto m = samples_for(config.epsilon);
    const auto sampling = sampling_levels(db, config, m, rng);
    const auto exact = exact_levels(db, config);

    // Agreement is only guaranteed when every candidate the exact loop
    // examines sits at least two grid steps from the threshold.
    bool separated = true;
    for (const auto &level : exact.candidates)
        for (const auto &c : level)
            separated = separated && grid_steps_from_threshold(exact_support(db, c).value(), config.min_supp.value(),
                                                               config.T) >= 2.0;

    auto as_set_q = [&](std::size_t l) {
        std::set<Itemset> s;
        if (l < quantum.levels.size())
            for (const auto &f : quantum.levels[l].found) s.insert(f.items);
        return s;
    };
    auto as_set_s = [&](std::size_t l) {
        std::set<Itemset> s;
        if (l < sampling.size())
            for (const auto &f : sampling[l].frequent) s.insert(f.first);
        return s;
    };

    bool quantum_agrees = true, sampling_agrees = true;
    const std::size_t depth = std::max({quantum.levels.size(), sampling.size(), exact.frequent.size()});
    Json rows = Json::array();
    r.text = db_line(db) + fmt("%4s %8s %8s %8s %8s %16s %16s %16s\n", "k", "M_c", "M_f", "M_f(q)", "M_f(s)",
                               "quantum O", "sampling O", "apriori scans");
    for (std::size_t l = 0; l < depth; ++l) {
        const std::set<Itemset> ex = l < exact.frequent.size() ? exact.frequent[l] : std::set<Itemset>{};
        const auto q = as_set_q(l);
        const auto s = as_set_s(l);
        quantum_agrees = quantum_agrees && q == ex;
        sampling_agrees = sampling_agrees && s == ex;
        const std::uint64_t mc = l < exact.candidates.size() ? exact.candidates[l].size() : 0;
        const std::uint64_t q_calls = l < quantum.levels.size() ? quantum.levels[l].counters.basic_oracle_calls : 0;
        const std::uint64_t s_calls = l < sampling.size() ? sampling[l].counter.basic_oracle_calls : 0;
        const std::uint64_t scans = (l + 1) * mc * db.n_transactions();
        rows.push_back({{"k", l + 1},
                        {"m_candidates", mc},
                        {"m_frequent", ex.size()},
                        {"m_frequent_quantum", q.size()},
                        {"m_frequent_sampling", s.size()},
                        {"quantum_basic_oracle_calls", q_calls},
                        {"sampling_basic_oracle_calls", s_calls},
                        {"apriori_row_scans", scans}});
        r.text += fmt("%4zu %8llu %8zu %8zu %8zu %16llu %16llu %16llu\n", l + 1, static_cast<unsigned long long>(mc),
                      ex.size(), q.size(), s.size(), static_cast<unsigned long long>(q_calls),
                      static_cast<unsigned long long>(s_calls), static_cast<unsigned long long>(scans));
    }
    const bool pass = !separated || quantum_agrees;
    r.json["query_complexity"] = rows;
    r.json["samples_per_candidate"] = m;
    r.json["agreement"] = {{"quantum_matches_exact", quantum_agrees},
                           {"sampling_matches_exact", sampling_agrees},
                           {"supports_separated_from_threshold", separated},
                           {"pass", pass}};
    r.text += fmt("quantum matches exact: %s, sampling matches exact: %s, separated: %s => %s\n",
                  quantum_agrees ? "yes" : "no", sampling_agrees ? "yes" : "no", separated ? "yes" : "no",
                  pass ? "PASS" : "FAIL");
    if (!pass) r.exit_code = kExitAssertion;
    return r;
}

Report cmd_reproduce_appendix(const AppendixPaths &paths) {
    Report r;
    r.json["schema_version"] = kReportSchemaVersion;
    r.json["command"] = "reproduce-appendix";
    Json runs = Json::array();
    bool ok = true;

    for (const auto &published : published_runs()) {
        Json entry{{"dataset", published.dataset}, {"min_supp", ratio_text(published.min_supp)}};
        const double gamma_published_tables = gamma_metric(published.stats);
        const bool gamma_ok = std::abs(gamma_published_tables - published.gamma) <= 0.01;
        ok = ok && gamma_ok;
        entry["gamma_published"] = published.gamma;
        entry["gamma_from_published_tables"] = gamma_published_tables;
        entry["gamma_check"] = gamma_ok ? "PASS" : "FAIL";

        const auto &path = published.dataset == "retail" ? paths.retail : paths.kosarak;
        std::string status;
        if (!path || !std::filesystem::exists(*path)) {
            status = "SKIPPED";
        } else {
            const auto db = load_fimi(*path);
            QueryCounter counter;
            const auto result = apriori(db, published.min_supp, counter);
            const bool match = result.stats == published.stats;
            status = match ? "PASS" : "FAIL";
            ok = ok && match;
            entry["iterations"] = stats_json(result.stats);
            entry["gamma"] = gamma_metric(result.stats);
        }
        entry["tables_check"] = status;
        r.text += fmt("%-8s %-6s gamma(published tables)=%.2f [%s]  level counts [%s]\n", published.dataset.c_str(),
                      ratio_text(published.min_supp).c_str(), gamma_published_tables, gamma_ok ? "PASS" : "FAIL",
                      status.c_str());
        runs.push_back(entry);
    }
    r.json["runs"] = runs;
    r.json["pass"] = ok;
    if (!ok) r.exit_code = kExitAssertion;
    return r;
}

Report cmd_datasets() {
    Report r;
    r.json["schema_version"] = kReportSchemaVersion;
    r.json["command"] = "datasets";
    r.json["repository"] = "http://fimi.uantwerpen.be/data/";
    r.json["files"] = {"retail.dat", "kosarak.dat"};
    r.text = "Download from the FIMI repository (http://fimi.uantwerpen.be/data/):\n"
             "  retail.dat\n"
             "  kosarak.dat\n"
             "No files are fetched by this tool.\n";
    return r;
}

void write_outputs(const ExperimentConfig &config, const Report &report) {
    if (config.output) {
        std::ofstream out(*config.output);
        if (!out) throw std::runtime_error("cannot write '" + *config.output + "'");
        out << report.json.dump(2) << "\n";
    }
    if (config.csv && report.json.contains("iterations")) {
        std::ofstream out(*config.csv);
        if (!out) throw std::runtime_error("cannot write '" + *config.csv + "'");
        out << "k,m_candidates,m_frequent\n";
        for (const auto &it : report.json["iterations"])
            out << it["k"] << "," << it["m_candidates"] << "," << it["m_frequent"] << "\n";
    }
}

} // namespace qarm
