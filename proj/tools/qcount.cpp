// Copyright 2026 The qcount Authors
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


// qcount: command-line driver for the counting simulations.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qcount/circuits.hpp"
#include "qcount/harness/compare.hpp"
#include "qcount/harness/config.hpp"
#include "qcount/harness/csv.hpp"
#include "qcount/harness/experiment.hpp"

namespace {

using nlohmann::json;
using namespace qcount;
using namespace qcount::harness;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// PAULI,REG,j,k[,q]
json parse_inject(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4 && parts.size() != 5) throw std::invalid_argument("--inject expects PAULI,REG,j,k[,q]");
    json e{{"pauli", parts[0]}, {"register", parts[1]}, {"j", std::stoi(parts[2])}, {"k", std::stoull(parts[3])}};
    if (parts.size() == 5) e["q"] = std::stoi(parts[4]);
    return e;
}

void print_summary(const json& s) {
    if (s.contains("runs")) {
        for (const auto& r : s["runs"]) {
            std::cout << r["ordering"].get<std::string>() << ": argmax m'=" << r["argmax"];
            if (r.contains("tv_vs_noiseless")) std::cout << "  TV vs noiseless=" << r["tv_vs_noiseless"];
            if (r.contains("t_edge_mass")) std::cout << "  mass at t'=0,N: " << r["t_edge_mass"];
            std::cout << '\n';
        }
    }
    if (s.contains("edge_homogeneity_p")) std::cout << "edge-mass homogeneity p=" << s["edge_homogeneity_p"] << '\n';
    std::cout << "wrote " << s["files"].dump() << " (" << s["wall_time_seconds"].get<double>() << " s)\n";
}

int run_doc(const json& doc, const std::string& out, int workers) {
    const auto cfg = parse_config(doc.dump(2), "<command line>");
    print_summary(run_experiment(cfg, out, workers));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum counting simulator with noise injection"};
    app.require_subcommand(1);
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (default: QCL_THREADS or hardware)");

    // count
    auto* count = app.add_subcommand("count", "run the counting circuit");
    int p = 0, n = 0;
    std::string marked, order = "asc", scope = "first", stages = "stage3_only", inject, out = "out";
    double d = 0.0;
    std::uint64_t trials = 0, seed = 0;
    count->add_option("--p", p, "first-register qubits")->required();
    count->add_option("--n", n, "second-register qubits")->required();
    count->add_option("--marked", marked, "marked items, e.g. 0-12,15")->required();
    count->add_option("--order", order, "asc|desc|semi")->check(CLI::IsMember({"asc", "desc", "semi"}));
    count->add_option("--d", d, "depolarizing rate per qubit per unit");
    count->add_option("--scope", scope, "noisy register")->check(CLI::IsMember({"first", "second", "both"}));
    count->add_option("--stages", stages, "stage3_only|all_stages")->check(CLI::IsMember({"stage3_only", "all_stages"}));
    auto* trials_opt = count->add_option("--trials", trials, "sampled trials (default: exact distribution)");
    count->add_option("--seed", seed, "master seed");
    count->add_option("--inject", inject, "single error PAULI,REG,j,k[,q]");
    count->add_option("--out", out, "output directory");

    // analytic
    auto* an = app.add_subcommand("analytic", "evaluate closed forms");
    std::string form = "prob-avg", an_out = "out";
    int an_p = 0, an_n = 0, an_j = 0;
    std::uint64_t an_k = 0;
    std::string an_marked;
    an->add_option("--form", form, "closed form to evaluate (default prob-avg)")
        ->check(CLI::IsMember({"prob-avg", "asc-plus", "asc-eb", "des-eb", "des-eg", "noiseless"}));
    an->add_option("--p", an_p, "first-register qubits")->required();
    an->add_option("--n", an_n, "second-register qubits")->required();
    an->add_option("--j", an_j, "error line (default 0)");
    an->add_option("--k", an_k, "applications before the error (default 0)");
    an->add_option("--marked", an_marked, "marked items")->required();
    an->add_option("--out", an_out, "output directory");

    // bht
    auto* bht = app.add_subcommand("bht", "two-phase counting");
    int bht_n = 0, runs = 1;
    std::uint64_t bht_seed = 0;
    std::string bht_marked;
    bht->add_option("--n", bht_n, "search-space qubits")->required();
    bht->add_option("--marked", bht_marked, "marked items")->required();
    bht->add_option("--runs", runs, "number of runs")->check(CLI::PositiveNumber);
    bht->add_option("--seed", bht_seed, "master seed");

    // run
    auto* run = app.add_subcommand("run", "run an experiment config");
    std::string config_path, run_out;
    run->add_option("config", config_path, "experiment JSON")->required();
    run->add_option("--out", run_out, "output directory (default: out/<name>)");

    // compare
    auto* cmp = app.add_subcommand("compare", "compare two distribution CSVs");
    std::string csv_a, csv_b;
    cmp->add_option("a", csv_a)->required();
    cmp->add_option("b", csv_b)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*count) {
            const bool semi = order == "semi";
            const bool sampled = semi || d > 0.0 || trials_opt->count() > 0;
            json doc{{"name", "count"}, {"p", p}, {"n", n}, {"marked", marked}, {"ordering", order},
                     {"method", sampled ? "sampled" : "exact"}, {"outputs", {"m_dist", "t_dist", "analytic"}}};
            if (sampled) {
                doc["trials"] = trials_opt->count() > 0 ? trials : std::uint64_t{100000};
                doc["seed"] = seed;
            }
            json noise = json::object();
            if (d > 0.0) noise = {{"d", d}, {"register_scope", scope}, {"stage_scope", stages}, {"mode", "stochastic"}};
            if (!inject.empty()) {
                if (d > 0.0) throw std::invalid_argument("--inject and --d are exclusive");
                noise["event"] = parse_inject(inject);
            }
            if (!noise.empty()) doc["noise"] = noise;
            return run_doc(doc, out, workers);
        }
        if (*an) {
            json doc{{"name", "analytic"}, {"p", an_p}, {"n", an_n}, {"marked", an_marked}, {"method", "analytic"},
                     {"form", form},      {"j", an_j}, {"k", an_k}};
            return run_doc(doc, an_out, workers);
        }
        if (*bht) {
            const Oracle oracle = Oracle::parse(bht_n, bht_marked);
            BhtCounter counter(oracle);
            const double t = static_cast<double>(oracle.count());
            const double bound = 2.0 * kPi * std::sqrt(t) + kPi * kPi;
            int exact = 0, within = 0;
            std::cout << "run,phase1_p,phase1_m,phase1_t,phase2_p,phase2_m,phase2_t,estimate\n";
            for (int i = 0; i < runs; ++i) {
                const auto r = counter.run(bht_seed, static_cast<std::uint64_t>(i));
                exact += r.estimate == static_cast<std::int64_t>(oracle.count());
                within += std::abs(t - r.phase1_t) < bound;
                std::cout << i << ',' << r.phase1_p << ',' << r.phase1_m << ',' << format_real(r.phase1_t) << ','
                          << r.phase2_p << ',' << r.phase2_m << ',' << format_real(r.phase2_t) << ',' << r.estimate << '\n';
            }
            std::cerr << "exact estimate: " << exact << "/" << runs << ", phase-1 bound held: " << within << "/" << runs
                      << '\n';
            return 0;
        }
        if (*run) {
            const auto cfg = load_config(config_path);
            print_summary(run_experiment(cfg, run_out.empty() ? "out/" + cfg.name : run_out, workers));
            return 0;
        }
        if (*cmp) {
            const auto a = read_distribution_file(csv_a);
            const auto b = read_distribution_file(csv_b);
            ComparisonReport rep;
            if (a.counts) {
                rep = compare(*a.counts, b.values);
            } else if (b.counts) {
                rep = compare(*b.counts, a.values);
            } else {
                rep = compare(a.values, b.values);
            }
            std::cout << "total_variation=" << format_real(rep.total_variation)
                      << "\nmax_abs_diff=" << format_real(rep.max_abs_diff) << '\n';
            if (rep.chi_square_p) std::cout << "chi_square_p=" << format_real(*rep.chi_square_p) << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
