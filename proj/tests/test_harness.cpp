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


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qcount/harness/compare.hpp"
#include "qcount/harness/config.hpp"
#include "qcount/harness/csv.hpp"
#include "qcount/harness/experiment.hpp"

namespace qcount::harness {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qcount_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::size_t error_line(const std::string& text) {
    try {
        (void)parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 0;
}

TEST(Compare, IdenticalAndDisjoint) {
    const ProbDist a{0.25, 0.25, 0.5};
    EXPECT_EQ(compare(a, a).total_variation, 0.0);
    const auto r = compare(ProbDist{1.0, 0.0}, ProbDist{0.0, 1.0});
    EXPECT_EQ(r.total_variation, 1.0);
    EXPECT_EQ(r.max_abs_diff, 1.0);
    EXPECT_FALSE(r.chi_square_p);
    EXPECT_THROW(compare(ProbDist{1.0}, ProbDist{0.5, 0.5}), std::invalid_argument);
}

TEST(Compare, ChiSquareTail) {
    EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-9);
    EXPECT_NEAR(chi_square_sf(18.307038053275146, 10), 0.05, 1e-9);
    EXPECT_EQ(chi_square_sf(0.0, 3), 1.0);
}

TEST(Compare, SampledNoiselessCountingAgainstClosedForm) {
    const Oracle o = Oracle::parse(8, "0-12");
    const auto s = run_counting_sampled({8, o, Ordering::ascending}, NoiseConfig::none(), 100000, 31);
    const auto closed = closed_form_noiseless(8, o);
    const auto r = compare(s.m_counts, closed);
    EXPECT_LE(r.total_variation, 0.01);
    ASSERT_TRUE(r.chi_square_p);
    EXPECT_GT(*r.chi_square_p, 1e-3);
    // Against a visibly different reference the test must reject.
    const auto other = closed_form_noiseless(8, Oracle::parse(8, "0-14"));
    EXPECT_LT(*compare(s.m_counts, other).chi_square_p, 1e-6);
}

TEST(Compare, Homogeneity) {
    EXPECT_GT(chi_square_homogeneity_p({500, 500}, {505, 495}), 0.5);
    EXPECT_LT(chi_square_homogeneity_p({900, 100}, {700, 300}), 1e-10);
    EXPECT_THROW(chi_square_homogeneity_p({0, 0}, {1, 2}), std::invalid_argument);
}

TEST(Csv, MDistSchemaAndPrecision) {
    std::ostringstream os;
    write_m_dist(os, {1.0 / 3.0, 2.0 / 3.0});
    const auto text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "m_prime,probability");
    EXPECT_NE(text.find("0,0.333333333333333"), std::string::npos);
    std::istringstream is(text);
    const auto back = read_distribution(is);
    EXPECT_EQ(back.values, (ProbDist{1.0 / 3.0, 2.0 / 3.0}));
    EXPECT_FALSE(back.counts);
}

TEST(Csv, TDistKeepsCounts) {
    std::ostringstream os;
    write_t_dist(os, {0.25, 0.75}, {1, 3});
    EXPECT_EQ(os.str(), "t_estimate,count,frequency\n0,1,0.25\n1,3,0.75\n");
    std::istringstream is(os.str());
    const auto back = read_distribution(is);
    ASSERT_TRUE(back.counts);
    EXPECT_EQ(*back.counts, (std::vector<std::uint64_t>{1, 3}));

    std::ostringstream exact;
    write_t_dist(exact, {0.5, 0.5});
    EXPECT_EQ(exact.str(), "t_estimate,count,frequency\n0,,0.5\n1,,0.5\n");
}

TEST(Csv, ErrorsNameTheLine) {
    std::istringstream is("m_prime,probability\n0,0.5\n2,0.5\n");
    try {
        (void)read_distribution(is, "x.csv");
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("x.csv:3:"), std::string::npos) << e.what();
    }
}

TEST(Config, ParsesAFullDocument) {
    const auto c = parse_config(R"({
  "name": "demo", "p": 5, "n": 6, "marked": [0, "3-5"], "ordering": ["asc", "semi"],
  "method": "sampled", "trials": 10, "seed": 3,
  "noise": {"d": 0.01, "register_scope": "both", "stage_scope": "all_stages", "mode": "stochastic"},
  "outputs": ["m_dist", "t_dist"]
})");
    EXPECT_EQ(c.name, "demo");
    EXPECT_EQ(c.oracle().count(), 4u);
    EXPECT_EQ(c.orderings, (std::vector<Ordering>{Ordering::ascending, Ordering::semi_classical}));
    EXPECT_EQ(c.noise.register_scope, RegisterScope::both);
    EXPECT_EQ(c.noise.stage_scope, StageScope::all_stages);
    EXPECT_EQ(*c.seed, 3u);
}

TEST(Config, EventImpliesSingleEventMode) {
    const auto c = parse_config(R"({"p": 4, "n": 4, "marked": "1",
      "noise": {"event": {"pauli": "Y", "register": "second", "j": 2, "k": 4, "q": 3}}})");
    EXPECT_EQ(c.noise.mode, NoiseMode::single_event);
    EXPECT_EQ(c.noise.event->pauli, Pauli::Y);
    EXPECT_EQ(c.noise.event->q, 3);
}

TEST(Config, ErrorsAreLineAnchored) {
    EXPECT_EQ(error_line("{\n  \"p\": 4,\n  \"n\": 4\n  \"marked\": \"1\"\n}"), 4u);  // missing comma
    EXPECT_EQ(error_line("{\n  \"p\": 4,\n  \"n\": 4,\n  \"marked\": \"1\",\n  \"colour\": 2\n}"), 5u);
    EXPECT_EQ(error_line("{\n  \"p\": 4,\n  \"n\": 4,\n  \"marked\": \"1\",\n  \"ordering\": \"semi\"\n}"), 5u);
    EXPECT_EQ(error_line("{\n  \"p\": 4,\n  \"n\": 4,\n  \"marked\": \"1\",\n  \"method\": \"sampled\",\n"
                         "  \"trials\": 5\n}"),
              1u);  // seed is absent: anchored at the document start
    EXPECT_EQ(error_line("{\n  \"p\": 3,\n  \"n\": 4,\n  \"marked\": \"1\",\n  \"noise\": {\n    \"event\": {\n"
                         "      \"pauli\": \"X\", \"register\": \"first\",\n      \"j\": 1,\n      \"k\": 9\n    }\n  }\n}"),
              9u);
    EXPECT_EQ(error_line("{\n  \"p\": 3,\n  \"n\": 4,\n  \"marked\": \"1-40\"\n}"), 4u);
    EXPECT_EQ(error_line("{\n  \"p\": 3,\n  \"n\": 4,\n  \"marked\": \"1\",\n  \"method\": \"exact\",\n"
                         "  \"noise\": {\"d\": 0.1, \"register_scope\": \"first\"}\n}"),
              5u);
    EXPECT_EQ(error_line("{\"p\": 3, \"n\": 4, \"marked\": \"1\"}"), 0u);
}

TEST(Experiment, NoiselessReferenceConfigPeaks) {
    const auto cfg = load_config(std::string(QCOUNT_SOURCE_DIR) + "/configs/fig_noiseless.json");
    const auto dir = scratch_dir("noiseless");
    (void)run_experiment(cfg, dir);
    const auto d = read_distribution_file((dir / "m_dist_ascending.csv").string()).values;
    ASSERT_EQ(d.size(), 256u);
    EXPECT_NEAR(testing::sum(d), 1.0, 1e-9);
    std::vector<std::size_t> idx(256);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return d[a] > d[b]; });
    const std::set<std::size_t> top{idx[0], idx[1]};
    EXPECT_EQ(top.count(18) + top.count(19), 1u);
    EXPECT_EQ(top.count(237) + top.count(238), 1u);
    const auto t = read_distribution_file((dir / "t_dist_ascending.csv").string()).values;
    EXPECT_NEAR(testing::sum(t), 1.0, 1e-9);
    EXPECT_TRUE(fs::exists(dir / "summary.json"));
    EXPECT_TRUE(fs::exists(dir / "compare.csv"));
}

TEST(Experiment, SampledOutputIsByteIdenticalAcrossWorkerCounts) {
    const auto cfg = parse_config(R"({"name": "det", "p": 4, "n": 5, "marked": "0-6", "ordering": "desc",
      "method": "sampled", "trials": 4000, "seed": 99,
      "noise": {"d": 0.01, "register_scope": "both"}, "outputs": ["m_dist", "t_dist"]})");
    const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
    (void)run_experiment(cfg, a, 1);
    (void)run_experiment(cfg, b, 3);
    EXPECT_EQ(slurp(a / "m_dist.csv"), slurp(b / "m_dist.csv"));
    EXPECT_EQ(slurp(a / "t_dist.csv"), slurp(b / "t_dist.csv"));
    EXPECT_NEAR(testing::sum(read_distribution_file((a / "m_dist.csv").string()).values), 1.0, 1e-6);
}

std::vector<ProbDist> sweep_rows(const fs::path& file, std::size_t width) {
    std::ifstream is(file);
    std::string line;
    std::getline(is, line);
    std::vector<ProbDist> rows;
    while (std::getline(is, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        const auto m = std::stoul(line.substr(c1 + 1, c2 - c1 - 1));
        if (m == 0) rows.emplace_back();
        rows.back().push_back(std::stod(line.substr(c2 + 1)));
        EXPECT_LT(m, width);
    }
    return rows;
}

TEST(Sweep, LineAverageShowsPowerOfTwoSatellites) {
    const auto cfg = parse_config(R"({"p": 6, "n": 6, "marked": "0-4", "method": "analytic", "form": "prob-avg",
      "sweep": {"axis": "j", "values": [0, 1, 2, 3, 4, 5]}})");
    const auto dir = scratch_dir("sweep_j");
    (void)run_experiment(cfg, dir);
    const auto rows = sweep_rows(dir / "sweep.csv", 64);
    ASSERT_EQ(rows.size(), 7u);
    const double f = grover_angle(cfg.oracle()).frequency(6);
    EXPECT_LT(testing::max_diff(rows.back(), analytic::prob_first_register_line_average(6, f)), 1e-12);
    const auto& avg = rows.back();
    const auto local_max = [&](long m) {
        m = ((m % 64) + 64) % 64;
        return avg[m] >= avg[(m + 1) % 64] && avg[m] >= avg[(m + 63) % 64];
    };
    // Offsets 1 and 2 sit inside the main lobe at this P and do not form separate maxima.
    for (int off : {4, 8, 16, 32}) {
        for (double target : {f + off, f - off, 64 - f + off, 64 - f - off}) {
            const long c = std::lround(target);
            EXPECT_TRUE(local_max(c - 1) || local_max(c) || local_max(c + 1)) << "offset " << off << " target " << target;
        }
    }
}

TEST(Sweep, OrderingRowsAgreeForFirstRegisterEvents) {
    const auto cfg = load_config(std::string(QCOUNT_SOURCE_DIR) + "/configs/prop3_ordering.json");
    const auto dir = scratch_dir("sweep_ord");
    (void)run_experiment(cfg, dir);
    const auto rows = sweep_rows(dir / "sweep.csv", 64);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LT(testing::max_diff(rows[0], rows[1]), 1e-12);
}

TEST(Sweep, ZeroRateRowIsTheClosedForm) {
    const auto exact = parse_config(R"({"p": 5, "n": 5, "marked": "0-2", "method": "exact",
      "noise": {"d": 0.0, "register_scope": "first"}, "sweep": {"axis": "d", "values": [0.0]}})");
    const auto dir = scratch_dir("sweep_d");
    (void)run_experiment(exact, dir);
    const auto rows = sweep_rows(dir / "sweep.csv", 32);
    EXPECT_LT(testing::tv(rows[0], closed_form_noiseless(5, exact.oracle())), 1e-9);

    const auto sampled = parse_config(R"({"p": 5, "n": 5, "marked": "0-2", "method": "sampled", "trials": 20000,
      "seed": 4, "noise": {"d": 0.0, "register_scope": "first"}, "sweep": {"axis": "d", "values": [0.0, 0.02]}})");
    (void)run_experiment(sampled, dir);
    const auto srows = sweep_rows(dir / "sweep.csv", 32);
    ASSERT_EQ(srows.size(), 3u);
    EXPECT_LT(testing::tv(srows[0], closed_form_noiseless(5, exact.oracle())), 0.02);
    EXPECT_GT(testing::tv(srows[1], closed_form_noiseless(5, exact.oracle())), 0.05);
}

}  // namespace
}  // namespace qcount::harness
