// Copyright 2026 The qnnsense Authors
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


#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "qnnsense/io.hpp"

using namespace qnnsense;
using namespace qnnsense::io;

namespace {

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.archs = {ArchKind::QNN, ArchKind::QRC, ArchKind::Perceptron};
    cfg.n_in = 4;
    cfg.n_out = 3;
    cfg.theta_min = 0.02;
    cfg.theta_max = 0.3;
    cfg.theta_steps = 7;
    return cfg;
}

} // namespace

TEST(Numbers, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0, 123456789.125}) {
        EXPECT_EQ(parse_double(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_TRUE(std::isnan(parse_double(format_double(std::nan("")))));
    EXPECT_THROW(parse_double("1.5x"), UsageError);
    EXPECT_THROW(parse_count("-3"), UsageError);
    EXPECT_TRUE(json_number(std::nan("")).is_null());
}

TEST(Csv, HeaderAndRoundTrip) {
    const auto res = run_sweep(small_config());
    EXPECT_EQ(res.rows.size(), 21u);
    EXPECT_EQ(res.csv.substr(0, kCsvHeader.size()), kCsvHeader);
    const auto parsed = parse_csv(res.csv);
    EXPECT_EQ(to_csv(parsed), res.csv);
    ASSERT_EQ(parsed.size(), res.rows.size());
    EXPECT_EQ(parsed[3].theta, res.rows[3].theta);
    EXPECT_EQ(parsed.front().arch, "perceptron");
    EXPECT_EQ(parsed.back().arch, "qrc");
}

TEST(Csv, NonFiniteFieldsSurvive) {
    ResultRow r;
    r.arch = "qrc";
    r.mode = "simultaneous";
    r.model = "state-evolution";
    r.delta_phi_css = std::numeric_limits<double>::infinity();
    r.delta_phi_paper = std::numeric_limits<double>::infinity();
    const std::string text = to_csv({r});
    EXPECT_EQ(to_csv(parse_csv(text)), text);
}

TEST(Csv, MalformedInput) {
    EXPECT_THROW(parse_csv("a,b\n1,2\n"), UsageError);
    const std::string bad = std::string(kCsvHeader) + "\nqrc,1,2\n";
    EXPECT_THROW(parse_csv(bad), UsageError);
}

TEST(Sweep, DeterministicAcrossWorkers) {
    auto cfg = small_config();
    const auto a = run_sweep(cfg);
    const auto b = run_sweep(cfg);
    cfg.workers = 3;
    const auto c = run_sweep(cfg);
    EXPECT_EQ(a.csv, b.csv);
    EXPECT_EQ(a.csv, c.csv);
    EXPECT_EQ(a.summary.dump(), c.summary.dump());
}

TEST(Sweep, GridEndpointsAndSummary) {
    SweepConfig cfg;
    cfg.n_in = 3;
    cfg.theta_min = 0.1;
    cfg.theta_max = 0.7;
    cfg.theta_steps = 2;
    const auto res = run_sweep(cfg);
    ASSERT_EQ(res.rows.size(), 2u);
    EXPECT_EQ(res.rows[0].theta, 0.1);
    EXPECT_EQ(res.rows[1].theta, 0.7);
    const auto &q = res.summary["architectures"][0];
    EXPECT_NEAR(q["theta_opt_analytic"].get<double>(), std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(q["theta_opt_numeric"].get<double>(), std::numbers::pi / 4, 1e-6);
    EXPECT_EQ(q["grid_peak"]["theta"].get<double>(), 0.7);
}

TEST(Sweep, InvalidRanges) {
    SweepConfig cfg;
    cfg.theta_min = 0.5;
    cfg.theta_max = 0.5;
    EXPECT_THROW(run_sweep(cfg), UsageError);
    cfg.theta_max = 0.6;
    cfg.theta_steps = 1;
    EXPECT_THROW(run_sweep(cfg), UsageError);
    SweepConfig qnn;
    qnn.archs = {ArchKind::QNN};
    qnn.layers = 3;
    EXPECT_THROW(run_sweep(qnn), UsageError);
}

TEST(Sweep, ConfigManifest) {
    SweepConfig cfg;
    apply_config_json(cfg, json::parse(R"({"arch": ["qnn"], "n-in": 5, "theta-steps": 9,
                                           "mode": "simultaneous", "axis": "z"})"));
    ASSERT_EQ(cfg.archs.size(), 1u);
    EXPECT_EQ(cfg.archs[0], ArchKind::QNN);
    EXPECT_EQ(cfg.n_in, 5u);
    EXPECT_EQ(cfg.theta_steps, 9u);
    EXPECT_EQ(cfg.mode, Mode::Simultaneous);
    EXPECT_EQ(cfg.encoding_axis, Axis::Z);
    EXPECT_THROW(apply_config_json(cfg, json::parse(R"({"bogus": 1})")), UsageError);
    EXPECT_THROW(apply_config_json(cfg, json::parse(R"({"n-in": "x"})")), UsageError);
}

TEST(Sweep, WritesFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "qnnsense_io_test";
    std::filesystem::create_directories(dir);
    auto cfg = small_config();
    cfg.out = (dir / "s.csv").string();
    cfg.emit_gnuplot = true;
    const auto res = cmd_sweep(cfg);
    EXPECT_EQ(read_file(cfg.out), res.csv);
    EXPECT_TRUE(std::filesystem::exists(cfg.out + ".json"));
    EXPECT_TRUE(std::filesystem::exists(cfg.out + ".gp"));
    std::filesystem::remove_all(dir);
    EXPECT_THROW(write_file("/nonexistent-dir/x.csv", "x"), IoError);
    EXPECT_THROW(read_file("/nonexistent-dir/x.csv"), IoError);
}

TEST(Compare, SharedQuantitiesAgree) {
    const auto j = cmd_compare(16, 2);
    EXPECT_LT(j["max_pipeline_gap"].get<double>(), 1e-6);
    EXPECT_FALSE(j.contains("sequential_operator_level"));
    EXPECT_TRUE(cmd_compare(6, 2).contains("sequential_operator_level"));
    EXPECT_THROW(cmd_compare(15, 2), UsageError);
    EXPECT_THROW(cmd_compare(4, 2), UsageError);
    EXPECT_THROW(cmd_compare(8, 1), UsageError);
    EXPECT_EQ(cmd_compare(16, 4).dump(), cmd_compare(16, 4).dump());
}

TEST(Effective, ReportShape) {
    const auto j = cmd_validate_effective(2, 1, 1.0, {20.0, 40.0}, 0.2);
    EXPECT_TRUE(j["monotone_decreasing"].get<bool>());
    EXPECT_THROW(cmd_validate_effective(2, 1, 1.0, {}, 0.2), UsageError);
}
