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

// Command-line front end: sweep, compare, validate-effective, oracle-check.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnnsense/errors.hpp"
#include "qnnsense/io.hpp"
#include "qnnsense/validation.hpp"

namespace {

using qnnsense::ExitStatus;
using qnnsense::io::json;

int to_int(ExitStatus s) { return static_cast<int>(s); }

struct SweepFlags {
    std::vector<std::string> arch;
    std::size_t n_in = 0, n_out = 0, n_total = 0, layers = 0, n_per_layer = 0;
    double theta_min = 0, theta_max = 0, phi = 0, fd_step = 0;
    std::size_t theta_steps = 0, workers = 0;
    std::string mode, model, sensing, axis, convention, out, config;
    bool emit_gnuplot = false;
};

qnnsense::io::SweepConfig resolve_sweep(CLI::App &cmd, const SweepFlags &f) {
    using namespace qnnsense;
    io::SweepConfig cfg;
    if (!f.config.empty()) {
        json j;
        try {
            j = json::parse(io::read_file(f.config));
        } catch (const json::exception &e) {
            throw UsageError(std::string("config: ") + e.what());
        }
        io::apply_config_json(cfg, j);
    }
    auto given = [&](const char *name) { return cmd.count(name) > 0; };
    if (given("--arch")) {
        cfg.archs.clear();
        for (const auto &a : f.arch) {
            cfg.archs.push_back(parse_arch(a));
        }
    }
    if (given("--n-in")) cfg.n_in = f.n_in;
    if (given("--n-out")) cfg.n_out = f.n_out;
    if (given("--n-total")) cfg.n_total = f.n_total;
    if (given("--layers")) cfg.layers = f.layers;
    if (given("--n-per-layer")) cfg.n_per_layer = f.n_per_layer;
    if (given("--theta-min")) cfg.theta_min = f.theta_min;
    if (given("--theta-max")) cfg.theta_max = f.theta_max;
    if (given("--theta-steps")) cfg.theta_steps = f.theta_steps;
    if (given("--phi")) cfg.phi = f.phi;
    if (given("--fd-step")) cfg.fd_step = f.fd_step;
    if (given("--mode")) cfg.mode = parse_mode(f.mode);
    if (given("--model")) cfg.model = parse_model(f.model);
    if (given("--sensing")) cfg.sensing = parse_sensing(f.sensing);
    if (given("--axis")) cfg.encoding_axis = parse_axis(f.axis);
    if (given("--convention")) cfg.convention = parse_convention(f.convention);
    if (given("--out")) cfg.out = f.out;
    if (given("--workers")) cfg.workers = f.workers;
    if (given("--emit-gnuplot")) cfg.emit_gnuplot = f.emit_gnuplot;
    return cfg;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Squeezing-based field sensing on structured qubit networks"};
    app.require_subcommand(1);

    SweepFlags sf;
    auto *sweep = app.add_subcommand("sweep", "theta sweep of echo sensitivity to CSV");
    sweep->add_option("--arch", sf.arch, "qrc | perceptron | qnn (comma separated)")
        ->delimiter(',');
    sweep->add_option("--n-in", sf.n_in, "input-layer size (QRC size by default)");
    sweep->add_option("--n-out", sf.n_out, "output-layer size");
    sweep->add_option("--n-total", sf.n_total, "QRC size");
    sweep->add_option("--layers", sf.layers, "number of QNN layers");
    sweep->add_option("--n-per-layer", sf.n_per_layer, "uniform QNN layer size");
    sweep->add_option("--theta-min", sf.theta_min);
    sweep->add_option("--theta-max", sf.theta_max);
    sweep->add_option("--theta-steps", sf.theta_steps);
    sweep->add_option("--phi", sf.phi, "encoding angle for the exp_sy column");
    sweep->add_option("--fd-step", sf.fd_step, "coarse finite-difference step");
    sweep->add_option("--mode", sf.mode, "sequential | simultaneous");
    sweep->add_option("--model", sf.model, "state-evolution | event-additive");
    sweep->add_option("--sensing", sf.sensing, "all | input");
    sweep->add_option("--axis", sf.axis, "encoding axis y | z");
    sweep->add_option("--convention", sf.convention, "paper | css | both");
    sweep->add_option("--out", sf.out, "CSV path; summary goes to PATH.json");
    sweep->add_option("--workers", sf.workers, "worker threads");
    sweep->add_option("--config", sf.config, "JSON manifest; flags override it");
    sweep->add_flag("--emit-gnuplot", sf.emit_gnuplot, "also write PATH.gp");

    std::size_t cmp_total = 16, cmp_layers = 2;
    auto *compare = app.add_subcommand("compare", "QRC vs layered network at optimum");
    compare->add_option("--n-total", cmp_total, "total qubits")->required();
    compare->add_option("--layers", cmp_layers, "number of layers")->required();

    std::size_t ve_in = 2, ve_out = 1;
    double ve_j = 1.0, ve_t = 0.2;
    std::vector<double> ve_omega{20.0, 40.0, 80.0, 160.0};
    auto *validate =
        app.add_subcommand("validate-effective", "driven network vs effective twist");
    validate->add_option("--n-in", ve_in);
    validate->add_option("--n-out", ve_out);
    validate->add_option("--J", ve_j, "ZZ coupling");
    validate->add_option("--omega", ve_omega, "drive amplitudes (comma separated)")
        ->delimiter(',');
    validate->add_option("--t", ve_t, "evolution time");

    qnnsense::validation::OracleCheckOptions oc;
    auto *check = app.add_subcommand("oracle-check", "Dicke engine vs full register");
    check->add_option("--max-qubits", oc.max_qubits);
    check->add_option("--samples", oc.samples, "random (theta, phi) pairs per case");
    check->add_option("--seed", oc.seed);
    check->add_flag("--inject-fault", oc.inject_fault,
                    "corrupt the Dicke state to exercise the failure path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : to_int(ExitStatus::Usage);
    }

    try {
        if (*sweep) {
            const auto cfg = resolve_sweep(*sweep, sf);
            const auto res = qnnsense::io::cmd_sweep(cfg);
            std::cout << res.summary.dump(2) << "\n";
        } else if (*compare) {
            std::cout << qnnsense::io::cmd_compare(cmp_total, cmp_layers).dump(2) << "\n";
        } else if (*validate) {
            std::cout << qnnsense::io::cmd_validate_effective(ve_in, ve_out, ve_j,
                                                              ve_omega, ve_t)
                             .dump(2)
                      << "\n";
        } else if (*check) {
            const auto rep = qnnsense::validation::oracle_check(oc);
            std::cout << qnnsense::io::to_json(rep).dump(2) << "\n";
            if (!rep.all_passed()) {
                for (const auto &c : rep.checks) {
                    if (!c.passed) {
                        std::cerr << "FAILED " << c.name << ": " << c.detail << "\n";
                    }
                }
                return to_int(ExitStatus::CheckFailed);
            }
        }
    } catch (const qnnsense::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return to_int(e.status());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return to_int(ExitStatus::Numeric);
    }
    return 0;
}
