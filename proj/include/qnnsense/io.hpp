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
/**
 * @file
 * Experiment drivers behind the command-line tool: theta sweeps with CSV
 * output, architecture comparisons, effective-Hamiltonian validation and
 * the oracle cross-check, plus the number formatting that keeps their
 * output byte-stable.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include <json.hpp>

#include "analytic.hpp"
#include "errors.hpp"
#include "fullspace.hpp"
#include "protocol_spec.hpp"
#include "protocols.hpp"
#include "validation.hpp"

namespace qnnsense::io {

using json = nlohmann::json;

/// Shortest representation that parses back to the same double (at most 17
/// significant digits); non-finite values print as inf, -inf and nan.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw NumericError("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw UsageError("cannot parse number '" + std::string(s) + "'");
    }
    return v;
}

inline std::size_t parse_count(std::string_view s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw UsageError("cannot parse count '" + std::string(s) + "'");
    }
    return v;
}

/// JSON number, or null for non-finite values.
inline json json_number(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

// ---------------------------------------------------------------------------
// CSV rows

inline constexpr std::string_view kCsvHeader =
    "arch,L,n_in,n_out,n_l,theta,mode,model,exp_sy,var_sy0,deriv_numeric,"
    "deriv_analytic,delta_phi_css,delta_phi_paper";

struct ResultRow {
    std::string arch;
    std::size_t layers = 1;
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    std::size_t n_l = 0;
    double theta = 0.0;
    std::string mode;
    std::string model;
    double exp_sy = 0.0;
    double var_sy0 = 0.0;
    double deriv_numeric = 0.0;
    double deriv_analytic = 0.0;
    double delta_phi_css = 0.0;
    double delta_phi_paper = 0.0;
};

inline std::string to_csv_line(const ResultRow &r) {
    std::string s;
    s += r.arch + ',' + std::to_string(r.layers) + ',' + std::to_string(r.n_in) +
         ',' + std::to_string(r.n_out) + ',' + std::to_string(r.n_l) + ',' +
         format_double(r.theta) + ',' + r.mode + ',' + r.model + ',' +
         format_double(r.exp_sy) + ',' + format_double(r.var_sy0) + ',' +
         format_double(r.deriv_numeric) + ',' + format_double(r.deriv_analytic) +
         ',' + format_double(r.delta_phi_css) + ',' +
         format_double(r.delta_phi_paper);
    return s;
}

inline std::string to_csv(const std::vector<ResultRow> &rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto &r : rows) {
        out += to_csv_line(r);
        out += '\n';
    }
    return out;
}

inline std::vector<ResultRow> parse_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (header) {
            if (line != kCsvHeader) {
                throw UsageError("CSV header mismatch");
            }
            header = false;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> f;
        std::size_t p = 0;
        while (true) {
            const auto c = line.find(',', p);
            f.push_back(line.substr(p, c == std::string_view::npos ? line.size() - p
                                                                   : c - p));
            if (c == std::string_view::npos) {
                break;
            }
            p = c + 1;
        }
        if (f.size() != 14) {
            throw UsageError("CSV row has " + std::to_string(f.size()) + " fields");
        }
        ResultRow r;
        r.arch = std::string(f[0]);
        r.layers = parse_count(f[1]);
        r.n_in = parse_count(f[2]);
        r.n_out = parse_count(f[3]);
        r.n_l = parse_count(f[4]);
        r.theta = parse_double(f[5]);
        r.mode = std::string(f[6]);
        r.model = std::string(f[7]);
        r.exp_sy = parse_double(f[8]);
        r.var_sy0 = parse_double(f[9]);
        r.deriv_numeric = parse_double(f[10]);
        r.deriv_analytic = parse_double(f[11]);
        r.delta_phi_css = parse_double(f[12]);
        r.delta_phi_paper = parse_double(f[13]);
        rows.push_back(std::move(r));
    }
    if (header) {
        throw UsageError("CSV is empty");
    }
    return rows;
}

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << content;
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
}

inline std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepConfig {
    std::vector<ArchKind> archs{ArchKind::QRC};
    std::size_t n_in = 4;
    std::size_t n_out = 4;
    std::optional<std::size_t> n_total; ///< QRC size; defaults to n_in
    std::size_t layers = 2;
    std::optional<std::size_t> n_per_layer;
    double theta_min = 0.01;
    double theta_max = 0.5;
    std::size_t theta_steps = 50;
    double phi = 0.0;       ///< encoding angle at which exp_sy is reported
    double fd_step = 1e-3;  ///< coarse finite-difference step
    Mode mode = Mode::Sequential;
    MultilayerModel model = MultilayerModel::StateEvolution;
    Sensing sensing = Sensing::All;
    Axis encoding_axis = Axis::Y;
    Convention convention = Convention::Both;
    std::string out = "sweep.csv";
    std::size_t workers = 1;
    bool emit_gnuplot = false;

    void validate() const {
        if (archs.empty()) {
            throw UsageError("sweep: no architecture selected");
        }
        if (theta_steps < 2) {
            throw UsageError("sweep: --theta-steps must be >= 2");
        }
        if (!(theta_min < theta_max)) {
            throw UsageError("sweep: empty theta range (theta-min >= theta-max)");
        }
        if (theta_min < 0.0) {
            throw UsageError("sweep: theta-min must be >= 0");
        }
        if (workers < 1) {
            throw UsageError("sweep: --workers must be >= 1");
        }
        if (!(fd_step > 0.0)) {
            throw UsageError("sweep: finite-difference step must be > 0");
        }
    }

    /// Protocol for one architecture at theta = 0.
    [[nodiscard]] ProtocolSpec spec_for(ArchKind kind) const {
        ProtocolSpec s;
        s.phi = phi;
        s.encoding_axis = encoding_axis;
        switch (kind) {
        case ArchKind::QRC:
            s.arch = ArchitectureParams::qrc(n_total.value_or(n_in));
            break;
        case ArchKind::Perceptron:
            s.arch = ArchitectureParams::perceptron(n_in);
            break;
        case ArchKind::QNN:
            if (n_per_layer) {
                s.arch = ArchitectureParams::qnn(layers, *n_per_layer);
            } else if (layers == 2) {
                s.arch = ArchitectureParams::qnn2(n_in, n_out);
            } else {
                throw UsageError("sweep: --layers > 2 needs --n-per-layer");
            }
            s.mode = mode;
            s.model = model;
            s.sensing = sensing;
            break;
        }
        s.validate();
        return s;
    }
};

/// Applies a flat key/value JSON manifest whose keys mirror the long CLI
/// flags (without the leading dashes).
inline void apply_config_json(SweepConfig &cfg, const json &j) {
    if (!j.is_object()) {
        throw UsageError("config: expected a JSON object");
    }
    for (const auto &[key, v] : j.items()) {
        try {
            if (key == "arch") {
                cfg.archs.clear();
                if (v.is_array()) {
                    for (const auto &a : v) {
                        cfg.archs.push_back(parse_arch(a.get<std::string>()));
                    }
                } else {
                    cfg.archs.push_back(parse_arch(v.get<std::string>()));
                }
            } else if (key == "n-in") {
                cfg.n_in = v.get<std::size_t>();
            } else if (key == "n-out") {
                cfg.n_out = v.get<std::size_t>();
            } else if (key == "n-total") {
                cfg.n_total = v.get<std::size_t>();
            } else if (key == "layers") {
                cfg.layers = v.get<std::size_t>();
            } else if (key == "n-per-layer") {
                cfg.n_per_layer = v.get<std::size_t>();
            } else if (key == "theta-min") {
                cfg.theta_min = v.get<double>();
            } else if (key == "theta-max") {
                cfg.theta_max = v.get<double>();
            } else if (key == "theta-steps") {
                cfg.theta_steps = v.get<std::size_t>();
            } else if (key == "phi") {
                cfg.phi = v.get<double>();
            } else if (key == "fd-step") {
                cfg.fd_step = v.get<double>();
            } else if (key == "mode") {
                cfg.mode = parse_mode(v.get<std::string>());
            } else if (key == "model") {
                cfg.model = parse_model(v.get<std::string>());
            } else if (key == "sensing") {
                cfg.sensing = parse_sensing(v.get<std::string>());
            } else if (key == "axis") {
                cfg.encoding_axis = parse_axis(v.get<std::string>());
            } else if (key == "convention") {
                cfg.convention = parse_convention(v.get<std::string>());
            } else if (key == "out") {
                cfg.out = v.get<std::string>();
            } else if (key == "workers") {
                cfg.workers = v.get<std::size_t>();
            } else if (key == "emit-gnuplot") {
                cfg.emit_gnuplot = v.get<bool>();
            } else {
                throw UsageError("config: unknown key '" + key + "'");
            }
        } catch (const json::exception &e) {
            throw UsageError("config: bad value for '" + key + "': " + e.what());
        }
    }
}

inline ResultRow make_row(const ProtocolSpec &spec, const protocol::SensitivityReport &r) {
    ResultRow row;
    row.arch = std::string(to_string(spec.arch.kind));
    row.layers = spec.arch.n_layers();
    row.n_in = spec.arch.n_in();
    row.n_out = spec.arch.n_out();
    row.n_l = spec.arch.n_per_layer();
    row.theta = spec.theta;
    row.mode = std::string(to_string(spec.mode));
    row.model = std::string(to_string(spec.model));
    row.exp_sy = r.exp_sy;
    row.var_sy0 = r.var_sy0;
    row.deriv_numeric = r.deriv_numeric;
    row.deriv_analytic = r.deriv_analytic;
    row.delta_phi_css = r.delta_phi_css;
    row.delta_phi_paper = r.delta_phi_paper;
    return row;
}

struct SweepResult {
    std::vector<ResultRow> rows;
    json summary;
    std::string csv;
};

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F &&fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/**
 * Evaluates every (architecture, theta) grid point. Rows are sorted by
 * architecture name then theta, so the output is independent of the
 * worker count.
 */
inline SweepResult run_sweep(const SweepConfig &cfg) {
    cfg.validate();
    std::vector<ArchKind> archs = cfg.archs;
    std::sort(archs.begin(), archs.end(), [](ArchKind a, ArchKind b) {
        return to_string(a) < to_string(b);
    });
    archs.erase(std::unique(archs.begin(), archs.end()), archs.end());

    struct Job {
        ProtocolSpec spec;
        std::size_t arch_index;
    };
    const protocol::LinearResponseOptions fd{cfg.fd_step};
    std::vector<ProtocolSpec> bases;
    std::vector<protocol::OptimumPair> optima(archs.size());
    for (auto k : archs) {
        bases.push_back(cfg.spec_for(k));
    }
    parallel_for(archs.size(), cfg.workers,
                 [&](std::size_t i) { optima[i] = protocol::optimum_pair(bases[i], fd); });

    std::vector<Job> jobs;
    for (std::size_t a = 0; a < archs.size(); ++a) {
        for (std::size_t k = 0; k < cfg.theta_steps; ++k) {
            ProtocolSpec s = bases[a];
            s.theta = k + 1 == cfg.theta_steps
                          ? cfg.theta_max
                          : cfg.theta_min + (cfg.theta_max - cfg.theta_min) * double(k) /
                                                double(cfg.theta_steps - 1);
            jobs.push_back({s, a});
        }
    }
    std::vector<ResultRow> rows(jobs.size());
    parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
        const auto &job = jobs[i];
        rows[i] = make_row(job.spec, protocol::report_at(job.spec, optima[job.arch_index], fd));
    });

    SweepResult res;
    res.rows = rows;
    res.csv = to_csv(rows);

    json archs_json = json::array();
    for (std::size_t a = 0; a < archs.size(); ++a) {
        const auto begin = rows.begin() + std::ptrdiff_t(a * cfg.theta_steps);
        const auto end = begin + std::ptrdiff_t(cfg.theta_steps);
        const auto peak = std::max_element(begin, end, [](const auto &x, const auto &y) {
            return std::abs(x.deriv_numeric) < std::abs(y.deriv_numeric);
        });
        json entry;
        entry["arch"] = std::string(to_string(archs[a]));
        entry["layers"] = bases[a].arch.layers;
        entry["theta_opt_numeric"] = json_number(optima[a].numeric);
        entry["theta_opt_analytic"] = json_number(optima[a].analytic);
        if (std::isfinite(optima[a].numeric)) {
            ProtocolSpec at = bases[a];
            at.theta = optima[a].numeric;
            at.phi = 0.0;
            entry["peak_deriv_numeric"] = json_number(protocol::linear_response(at, fd).deriv);
            entry["peak_deriv_analytic"] =
                json_number(analytic::protocol_derivative(at, at.theta));
        } else {
            entry["peak_deriv_numeric"] = nullptr;
            entry["peak_deriv_analytic"] = nullptr;
        }
        json grid;
        grid["theta"] = json_number(peak->theta);
        grid["deriv_numeric"] = json_number(peak->deriv_numeric);
        grid["deriv_analytic"] = json_number(peak->deriv_analytic);
        if (cfg.convention != Convention::Paper) {
            grid["delta_phi_css"] = json_number(peak->delta_phi_css);
        }
        if (cfg.convention != Convention::Css) {
            grid["delta_phi_paper"] = json_number(peak->delta_phi_paper);
        }
        entry["grid_peak"] = grid;
        archs_json.push_back(entry);
    }
    res.summary["architectures"] = archs_json;
    res.summary["convention"] = std::string(to_string(cfg.convention));
    res.summary["rows"] = rows.size();
    res.summary["csv"] = cfg.out;
    return res;
}

/// gnuplot script plotting the slope against theta for every architecture.
inline std::string gnuplot_script(const SweepConfig &cfg, const SweepResult &res) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set xlabel 'theta (rad)'\n";
    s += "set ylabel 'd<S_y>/dphi'\n";
    s += "plot ";
    bool first = true;
    for (const auto &a : res.summary["architectures"]) {
        const auto name = a["arch"].get<std::string>();
        if (!first) {
            s += ", \\\n     ";
        }
        first = false;
        s += "'" + cfg.out + "' using (stringcolumn(1) eq '" + name +
             "' ? $6 : 1/0):11 with linespoints title '" + name + "'";
    }
    s += "\n";
    return s;
}

inline SweepResult cmd_sweep(const SweepConfig &cfg) {
    auto res = run_sweep(cfg);
    write_file(cfg.out, res.csv);
    write_file(cfg.out + ".json", res.summary.dump(2) + "\n");
    if (cfg.emit_gnuplot) {
        write_file(cfg.out + ".gp", gnuplot_script(cfg, res));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Architecture comparison

namespace detail {

inline double rel_gap(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

/// Numeric and closed-form figures of one architecture at its optimum.
inline json optimum_entry(const ProtocolSpec &base, double &gap) {
    json e;
    const auto num = protocol::find_theta_opt(base);
    const auto ana = analytic::protocol_optimum(base);
    ProtocolSpec at = base;
    at.theta = num.theta_opt_numeric;
    const double var0 = protocol::echo_variance(base);
    const auto n = sensing_qubits(base);
    const double d_num = num.deriv_at_opt;
    const double d_ana = ana.value;
    e["theta_opt_numeric"] = num.theta_opt_numeric;
    e["theta_opt_analytic"] = ana.argmax;
    e["deriv_numeric_at_opt"] = d_num;
    e["deriv_analytic_at_opt"] = d_ana;
    e["var_sy0"] = var0;
    e["delta_phi_css_numeric"] = analytic::sensitivity(d_num, std::sqrt(var0));
    e["delta_phi_css_analytic"] =
        analytic::sensitivity(d_ana, analytic::delta_sy0(n, Convention::Css));
    e["delta_phi_paper_numeric"] =
        analytic::sensitivity(d_num, analytic::delta_sy0(n, Convention::Paper));
    e["delta_phi_paper_analytic"] =
        analytic::sensitivity(d_ana, analytic::delta_sy0(n, Convention::Paper));
    gap = std::max({gap, rel_gap(std::abs(d_num), d_ana),
                    rel_gap(e["delta_phi_css_numeric"].get<double>(),
                            e["delta_phi_css_analytic"].get<double>()),
                    rel_gap(var0, double(n) / 4.0)});
    return e;
}

} // namespace detail

/**
 * QRC of n_total qubits against an L-layer network of n_total / L qubits
 * per layer, each at its own optimum, under both readout conventions and
 * (for L >= 2) both multilayer models.
 */
inline json cmd_compare(std::size_t n_total, std::size_t n_layers) {
    if (n_layers < 2 || n_total == 0) {
        throw UsageError("compare: L >= 2 and n_total >= 1 required");
    }
    if (n_total % n_layers != 0) {
        throw UsageError("compare: n_total = " + std::to_string(n_total) +
                         " is not divisible by L = " + std::to_string(n_layers));
    }
    const std::size_t n_l = n_total / n_layers;
    if (n_l < 3) {
        // a two-qubit layer responds as sin(2 theta): no interior optimum
        throw UsageError("compare: need at least 3 qubits per layer, got " +
                         std::to_string(n_l));
    }
    double gap = 0.0;
    json out;
    out["n_total"] = n_total;
    out["layers"] = n_layers;
    out["n_per_layer"] = n_l;

    const auto qrc = protocol::qrc_spec(n_total, 0, 0);
    const json qrc_entry = detail::optimum_entry(qrc, gap);
    out["qrc"] = qrc_entry;

    const auto qrc_layer = protocol::qrc_spec(n_l, 0, 0);
    const double theta_layer_qrc =
        n_layers == 1 ? qrc_entry["theta_opt_numeric"].get<double>()
                      : protocol::find_theta_opt(qrc_layer).theta_opt_numeric;

    json models = json::object();
    const std::vector<MultilayerModel> kinds =
        n_layers == 1 ? std::vector<MultilayerModel>{MultilayerModel::StateEvolution}
                      : std::vector<MultilayerModel>{MultilayerModel::StateEvolution,
                                                     MultilayerModel::EventAdditive};
    for (auto model : kinds) {
        json entry = n_layers == 1
                         ? qrc_entry
                         : detail::optimum_entry(
                               protocol::qnn_spec(n_layers, n_l, 0, 0, model), gap);
        const double dq = entry["deriv_numeric_at_opt"].get<double>();
        const double dr = qrc_entry["deriv_numeric_at_opt"].get<double>();
        json ratios;
        ratios["delta_phi_ratio_css"] =
            entry["delta_phi_css_numeric"].get<double>() /
            qrc_entry["delta_phi_css_numeric"].get<double>();
        ratios["delta_phi_ratio_paper"] =
            entry["delta_phi_paper_numeric"].get<double>() /
            qrc_entry["delta_phi_paper_numeric"].get<double>();
        ratios["delta_phi_ratio_analytic"] =
            entry["delta_phi_css_analytic"].get<double>() /
            qrc_entry["delta_phi_css_analytic"].get<double>();
        ratios["derivative_ratio"] = std::abs(dq) / std::abs(dr);
        if (n_layers >= 2) {
            ratios["paper_expression"] =
                analytic::paper_ratio_expression(n_layers, n_l);
            ratios["paper_approximation"] = 1.0 / std::sqrt(double(n_layers));
        } else {
            ratios["paper_expression"] = nullptr;
            ratios["paper_approximation"] = 1.0;
        }
        gap = std::max(gap, detail::rel_gap(ratios["delta_phi_ratio_css"].get<double>(),
                                            ratios["delta_phi_ratio_analytic"].get<double>()));
        const double theta_qnn = entry["theta_opt_numeric"].get<double>();
        json time;
        time["vs_layer_qrc"] = theta_layer_qrc / theta_qnn;
        time["vs_total_qrc"] = qrc_entry["theta_opt_numeric"].get<double>() / theta_qnn;
        entry["ratios"] = ratios;
        entry["time_reduction"] = time;
        models[std::string(to_string(model))] = entry;
    }
    out["qnn"] = models;

    if (n_layers == 2 && n_total <= 12) {
        // joint-register two-stage echo without the block-local assumption
        const double theta = models["state-evolution"]["theta_opt_numeric"].get<double>();
        const auto lr = protocol::central_response([&](double phi) {
            return oracle::operator_level_sequential_sy(n_l, n_l, theta, phi);
        });
        json seq;
        seq["theta"] = theta;
        seq["deriv_block_local"] = analytic::total_derivative_2layer(n_l, n_l, theta);
        seq["deriv_operator_level"] = lr.deriv;
        out["sequential_operator_level"] = seq;
    }
    out["max_pipeline_gap"] = gap;
    return out;
}

// ---------------------------------------------------------------------------
// Effective Hamiltonian validation

inline json cmd_validate_effective(std::size_t n_in, std::size_t n_out, double J,
                                   const std::vector<double> &omegas, double t) {
    if (n_in == 0 || n_out == 0) {
        throw UsageError("validate-effective: n_in and n_out must be >= 1");
    }
    if (omegas.empty()) {
        throw UsageError("validate-effective: no Omega values given");
    }
    oracle::check_size(n_in + n_out, oracle::kMaxQubits, "validate-effective");
    json rows = json::array();
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double omega : omegas) {
        const auto fit = oracle::fit_effective_chi(n_in, n_out, J, omega, t);
        const double half = fit.candidates[0].fidelity;
        const double twice = fit.candidates[1].fidelity;
        json row;
        row["omega"] = omega;
        row["omega_over_J"] = json_number(omega / J);
        row["chi_2J2_over_Omega"] = fit.candidates[1].chi;
        row["infidelity"] = 1.0 - twice;
        row["infidelity_half_conversion"] = 1.0 - half;
        row["best_fit_chi"] = fit.best_chi;
        row["best_fit_chi_over_J2_per_Omega"] =
            J == 0.0 ? json(nullptr) : json(fit.best_chi * omega / (J * J));
        row["best_fit_infidelity"] = 1.0 - fit.best_fidelity;
        row["preferred_conversion"] = twice >= half ? fit.candidates[1].label
                                                    : fit.candidates[0].label;
        const double inf = 1.0 - twice;
        if (inf > prev) {
            monotone = false;
        }
        prev = inf;
        rows.push_back(row);
    }
    json out;
    out["n_in"] = n_in;
    out["n_out"] = n_out;
    out["J"] = J;
    out["t"] = t;
    out["frame"] = "toggling";
    out["rows"] = rows;
    out["monotone_decreasing"] = monotone;
    return out;
}

// ---------------------------------------------------------------------------
// Oracle cross-check

inline json to_json(const validation::OracleCheckReport &rep) {
    json checks = json::array();
    for (const auto &c : rep.checks) {
        json j;
        j["name"] = c.name;
        j["passed"] = c.passed;
        j["max_error"] = json_number(c.max_error);
        j["cases"] = c.cases;
        if (!c.passed) {
            j["first_failure"] = c.detail;
        }
        checks.push_back(j);
    }
    json out;
    out["checks"] = checks;
    out["passed"] = rep.all_passed();
    out["tolerance"] = validation::kOracleTolerance;
    return out;
}

} // namespace qnnsense::io
