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
 * Twist / encode / untwist echo sequences on the Dicke-basis engine, with
 * finite-difference linear response, optimal-angle search and sensitivity
 * reports.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "analytic.hpp"
#include "collective.hpp"
#include "errors.hpp"
#include "optimize.hpp"
#include "protocol_spec.hpp"

namespace qnnsense::protocol {

namespace detail {

inline MultiBlockState initial_state(const std::vector<BlockPlan> &plan) {
    MultiBlockState state;
    for (const auto &b : plan) {
        state.push_back(css_x(b.n_qubits));
    }
    return state;
}

inline void twist(MultiBlockState &state, const std::vector<BlockPlan> &plan,
                  std::size_t i, double theta) {
    if (plan[i].accel > 0) {
        state.set(i, apply_oat(state[i], theta, plan[i].accel));
    }
}

/// Sequence on an explicit plan; theta and phi are not range-checked here.
inline MultiBlockState execute(const std::vector<BlockPlan> &plan, Mode mode,
                               Axis axis, double theta, double phi) {
    MultiBlockState state = initial_state(plan);
    const std::size_t n = plan.size();
    // sequential: stage i twists layer i, steered by its neighbours
    for (std::size_t i = 0; i < n; ++i) {
        twist(state, plan, i, theta);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (plan[i].encoded) {
            state.set(i, apply_rotation(state[i], axis, phi));
        }
    }
    if (mode == Mode::Sequential) {
        // strict mirror: the last forward stage is undone first
        for (std::size_t i = n; i-- > 0;) {
            twist(state, plan, i, -theta);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            twist(state, plan, i, -theta);
        }
    }
    return state;
}

} // namespace detail

/// Runs the protocol without the phi guard (used for finite differences).
inline MultiBlockState run_unchecked(const ProtocolSpec &spec, double theta,
                                     double phi) {
    return detail::execute(block_plan(spec), spec.mode, spec.encoding_axis, theta,
                           phi);
}

inline MultiBlockState run(const ProtocolSpec &spec) {
    spec.validate();
    return run_unchecked(spec, spec.theta, spec.phi);
}

inline ProtocolSpec qrc_spec(std::size_t n, double theta, double phi,
                             Axis axis = Axis::Y) {
    ProtocolSpec s;
    s.arch = ArchitectureParams::qrc(n);
    s.theta = theta;
    s.phi = phi;
    s.encoding_axis = axis;
    return s;
}

inline ProtocolSpec perceptron_spec(std::size_t n_in, double theta, double phi) {
    ProtocolSpec s;
    s.arch = ArchitectureParams::perceptron(n_in);
    s.theta = theta;
    s.phi = phi;
    return s;
}

inline ProtocolSpec qnn2_spec(std::size_t n_in, std::size_t n_out, double theta,
                              double phi, Mode mode = Mode::Sequential,
                              Sensing sensing = Sensing::All) {
    ProtocolSpec s;
    s.arch = ArchitectureParams::qnn2(n_in, n_out);
    s.theta = theta;
    s.phi = phi;
    s.mode = mode;
    s.sensing = sensing;
    return s;
}

inline ProtocolSpec qnn_spec(std::size_t n_layers, std::size_t n_l, double theta,
                             double phi,
                             MultilayerModel model = MultilayerModel::StateEvolution) {
    ProtocolSpec s;
    s.arch = ArchitectureParams::qnn(n_layers, n_l);
    s.theta = theta;
    s.phi = phi;
    s.mode = Mode::Sequential;
    s.model = model;
    return s;
}

inline MultiBlockState run_qrc(std::size_t n, double theta, double phi) {
    if (n == 0) {
        throw DomainError("run_qrc: N >= 1 required");
    }
    return run(qrc_spec(n, theta, phi));
}

inline MultiBlockState run_perceptron(std::size_t n_in, double theta, double phi) {
    if (n_in == 0) {
        throw DomainError("run_perceptron: n_in >= 1 required");
    }
    return run(perceptron_spec(n_in, theta, phi));
}

inline MultiBlockState run_qnn_2layer(std::size_t n_in, std::size_t n_out,
                                      double theta, double phi, Mode mode) {
    if (n_in == 0 || n_out == 0) {
        throw DomainError("run_qnn_2layer: layer sizes must be >= 1");
    }
    return run(qnn2_spec(n_in, n_out, theta, phi, mode));
}

inline MultiBlockState run_qnn_L(std::size_t n_layers, std::size_t n_l,
                                 double theta, double phi,
                                 MultilayerModel model) {
    if (n_layers < 2 || n_l == 0) {
        throw DomainError("run_qnn_L: L >= 2 and N_l >= 1 required");
    }
    return run(qnn_spec(n_layers, n_l, theta, phi, model));
}

/// Collective readout: summed S_y over the read-out blocks of the plan.
inline double readout_sy(const ProtocolSpec &spec, const MultiBlockState &state) {
    const auto plan = block_plan(spec);
    if (plan.size() != state.size()) {
        throw StructuralError("readout_sy: state does not match protocol plan");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (plan[i].readout) {
            total += expectation(state[i], Axis::Y);
        }
    }
    return total;
}

inline double readout_variance_sy(const ProtocolSpec &spec,
                                  const MultiBlockState &state) {
    const auto plan = block_plan(spec);
    if (plan.size() != state.size()) {
        throw StructuralError("readout_variance_sy: state does not match plan");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (plan[i].readout) {
            total += variance(state[i], Axis::Y);
        }
    }
    return total;
}

struct LinearResponseOptions {
    double h = 1e-3;       ///< coarse step; the fine step is h / 2
    double stability = 1e-6;
};

struct LinearResponse {
    double deriv;   ///< Richardson-extrapolated slope per radian
    double coarse;  ///< central difference at h
    double fine;    ///< central difference at h / 2
    bool accuracy_warning;
};

/**
 * Central differences at h and h/2 combined by Richardson extrapolation.
 * The same extrapolation repeated one level finer (h/2, h/4) estimates the
 * error of the result; the warning flag is raised when the two disagree by
 * more than `stability` (relative).
 */
template <class F>
LinearResponse central_response(F &&signal, const LinearResponseOptions &opts = {}) {
    auto diff = [&](double h) { return (signal(h) - signal(-h)) / (2.0 * h); };
    const double d1 = diff(opts.h);
    const double d2 = diff(0.5 * opts.h);
    const double d3 = diff(0.25 * opts.h);
    if (!std::isfinite(d1) || !std::isfinite(d2) || !std::isfinite(d3)) {
        throw NumericError("linear_response: non-finite expectation value");
    }
    const double rich = (4.0 * d2 - d1) / 3.0;
    const double check = (4.0 * d3 - d2) / 3.0;
    const double scale = std::max(std::abs(rich), 1e-9);
    return {rich, d1, d2, std::abs(rich - check) > opts.stability * scale};
}

inline LinearResponse linear_response(const ProtocolSpec &spec,
                                      const LinearResponseOptions &opts = {}) {
    spec.validate();
    const auto plan = block_plan(spec);
    return central_response(
        [&](double phi) {
            const auto st = detail::execute(plan, spec.mode, spec.encoding_axis,
                                            spec.theta, phi);
            return readout_sy(spec, st);
        },
        opts);
}

struct ThetaOptimum {
    double theta_opt_numeric;
    double deriv_at_opt;
};

/// Default search interval: the first lobe (0, pi / (2 max_accel)).
inline std::pair<double, double> default_theta_range(const ProtocolSpec &spec) {
    return {0.0, std::numbers::pi / (2.0 * double(max_sensing_accel(spec)))};
}

/**
 * Golden-section maximisation of |linear_response| over theta. The theta
 * stored in the protocol is ignored. Raises BracketError when the best point sits on
 * the interval boundary.
 */
inline ThetaOptimum find_theta_opt(const ProtocolSpec &spec,
                                   std::optional<std::pair<double, double>> range = {},
                                   const LinearResponseOptions &opts = {}) {
    const auto [lo, hi] = range.value_or(default_theta_range(spec));
    const double limit = default_theta_range(spec).second;
    if (lo < 0.0 || hi > limit + 1e-15 || !(lo < hi)) {
        throw DomainError("find_theta_opt: range must lie inside (0, pi/(2 accel))");
    }
    ProtocolSpec probe = spec;
    probe.phi = 0.0;
    auto objective = [&](double t) {
        probe.theta = t;
        return std::abs(linear_response(probe, opts).deriv);
    };
    const auto best = maximize_scalar(objective, lo, hi, MaximizeOptions{1e-7, 48, true});
    probe.theta = best.argmax;
    return {best.argmax, linear_response(probe, opts).deriv};
}

struct SensitivityReport {
    double exp_sy;
    double var_sy0;
    double deriv_numeric;
    double deriv_analytic;
    double delta_phi_css;
    double delta_phi_paper;
    double theta_opt_numeric;
    double theta_opt_analytic;
    bool accuracy_warning;
    /// Which readout-spread convention the simulated variance reproduces.
    Convention supported_convention;
};

namespace detail {

inline double delta_phi_or_inf(double deriv, double spread) {
    // below this the slope is finite-difference noise
    if (std::abs(deriv) < 1e-10) {
        return std::numeric_limits<double>::infinity();
    }
    return analytic::sensitivity(deriv, spread);
}

} // namespace detail

/// Readout variance at phi = 0 on the physical layout.
inline double echo_variance(const ProtocolSpec &spec) {
    ProtocolSpec physical = spec;
    physical.model = MultilayerModel::StateEvolution;
    physical.phi = 0.0;
    return readout_variance_sy(physical, run(physical));
}

/// Optimum pair (numeric, analytic); NaN where a search has no interior
/// maximum or the closed form is degenerate.
struct OptimumPair {
    double numeric = std::numeric_limits<double>::quiet_NaN();
    double analytic = std::numeric_limits<double>::quiet_NaN();
};

inline OptimumPair optimum_pair(const ProtocolSpec &spec,
                                const LinearResponseOptions &fd = {}) {
    OptimumPair out;
    if (spec.encoding_axis != Axis::Y) {
        return out;
    }
    try {
        out.numeric = find_theta_opt(spec, std::nullopt, fd).theta_opt_numeric;
    } catch (const BracketError &) {
    }
    try {
        out.analytic = analytic::protocol_optimum(spec).argmax;
    } catch (const BracketError &) {
    } catch (const DomainError &) {
    }
    return out;
}

/// Report at spec.theta, reusing an already computed optimum pair.
inline SensitivityReport report_at(const ProtocolSpec &spec, const OptimumPair &opt,
                                   const LinearResponseOptions &fd = {}) {
    spec.validate();
    SensitivityReport r{};
    r.exp_sy = readout_sy(spec, run(spec));
    r.var_sy0 = echo_variance(spec);
    const auto lr = linear_response(spec, fd);
    r.deriv_numeric = lr.deriv;
    r.accuracy_warning = lr.accuracy_warning;
    r.deriv_analytic = analytic::protocol_derivative(spec, spec.theta);
    r.delta_phi_css = detail::delta_phi_or_inf(r.deriv_numeric, std::sqrt(r.var_sy0));
    r.delta_phi_paper = detail::delta_phi_or_inf(
        r.deriv_numeric, analytic::delta_sy0(sensing_qubits(spec), Convention::Paper));
    r.theta_opt_numeric = opt.numeric;
    r.theta_opt_analytic = opt.analytic;
    const double n = double(sensing_qubits(spec));
    r.supported_convention =
        std::abs(r.var_sy0 - n / 4.0) < 1e-9 ? Convention::Css : Convention::Paper;
    return r;
}

inline SensitivityReport full_report(const ProtocolSpec &spec) {
    return report_at(spec, optimum_pair(spec));
}

} // namespace qnnsense::protocol
