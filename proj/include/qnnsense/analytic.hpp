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
 * Closed-form linear-response slopes, optimal twist angles, readout
 * uncertainties and architecture comparisons for the twist-encode-untwist
 * echo read out along S_y.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "optimize.hpp"
#include "protocol_spec.hpp"

namespace qnnsense::analytic {

/// Principal arccot on (0, pi/2] for x >= 0.
inline double arccot(double x) { return std::atan2(1.0, x); }

/**
 * Echo slope of one block of N qubits after an effective twist angle
 * theta_eff: (N/2)(N-1) sin(theta_eff) cos^{N-2}(theta_eff).
 */
inline double d_single(std::size_t n, double theta_eff) {
    if (n < 2) {
        throw DomainError("d_single: N >= 2 required, got N = " + std::to_string(n));
    }
    const double N = double(n);
    return 0.5 * N * (N - 1.0) * std::sin(theta_eff) *
           std::pow(std::cos(theta_eff), N - 2.0);
}

/// Slope of one block including the degenerate single-qubit block, whose
/// twist is a global phase and whose slope is therefore zero.
inline double block_derivative(std::size_t n, double theta_eff) {
    return n < 2 ? 0.0 : d_single(n, theta_eff);
}

/// Input-block slope when the n_out outputs accelerate the twist.
inline double d_in(std::size_t n_in, std::size_t n_out, double theta) {
    return d_single(n_in, double(n_out) * theta);
}

/// Output-block slope when the n_in inputs accelerate the twist.
inline double d_out(std::size_t n_in, std::size_t n_out, double theta) {
    return d_single(n_out, double(n_in) * theta);
}

/// Sequential two-layer slope, the sum of the two block contributions.
inline double total_derivative_2layer(std::size_t n_in, std::size_t n_out,
                                      double theta) {
    return block_derivative(n_in, double(n_out) * theta) +
           block_derivative(n_out, double(n_in) * theta);
}

/// Optimal twist arccot(sqrt(N-2)) / accel.
inline double theta_opt(std::size_t n, unsigned accel = 1) {
    if (n < 3) {
        throw DomainError("theta_opt: arccot(sqrt(N-2)) is degenerate for N = " +
                          std::to_string(n) + " (need N >= 3)");
    }
    if (accel == 0) {
        throw DomainError("theta_opt: acceleration must be >= 1");
    }
    return arccot(std::sqrt(double(n) - 2.0)) / double(accel);
}

/// Optimal squeezing strength Q = N theta_opt.
inline double q_opt(std::size_t n) { return double(n) * theta_opt(n, 1); }

/// Peak of d_single over theta, attained at arccot(sqrt(N-2)).
inline double d_single_peak(std::size_t n) {
    return d_single(n, theta_opt(n, 1));
}

/// Readout spread of S_y at phi = 0 for n uncorrelated x-polarised qubits.
/// Convention::Paper gives sqrt(n/2); Convention::Css gives the exact
/// coherent-state value sqrt(n)/2.
inline double delta_sy0(std::size_t n_total, Convention convention) {
    switch (convention) {
    case Convention::Paper:
        return std::sqrt(double(n_total) / 2.0);
    case Convention::Css:
        return std::sqrt(double(n_total)) / 2.0;
    case Convention::Both:
        break;
    }
    throw UsageError("delta_sy0: pick a single convention");
}

/// Error-propagation sensitivity delta_sy / |d<S_y>/dphi|.
inline double sensitivity(double deriv, double delta_sy) {
    if (deriv == 0.0 || !std::isfinite(deriv)) {
        throw NumericError("sensitivity: undefined for response slope " +
                           std::to_string(deriv));
    }
    return delta_sy / std::abs(deriv);
}

/**
 * Slope of the uniform L-layer network. Event-additive scores 2(L-1)
 * independent twist events at angle n_l theta; state-evolution gives the
 * edge layers a single twist and interior layers a doubled one.
 */
inline double multilayer_derivative(std::size_t n_layers, std::size_t n_l,
                                    double theta, MultilayerModel model) {
    if (n_layers < 2) {
        throw DomainError("multilayer_derivative: L >= 2 required");
    }
    if (n_l < 2) {
        throw DomainError("multilayer_derivative: N_l >= 2 required");
    }
    const double base = double(n_l) * theta;
    if (model == MultilayerModel::EventAdditive) {
        return 2.0 * double(n_layers - 1) * d_single(n_l, base);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n_layers; ++i) {
        const bool edge = i == 0 || i + 1 == n_layers;
        total += d_single(n_l, (edge ? 1.0 : 2.0) * base);
    }
    return total;
}

/**
 * Closed-form slope of any protocol: the sum of block slopes over the
 * encoded, read-out blocks of its plan. Encoding about z commutes with the
 * twist, leaving the untwisted response <S_x> = n/2 per block.
 */
inline double protocol_derivative(const ProtocolSpec &spec, double theta) {
    double total = 0.0;
    for (const auto &b : block_plan(spec)) {
        if (!b.encoded || !b.readout) {
            continue;
        }
        switch (spec.encoding_axis) {
        case Axis::Y:
            total += block_derivative(b.n_qubits, double(b.accel) * theta);
            break;
        case Axis::Z:
            total += 0.5 * double(b.n_qubits);
            break;
        case Axis::X:
            break; // x rotations leave the x-polarised echo invariant
        }
    }
    return total;
}

/**
 * Maximiser of |protocol_derivative| over the first lobe
 * (0, pi / (2 max_accel)). When every sensing block shares one size and
 * acceleration the closed form arccot(sqrt(N-2)) / accel is returned.
 */
inline Maximum protocol_optimum(const ProtocolSpec &spec) {
    const auto plan = block_plan(spec);
    std::size_t n = 0;
    unsigned accel = 0;
    bool uniform = true;
    for (const auto &b : plan) {
        if (!b.readout) {
            continue;
        }
        if (n == 0) {
            n = b.n_qubits;
            accel = b.accel;
        } else if (b.n_qubits != n || b.accel != accel) {
            uniform = false;
        }
    }
    if (spec.encoding_axis != Axis::Y) {
        throw DomainError("protocol_optimum: slope is independent of theta "
                          "unless the encoding axis is y");
    }
    if (uniform && n >= 3 && accel >= 1) {
        const double t = theta_opt(n, accel);
        return {t, std::abs(protocol_derivative(spec, t))};
    }
    const double hi = std::numbers::pi / (2.0 * double(max_sensing_accel(spec)));
    return maximize_scalar(
        [&](double t) { return std::abs(protocol_derivative(spec, t)); }, 0.0, hi,
        MaximizeOptions{1e-10, 256, true});
}

/// Side-by-side comparison of the L-layer network against a QRC of the
/// same total size L * n_l, each at its own optimal twist.
struct RatioReport {
    std::size_t n_layers;
    std::size_t n_per_layer;
    MultilayerModel model;
    double theta_opt_qnn;
    double theta_opt_qrc;
    double peak_qnn;       ///< max slope of the layered network
    double peak_qrc;       ///< max slope of the QRC
    double delta_phi_qnn;  ///< under the requested convention
    double delta_phi_qrc;
    double formula_ratio;  ///< delta_phi_qnn / delta_phi_qrc
    double derivative_ratio; ///< peak_qnn / peak_qrc
    double paper_expression; ///< sqrt(L) / (1 - (N_l + L) / (N_l L + 1))
    double paper_approximation; ///< 1 / sqrt(L)
};

inline double paper_ratio_expression(std::size_t n_layers, std::size_t n_l) {
    const double L = double(n_layers);
    const double N = double(n_l);
    return std::sqrt(L) / (1.0 - (N + L) / (N * L + 1.0));
}

inline RatioReport ratio_qnn_qrc(std::size_t n_layers, std::size_t n_l,
                                 Convention convention = Convention::Css,
                                 MultilayerModel model =
                                     MultilayerModel::StateEvolution) {
    if (n_layers < 2) {
        throw DomainError("ratio_qnn_qrc: L >= 2 required");
    }
    if (convention == Convention::Both) {
        convention = Convention::Css;
    }
    ProtocolSpec qnn;
    qnn.arch = ArchitectureParams::qnn(n_layers, n_l);
    qnn.mode = Mode::Sequential;
    qnn.model = model;
    const auto qnn_opt = protocol_optimum(qnn);

    const std::size_t n_total = n_layers * n_l;
    const double theta_qrc = theta_opt(n_total, 1);
    const double peak_qrc = d_single(n_total, theta_qrc);
    const double spread = delta_sy0(n_total, convention);

    RatioReport r{};
    r.n_layers = n_layers;
    r.n_per_layer = n_l;
    r.model = model;
    r.theta_opt_qnn = qnn_opt.argmax;
    r.theta_opt_qrc = theta_qrc;
    r.peak_qnn = qnn_opt.value;
    r.peak_qrc = peak_qrc;
    r.delta_phi_qnn = sensitivity(qnn_opt.value, spread);
    r.delta_phi_qrc = sensitivity(peak_qrc, spread);
    r.formula_ratio = r.delta_phi_qnn / r.delta_phi_qrc;
    r.derivative_ratio = r.peak_qnn / r.peak_qrc;
    r.paper_expression = paper_ratio_expression(n_layers, n_l);
    r.paper_approximation = 1.0 / std::sqrt(double(n_layers));
    return r;
}

} // namespace qnnsense::analytic
