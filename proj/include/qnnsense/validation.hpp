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
 * Cross-checks between the Dicke-basis engine and the full state-vector
 * oracle.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "collective.hpp"
#include "fullspace.hpp"
#include "protocol_spec.hpp"
#include "protocols.hpp"

namespace qnnsense::validation {

inline constexpr double kOracleTolerance = 1e-9;

struct CheckResult {
    std::string name;
    bool passed = true;
    double max_error = 0.0;
    std::size_t cases = 0;
    std::string detail;

    void record(double err, const std::string &where) {
        ++cases;
        if (err > max_error) {
            max_error = err;
            if (!(err <= kOracleTolerance)) {
                passed = false;
                detail = where;
            }
        }
        if (!std::isfinite(err)) {
            passed = false;
            detail = where;
        }
    }
};

/// Collective moments of S_x, S_y, S_z over the read-out blocks.
struct DickeMoments {
    double exp[3];
    double var[3];
};

inline DickeMoments dicke_moments(const ProtocolSpec &spec, const MultiBlockState &st) {
    const auto plan = block_plan(spec);
    DickeMoments m{{0, 0, 0}, {0, 0, 0}};
    const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (!plan[i].readout) {
            continue;
        }
        for (int a = 0; a < 3; ++a) {
            m.exp[a] += expectation(st[i], axes[a]);
            m.var[a] += variance(st[i], axes[a]);
        }
    }
    return m;
}

/// Largest moment discrepancy between the two engines for one spec.
/// `corrupt` perturbs the Dicke-engine state first (fault injection).
inline double protocol_discrepancy(const ProtocolSpec &spec, bool corrupt = false) {
    auto st = protocol::run(spec);
    if (corrupt) {
        CVector amps = st[0].amplitudes();
        amps(0) += 0.05;
        amps /= amps.norm();
        st.set(0, BlockState(st[0].n_qubits(), std::move(amps)));
    }
    const auto d = dicke_moments(spec, st);
    const auto o = oracle::oracle_protocol_run(spec).moments;
    const double oe[3] = {o.exp_sx, o.exp_sy, o.exp_sz};
    const double ov[3] = {o.var_sx, o.var_sy, o.var_sz};
    double err = 0.0;
    for (int a = 0; a < 3; ++a) {
        err = std::max(err, std::abs(d.exp[a] - oe[a]));
        err = std::max(err, std::abs(d.var[a] - ov[a]));
    }
    return err;
}

/// Human-readable tag for a protocol.
inline std::string describe(const ProtocolSpec &s) {
    std::string out(to_string(s.arch.kind));
    out += "[";
    for (std::size_t i = 0; i < s.arch.layers.size(); ++i) {
        out += (i ? "," : "") + std::to_string(s.arch.layers[i]);
    }
    out += "] ";
    out += to_string(s.mode);
    out += " ";
    out += to_string(s.model);
    out += " sensing=";
    out += to_string(s.sensing);
    out += " axis=";
    out += to_string(s.encoding_axis);
    out += " theta=" + std::to_string(s.theta) + " phi=" + std::to_string(s.phi);
    return out;
}

/**
 * Every protocol variant whose oracle register fits in max_total qubits:
 * QRC, perceptron, two-layer QNN (both modes, both sensing layouts) and
 * uniform L-layer QNN (both models), with encoding axes y and z.
 */
inline std::vector<ProtocolSpec> enumerate_architectures(std::size_t max_total) {
    std::vector<ProtocolSpec> out;
    auto push = [&](ProtocolSpec s, std::size_t register_size) {
        if (register_size > max_total) {
            return;
        }
        for (Axis axis : {Axis::Y, Axis::Z}) {
            s.encoding_axis = axis;
            out.push_back(s);
        }
    };
    for (std::size_t n = 1; n <= max_total; ++n) {
        push(protocol::qrc_spec(n, 0, 0), n);
    }
    for (std::size_t n = 1; n + 1 <= max_total; ++n) {
        push(protocol::perceptron_spec(n, 0, 0), n + 1);
    }
    for (std::size_t a = 1; a < max_total; ++a) {
        for (std::size_t b = 1; a + b <= max_total; ++b) {
            for (Mode mode : {Mode::Sequential, Mode::Simultaneous}) {
                for (Sensing sensing : {Sensing::All, Sensing::Input}) {
                    push(protocol::qnn2_spec(a, b, 0, 0, mode, sensing), a + b);
                }
            }
        }
    }
    for (std::size_t L = 3; L <= max_total; ++L) {
        for (std::size_t n = 1; n * L <= max_total; ++n) {
            push(protocol::qnn_spec(L, n, 0, 0, MultilayerModel::StateEvolution), L * n);
            // event-additive scores each layer once per steering neighbour
            push(protocol::qnn_spec(L, n, 0, 0, MultilayerModel::EventAdditive),
                 2 * (L - 1) * n);
        }
    }
    return out;
}

struct OracleCheckOptions {
    std::size_t max_qubits = 4;
    std::size_t samples = 3;   ///< random (theta, phi) pairs per architecture
    unsigned seed = 20260101;
    bool inject_fault = false; ///< corrupt the Dicke state in protocol checks
};

inline CheckResult check_coherent_state(std::size_t max_qubits) {
    CheckResult r{"css-embedding"};
    for (std::size_t n = 1; n <= max_qubits; ++n) {
        const auto full = oracle::embed(css_x(n));
        const auto plus = oracle::FullState::plus(n);
        r.record((full.amplitudes() - plus.amplitudes()).cwiseAbs().maxCoeff(),
                 "n=" + std::to_string(n));
    }
    return r;
}

inline CheckResult check_rotations(std::size_t max_qubits, std::mt19937 &rng) {
    CheckResult r{"rotation-equivalence"};
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (std::size_t n = 1; n <= max_qubits; ++n) {
        for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
            const double a = angle(rng);
            const double tw = angle(rng);
            const auto block = apply_rotation(apply_oat(css_x(n), tw), axis, a);
            CVector psi = oracle::FullState::plus(n).amplitudes();
            oracle::block_twist(psi, {0, n}, tw);
            for (std::size_t q = 0; q < n; ++q) {
                oracle::rotate_qubit(psi, q, axis, a);
            }
            const auto full = oracle::embed(block);
            // compare up to the global phase convention (both start from |+>)
            const double err = (full.amplitudes() - psi).cwiseAbs().maxCoeff();
            r.record(err, "n=" + std::to_string(n) + " axis=" +
                              std::string(to_string(axis)));
        }
    }
    return r;
}

inline CheckResult check_echo(std::size_t max_qubits, std::mt19937 &rng) {
    CheckResult r{"echo-identity"};
    std::uniform_real_distribution<double> theta(0.0, 1.5);
    for (auto spec : enumerate_architectures(max_qubits)) {
        spec.theta = theta(rng);
        spec.phi = 0.0;
        const auto st = protocol::run(spec);
        const auto plan = block_plan(spec);
        double err = 0.0;
        for (std::size_t i = 0; i < plan.size(); ++i) {
            err = std::max(err, (st[i].amplitudes() - css_x(plan[i].n_qubits).amplitudes())
                                    .cwiseAbs()
                                    .maxCoeff());
        }
        r.record(err, describe(spec));
    }
    return r;
}

inline CheckResult check_protocols(const OracleCheckOptions &opts, std::mt19937 &rng) {
    CheckResult r{"protocol-equivalence"};
    std::uniform_real_distribution<double> theta(0.0, 1.5);
    std::uniform_real_distribution<double> phi(-0.09, 0.09);
    for (auto spec : enumerate_architectures(opts.max_qubits)) {
        for (std::size_t k = 0; k < opts.samples; ++k) {
            spec.theta = theta(rng);
            spec.phi = phi(rng);
            r.record(protocol_discrepancy(spec, opts.inject_fault), describe(spec));
        }
    }
    return r;
}

struct OracleCheckReport {
    std::vector<CheckResult> checks;
    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult &c) { return c.passed; });
    }
};

inline OracleCheckReport oracle_check(const OracleCheckOptions &opts) {
    oracle::check_size(opts.max_qubits, oracle::kMaxQubits, "oracle-check");
    std::mt19937 rng(opts.seed);
    OracleCheckReport rep;
    rep.checks.push_back(check_coherent_state(opts.max_qubits));
    rep.checks.push_back(check_rotations(opts.max_qubits, rng));
    rep.checks.push_back(check_echo(opts.max_qubits, rng));
    rep.checks.push_back(check_protocols(opts, rng));
    return rep;
}

} // namespace qnnsense::validation
