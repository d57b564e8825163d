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
 * Architecture and protocol descriptors shared by the Dicke-basis engine,
 * the full state-vector oracle and the closed-form analysis.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collective.hpp"
#include "errors.hpp"

namespace qnnsense {

enum class ArchKind { QRC, Perceptron, QNN };
enum class Mode { Sequential, Simultaneous };
enum class MultilayerModel { StateEvolution, EventAdditive };
enum class Convention { Paper, Css, Both };

/// Which QNN layers carry the signal. `Input` is the accelerated perceptron
/// layout: downstream layers only steer the first layer and are not encoded,
/// twisted or read out.
enum class Sensing { All, Input };

inline std::string_view to_string(ArchKind k) {
    switch (k) {
    case ArchKind::QRC:
        return "qrc";
    case ArchKind::Perceptron:
        return "perceptron";
    case ArchKind::QNN:
        return "qnn";
    }
    return "?";
}
inline std::string_view to_string(Mode m) {
    return m == Mode::Sequential ? "sequential" : "simultaneous";
}
inline std::string_view to_string(MultilayerModel m) {
    return m == MultilayerModel::StateEvolution ? "state-evolution"
                                                : "event-additive";
}
inline std::string_view to_string(Convention c) {
    switch (c) {
    case Convention::Paper:
        return "paper";
    case Convention::Css:
        return "css";
    case Convention::Both:
        return "both";
    }
    return "?";
}
inline std::string_view to_string(Sensing s) {
    return s == Sensing::All ? "all" : "input";
}

inline ArchKind parse_arch(std::string_view s) {
    if (s == "qrc") {
        return ArchKind::QRC;
    }
    if (s == "perceptron") {
        return ArchKind::Perceptron;
    }
    if (s == "qnn") {
        return ArchKind::QNN;
    }
    throw UsageError("unknown architecture '" + std::string(s) + "'");
}
inline Mode parse_mode(std::string_view s) {
    if (s == "sequential") {
        return Mode::Sequential;
    }
    if (s == "simultaneous") {
        return Mode::Simultaneous;
    }
    throw UsageError("unknown mode '" + std::string(s) + "'");
}
inline MultilayerModel parse_model(std::string_view s) {
    if (s == "state-evolution") {
        return MultilayerModel::StateEvolution;
    }
    if (s == "event-additive") {
        return MultilayerModel::EventAdditive;
    }
    throw UsageError("unknown multilayer model '" + std::string(s) + "'");
}
inline Convention parse_convention(std::string_view s) {
    if (s == "paper") {
        return Convention::Paper;
    }
    if (s == "css") {
        return Convention::Css;
    }
    if (s == "both") {
        return Convention::Both;
    }
    throw UsageError("unknown convention '" + std::string(s) + "'");
}
inline Axis parse_axis(std::string_view s) {
    if (s == "x") {
        return Axis::X;
    }
    if (s == "y") {
        return Axis::Y;
    }
    if (s == "z") {
        return Axis::Z;
    }
    throw UsageError("unknown axis '" + std::string(s) + "'");
}
inline Sensing parse_sensing(std::string_view s) {
    if (s == "all") {
        return Sensing::All;
    }
    if (s == "input") {
        return Sensing::Input;
    }
    throw UsageError("unknown sensing selector '" + std::string(s) + "'");
}

/**
 * Qubit layout of an architecture. A QRC is a single block of n_in qubits.
 * A perceptron has n_in inputs and one output. A QNN is a chain of layers;
 * `layers` holds the per-layer sizes (two entries for the input/output
 * network, L equal entries for the uniform L-layer network).
 */
struct ArchitectureParams {
    ArchKind kind = ArchKind::QRC;
    std::vector<std::size_t> layers;

    static ArchitectureParams qrc(std::size_t n) {
        return ArchitectureParams{ArchKind::QRC, {n}};
    }
    static ArchitectureParams perceptron(std::size_t n_in) {
        return ArchitectureParams{ArchKind::Perceptron, {n_in, 1}};
    }
    static ArchitectureParams qnn2(std::size_t n_in, std::size_t n_out) {
        return ArchitectureParams{ArchKind::QNN, {n_in, n_out}};
    }
    static ArchitectureParams qnn(std::size_t n_layers, std::size_t n_per_layer) {
        return ArchitectureParams{ArchKind::QNN,
                                  std::vector<std::size_t>(n_layers, n_per_layer)};
    }

    [[nodiscard]] std::size_t n_in() const { return layers.at(0); }
    [[nodiscard]] std::size_t n_out() const {
        return kind == ArchKind::QRC ? 0 : layers.at(1);
    }
    [[nodiscard]] std::size_t n_layers() const {
        return kind == ArchKind::QNN ? layers.size() : 1;
    }
    /// Per-layer size when all layers agree, otherwise 0.
    [[nodiscard]] std::size_t n_per_layer() const {
        if (layers.empty()) {
            return 0;
        }
        for (auto s : layers) {
            if (s != layers.front()) {
                return 0;
            }
        }
        return layers.front();
    }
    [[nodiscard]] double alpha() const {
        return kind == ArchKind::QRC ? 0.0 : double(n_out()) / double(n_in());
    }
    [[nodiscard]] std::size_t total_qubits() const {
        return std::accumulate(layers.begin(), layers.end(), std::size_t{0});
    }

    void validate() const {
        if (layers.empty()) {
            throw UsageError("architecture has no qubits");
        }
        for (auto s : layers) {
            if (s == 0) {
                throw UsageError("layer sizes must be >= 1");
            }
        }
        switch (kind) {
        case ArchKind::QRC:
            if (layers.size() != 1) {
                throw UsageError("a QRC is a single block");
            }
            break;
        case ArchKind::Perceptron:
            if (layers.size() != 2 || layers[1] != 1) {
                throw UsageError("a perceptron has one output qubit");
            }
            break;
        case ArchKind::QNN:
            if (layers.size() < 2) {
                throw UsageError("a QNN needs at least two layers");
            }
            break;
        }
    }
};

struct ProtocolSpec {
    ArchitectureParams arch;
    double theta = 0.0;
    double phi = 0.0;
    Mode mode = Mode::Simultaneous;
    Axis encoding_axis = Axis::Y;
    MultilayerModel model = MultilayerModel::StateEvolution;
    Sensing sensing = Sensing::All;
    double phi_guard = 0.1; ///< linear-response regime bound on |phi|

    void validate() const {
        arch.validate();
        if (!(theta >= 0.0) || !std::isfinite(theta)) {
            throw UsageError("theta must be finite and >= 0");
        }
        if (!(std::abs(phi) < phi_guard)) {
            throw UsageError("|phi| must be below " + std::to_string(phi_guard));
        }
        if (mode == Mode::Sequential && arch.kind != ArchKind::QNN) {
            throw UsageError("sequential mode applies to QNN architectures only");
        }
    }
};

/// One independently evolving block of the idealised protocol.
struct BlockPlan {
    std::size_t n_qubits;
    unsigned accel;    ///< twist multiplier; 0 means the block is not twisted
    bool encoded;      ///< receives the signal rotation
    bool readout;      ///< contributes to the collective readout
    std::size_t layer; ///< physical layer the block belongs to
};

/**
 * Block decomposition of a protocol. Each QNN layer is twisted at a rate set
 * by the summed size of its neighbouring layers, so the first layer of a
 * two-layer network is accelerated by n_out and the second by n_in. In the
 * event-additive model every (layer, neighbour) pair becomes its own block.
 */
inline std::vector<BlockPlan> block_plan(const ProtocolSpec &spec) {
    const auto &sizes = spec.arch.layers;
    std::vector<BlockPlan> plan;
    switch (spec.arch.kind) {
    case ArchKind::QRC:
        plan.push_back({sizes[0], 1, true, true, 0});
        break;
    case ArchKind::Perceptron:
        plan.push_back({sizes[0], 1, true, true, 0});
        plan.push_back({1, 0, false, false, 1});
        break;
    case ArchKind::QNN: {
        const std::size_t L = sizes.size();
        for (std::size_t i = 0; i < L; ++i) {
            const bool sensing = spec.sensing == Sensing::All || i == 0;
            std::vector<std::size_t> neighbours;
            if (i > 0) {
                neighbours.push_back(sizes[i - 1]);
            }
            if (i + 1 < L) {
                neighbours.push_back(sizes[i + 1]);
            }
            if (!sensing) {
                plan.push_back({sizes[i], 0, false, false, i});
                continue;
            }
            if (spec.sensing == Sensing::Input) {
                // only the downstream layer steers the sensing layer
                plan.push_back({sizes[i], unsigned(sizes[i + 1]), true, true, i});
                continue;
            }
            if (spec.model == MultilayerModel::EventAdditive) {
                for (auto nb : neighbours) {
                    plan.push_back({sizes[i], unsigned(nb), true, true, i});
                }
            } else {
                const auto accel = std::accumulate(neighbours.begin(),
                                                   neighbours.end(), std::size_t{0});
                plan.push_back({sizes[i], unsigned(accel), true, true, i});
            }
        }
        break;
    }
    }
    return plan;
}

/// Largest twist multiplier among sensing blocks (sets the first lobe).
inline unsigned max_sensing_accel(const ProtocolSpec &spec) {
    unsigned a = 1;
    for (const auto &b : block_plan(spec)) {
        if (b.readout && b.accel > a) {
            a = b.accel;
        }
    }
    return a;
}

/// Physical qubits that are both encoded and read out.
inline std::size_t sensing_qubits(const ProtocolSpec &spec) {
    ProtocolSpec physical = spec;
    physical.model = MultilayerModel::StateEvolution;
    std::size_t n = 0;
    for (const auto &b : block_plan(physical)) {
        if (b.readout) {
            n += b.n_qubits;
        }
    }
    return n;
}

} // namespace qnnsense
