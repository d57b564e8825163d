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
 * Collective spin algebra for a single permutation-symmetric block of qubits
 * in the Dicke basis |j = n/2, m>, m = -j..j (ascending), plus the product
 * wrapper used for multi-block protocols.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace qnnsense {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class Axis { X, Y, Z };

inline std::string_view to_string(Axis a) {
    switch (a) {
    case Axis::X:
        return "x";
    case Axis::Y:
        return "y";
    case Axis::Z:
        return "z";
    }
    return "?";
}

/// Tolerance used when validating state normalisation.
inline constexpr double kNormTolerance = 1e-12;

/**
 * Pure state of one symmetric block. Amplitude index k corresponds to
 * m = k - n/2.
 */
class BlockState {
  public:
    BlockState(std::size_t n_qubits, CVector amplitudes)
        : n_(n_qubits), amps_(std::move(amplitudes)) {
        if (n_ == 0) {
            throw DomainError("BlockState: n_qubits must be >= 1");
        }
        if (static_cast<std::size_t>(amps_.size()) != n_ + 1) {
            throw StructuralError("BlockState: expected " +
                                  std::to_string(n_ + 1) +
                                  " amplitudes, got " +
                                  std::to_string(amps_.size()));
        }
        const double norm2 = amps_.squaredNorm();
        if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kNormTolerance) {
            throw DomainError("BlockState: amplitudes not normalised (|psi|^2 = " +
                              std::to_string(norm2) + ")");
        }
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return n_ + 1; }
    [[nodiscard]] double j() const noexcept { return 0.5 * double(n_); }
    [[nodiscard]] double m(std::size_t k) const noexcept {
        return double(k) - j();
    }
    [[nodiscard]] const CVector &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t k) const { return amps_(k); }

  private:
    std::size_t n_;
    CVector amps_;
};

/// Hermitian matrix on the (n+1)-dimensional Dicke space of one block.
class CollectiveOperator {
  public:
    CollectiveOperator(std::size_t n_qubits, CMatrix matrix)
        : n_(n_qubits), mat_(std::move(matrix)) {
        if (mat_.rows() != mat_.cols() ||
            static_cast<std::size_t>(mat_.rows()) != n_ + 1) {
            throw StructuralError("CollectiveOperator: matrix must be (n+1)x(n+1)");
        }
        if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw DomainError("CollectiveOperator: matrix is not Hermitian");
        }
    }
    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return mat_; }

  private:
    std::size_t n_;
    CMatrix mat_;
};

struct CollectiveOps {
    CollectiveOperator sx;
    CollectiveOperator sy;
    CollectiveOperator sz;
    CollectiveOperator sz2;

    [[nodiscard]] const CollectiveOperator &get(Axis a) const {
        switch (a) {
        case Axis::X:
            return sx;
        case Axis::Y:
            return sy;
        case Axis::Z:
            break;
        }
        return sz;
    }
};

/// Raising operator S_+ with <m+1|S_+|m> = sqrt(j(j+1) - m(m+1)).
inline CMatrix raising_matrix(std::size_t n_qubits) {
    const auto d = static_cast<Eigen::Index>(n_qubits + 1);
    const double j = 0.5 * double(n_qubits);
    CMatrix sp = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        const double m = double(k) - j;
        sp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    return sp;
}

inline CollectiveOps make_collective_ops(std::size_t n_qubits) {
    if (n_qubits == 0) {
        throw DomainError("make_collective_ops: n_qubits must be >= 1");
    }
    const auto d = static_cast<Eigen::Index>(n_qubits + 1);
    const double j = 0.5 * double(n_qubits);
    const CMatrix sp = raising_matrix(n_qubits);
    const CMatrix sm = sp.adjoint();
    const Complex i{0.0, 1.0};

    CMatrix sz = CMatrix::Zero(d, d);
    CMatrix sz2 = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double m = double(k) - j;
        sz(k, k) = m;
        sz2(k, k) = m * m;
    }
    return CollectiveOps{
        CollectiveOperator(n_qubits, 0.5 * (sp + sm)),
        CollectiveOperator(n_qubits, (sp - sm) / (2.0 * i)),
        CollectiveOperator(n_qubits, std::move(sz)),
        CollectiveOperator(n_qubits, std::move(sz2)),
    };
}

/// Coherent spin state polarised along +x, c_m = 2^{-j} sqrt(C(2j, j+m)).
inline BlockState css_x(std::size_t n_qubits) {
    if (n_qubits == 0) {
        throw DomainError("css_x: n_qubits must be >= 1");
    }
    // log-space binomials keep large n finite
    CVector amps(static_cast<Eigen::Index>(n_qubits + 1));
    const double n = double(n_qubits);
    for (std::size_t k = 0; k <= n_qubits; ++k) {
        const double log_binom = std::lgamma(n + 1.0) -
                                 std::lgamma(double(k) + 1.0) -
                                 std::lgamma(n - double(k) + 1.0);
        amps(static_cast<Eigen::Index>(k)) =
            std::exp(0.5 * log_binom - 0.5 * n * std::log(2.0));
    }
    amps /= amps.norm();
    return BlockState(n_qubits, std::move(amps));
}

/// One-axis twist exp(-i accel theta S_z^2); the phase on index m is
/// exp(-i accel theta m^2).
inline BlockState apply_oat(const BlockState &state, double theta,
                            unsigned accel = 1) {
    CVector out = state.amplitudes();
    const double angle = double(accel) * theta;
    for (std::size_t k = 0; k < state.dim(); ++k) {
        const double m = state.m(k);
        out(static_cast<Eigen::Index>(k)) *= std::polar(1.0, -angle * m * m);
    }
    return BlockState(state.n_qubits(), std::move(out));
}

namespace detail {

struct RotationBasis {
    CMatrix vectors;        // columns are eigenvectors of S_axis
    Eigen::VectorXd values; // eigenvalues (the m values)
};

/// Eigendecompositions of S_x and S_y, built once per (n, axis) and shared.
class RotationCache {
  public:
    static RotationCache &instance() {
        static RotationCache cache;
        return cache;
    }

    std::shared_ptr<const RotationBasis> get(std::size_t n, Axis axis) {
        const auto key = std::make_pair(n, axis);
        {
            std::shared_lock lock(mutex_);
            if (auto it = entries_.find(key); it != entries_.end()) {
                return it->second;
            }
        }
        auto basis = std::make_shared<RotationBasis>(build(n, axis));
        std::unique_lock lock(mutex_);
        auto [it, inserted] = entries_.emplace(key, std::move(basis));
        return it->second;
    }

  private:
    static RotationBasis build(std::size_t n, Axis axis) {
        const auto ops = make_collective_ops(n);
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(ops.get(axis).matrix());
        if (solver.info() != Eigen::Success) {
            throw NumericError("rotation eigendecomposition failed");
        }
        return RotationBasis{solver.eigenvectors(), solver.eigenvalues()};
    }

    std::shared_mutex mutex_;
    std::map<std::pair<std::size_t, Axis>, std::shared_ptr<const RotationBasis>>
        entries_;
};

} // namespace detail

/// exp(-i angle S_axis) |state>.
inline BlockState apply_rotation(const BlockState &state, Axis axis,
                                 double angle) {
    if (angle == 0.0) {
        return state;
    }
    if (axis == Axis::Z) {
        CVector out = state.amplitudes();
        for (std::size_t k = 0; k < state.dim(); ++k) {
            out(static_cast<Eigen::Index>(k)) *=
                std::polar(1.0, -angle * state.m(k));
        }
        return BlockState(state.n_qubits(), std::move(out));
    }
    const auto basis =
        detail::RotationCache::instance().get(state.n_qubits(), axis);
    CVector coeffs = basis->vectors.adjoint() * state.amplitudes();
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs(k) *= std::polar(1.0, -angle * basis->values(k));
    }
    CVector out = basis->vectors * coeffs;
    // renormalise away the O(eps * dim) drift of the dense transform
    out /= out.norm();
    return BlockState(state.n_qubits(), std::move(out));
}

inline double expectation(const BlockState &state, const CollectiveOperator &op) {
    if (state.n_qubits() != op.n_qubits()) {
        throw StructuralError("expectation: state has " +
                              std::to_string(state.n_qubits()) +
                              " qubits, operator " +
                              std::to_string(op.n_qubits()));
    }
    const Complex value =
        state.amplitudes().dot(op.matrix() * state.amplitudes());
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
        throw NumericError("expectation: imaginary residue " +
                           std::to_string(value.imag()));
    }
    return value.real();
}

/// Variance <A^2> - <A>^2, clamped at zero for residues above -1e-12.
inline double variance(const BlockState &state, const CollectiveOperator &op) {
    if (state.n_qubits() != op.n_qubits()) {
        throw StructuralError("variance: dimension mismatch");
    }
    const CVector a_psi = op.matrix() * state.amplitudes();
    const double mean = state.amplitudes().dot(a_psi).real();
    const double second = a_psi.squaredNorm();
    const double var = second - mean * mean;
    if (var < -1e-12 * std::max(1.0, second)) {
        throw NumericError("variance: negative value " + std::to_string(var));
    }
    return std::max(var, 0.0);
}

namespace detail {

/// S_axis |psi> using the ladder structure directly, O(n).
inline CVector apply_axis(const BlockState &state, Axis axis) {
    const auto d = static_cast<Eigen::Index>(state.dim());
    const double j = state.j();
    const CVector &psi = state.amplitudes();
    CVector out = CVector::Zero(d);
    if (axis == Axis::Z) {
        for (Eigen::Index k = 0; k < d; ++k) {
            out(k) = (double(k) - j) * psi(k);
        }
        return out;
    }
    // (S_+ psi)(k+1) = c_k psi(k), (S_- psi)(k) = c_k psi(k+1)
    CVector up = CVector::Zero(d);
    CVector down = CVector::Zero(d);
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        const double m = double(k) - j;
        const double c = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        up(k + 1) = c * psi(k);
        down(k) = c * psi(k + 1);
    }
    if (axis == Axis::X) {
        return 0.5 * (up + down);
    }
    return Complex{0.0, -0.5} * (up - down);
}

} // namespace detail

inline double expectation(const BlockState &state, Axis axis) {
    const Complex value = state.amplitudes().dot(detail::apply_axis(state, axis));
    return value.real();
}

inline double variance(const BlockState &state, Axis axis) {
    const CVector a_psi = detail::apply_axis(state, axis);
    const double mean = state.amplitudes().dot(a_psi).real();
    const double second = a_psi.squaredNorm();
    return std::max(second - mean * mean, 0.0);
}

/// Ordered product of independent blocks; the joint tensor is never formed.
class MultiBlockState {
  public:
    MultiBlockState() = default;
    explicit MultiBlockState(std::vector<BlockState> blocks)
        : blocks_(std::move(blocks)) {}

    [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
    [[nodiscard]] bool empty() const noexcept { return blocks_.empty(); }
    [[nodiscard]] const BlockState &operator[](std::size_t i) const {
        return blocks_.at(i);
    }
    [[nodiscard]] const std::vector<BlockState> &blocks() const noexcept {
        return blocks_;
    }
    void set(std::size_t i, BlockState b) { blocks_.at(i) = std::move(b); }
    void push_back(BlockState b) { blocks_.push_back(std::move(b)); }

    [[nodiscard]] std::size_t total_qubits() const noexcept {
        std::size_t n = 0;
        for (const auto &b : blocks_) {
            n += b.n_qubits();
        }
        return n;
    }

  private:
    std::vector<BlockState> blocks_;
};

/// Sum of single-block expectations of S_axis.
inline double multiblock_expectation_sum(const MultiBlockState &state, Axis axis) {
    if (state.empty()) {
        throw DomainError("multiblock_expectation_sum: no blocks");
    }
    double total = 0.0;
    for (const auto &b : state.blocks()) {
        total += expectation(b, axis);
    }
    return total;
}

/// Variance of the summed collective component; blocks are uncorrelated.
inline double multiblock_variance_sum(const MultiBlockState &state, Axis axis) {
    if (state.empty()) {
        throw DomainError("multiblock_variance_sum: no blocks");
    }
    double total = 0.0;
    for (const auto &b : state.blocks()) {
        total += variance(b, axis);
    }
    return total;
}

} // namespace qnnsense
