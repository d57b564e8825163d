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
 * Exact 2^n state-vector simulation of the microscopic ZZ networks and of
 * the idealised echo protocols, used as the independent oracle for the
 * Dicke-basis engine.
 *
 * Qubit q is bit q of the basis index. Inputs occupy the low qubits and
 * outputs the high ones. Bit value 0 is the Z = +1 eigenstate.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "collective.hpp"
#include "errors.hpp"
#include "optimize.hpp"
#include "protocol_spec.hpp"

namespace qnnsense::oracle {

/// Largest register simulated by the oracle.
inline constexpr std::size_t kMaxQubits = 20;
/// Largest register for dense matrix exponentials.
inline constexpr std::size_t kMaxDenseQubits = 12;

inline void check_size(std::size_t n, std::size_t bound, const char *what) {
    if (n == 0) {
        throw DomainError(std::string(what) + ": at least one qubit required");
    }
    if (n > bound) {
        throw ResourceError(std::string(what) + ": " + std::to_string(n) +
                            " qubits exceeds the bound of " +
                            std::to_string(bound));
    }
}

class FullState {
  public:
    FullState(std::size_t n_qubits, CVector amplitudes)
        : n_(n_qubits), amps_(std::move(amplitudes)) {
        check_size(n_, kMaxQubits, "FullState");
        if (amps_.size() != (Eigen::Index(1) << n_)) {
            throw StructuralError("FullState: amplitude count must be 2^n");
        }
    }

    /// |+>^n
    static FullState plus(std::size_t n_qubits) {
        check_size(n_qubits, kMaxQubits, "FullState");
        const auto dim = Eigen::Index(1) << n_qubits;
        return FullState(n_qubits,
                         CVector::Constant(dim, 1.0 / std::sqrt(double(dim))));
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return amps_.size(); }
    [[nodiscard]] const CVector &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] CVector &amplitudes() noexcept { return amps_; }
    [[nodiscard]] double norm() const { return amps_.norm(); }

  private:
    std::size_t n_;
    CVector amps_;
};

/// Pauli word over {I, X, Z}; letter k acts on qubit k.
struct PauliTerm {
    std::string word;
    double coeff;

    [[nodiscard]] std::uint64_t x_mask() const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < word.size(); ++q) {
            if (word[q] == 'X') {
                m |= std::uint64_t{1} << q;
            }
        }
        return m;
    }
    [[nodiscard]] std::uint64_t z_mask() const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < word.size(); ++q) {
            if (word[q] == 'Z') {
                m |= std::uint64_t{1} << q;
            }
        }
        return m;
    }
};

class SparseHamiltonian {
  public:
    explicit SparseHamiltonian(std::size_t n_qubits) : n_(n_qubits) {
        check_size(n_, kMaxQubits, "SparseHamiltonian");
    }

    void add(std::string word, double coeff) {
        if (word.size() != n_) {
            throw StructuralError("Pauli word '" + word + "' has wrong length");
        }
        for (char c : word) {
            if (c != 'I' && c != 'X' && c != 'Z') {
                throw DomainError("Pauli word letters must be I, X or Z");
            }
        }
        compiled_.push_back({PauliTerm{word, coeff}.x_mask(),
                             PauliTerm{word, coeff}.z_mask(), coeff});
        terms_.push_back({std::move(word), coeff});
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept {
        return terms_;
    }

    /// H |v>
    [[nodiscard]] CVector apply(const CVector &v) const {
        CVector out = CVector::Zero(v.size());
        const auto dim = static_cast<std::uint64_t>(v.size());
        for (const auto &t : compiled_) {
            for (std::uint64_t b = 0; b < dim; ++b) {
                const double sign = (std::popcount(b & t.z) & 1) ? -1.0 : 1.0;
                out(Eigen::Index(b ^ t.x)) += (t.coeff * sign) * v(Eigen::Index(b));
            }
        }
        return out;
    }

    [[nodiscard]] CMatrix dense() const {
        check_size(n_, kMaxDenseQubits, "SparseHamiltonian::dense");
        const auto dim = Eigen::Index(1) << n_;
        CMatrix h = CMatrix::Zero(dim, dim);
        for (const auto &t : compiled_) {
            for (std::uint64_t b = 0; b < std::uint64_t(dim); ++b) {
                const double sign = (std::popcount(b & t.z) & 1) ? -1.0 : 1.0;
                h(Eigen::Index(b ^ t.x), Eigen::Index(b)) += t.coeff * sign;
            }
        }
        return h;
    }

    [[nodiscard]] double energy(const FullState &s) const {
        return s.amplitudes().dot(apply(s.amplitudes())).real();
    }

  private:
    struct Compiled {
        std::uint64_t x;
        std::uint64_t z;
        double coeff;
    };
    std::size_t n_;
    std::vector<PauliTerm> terms_;
    std::vector<Compiled> compiled_;
};

namespace detail {
inline std::string two_site_word(std::size_t n, std::size_t a, char pa,
                                 std::size_t b, char pb) {
    std::string w(n, 'I');
    w[a] = pa;
    w[b] = pb;
    return w;
}
inline std::string one_site_word(std::size_t n, std::size_t a, char pa) {
    std::string w(n, 'I');
    w[a] = pa;
    return w;
}
} // namespace detail

/// Star network: J Z_i Z_out for every input plus the output drive Omega X_out.
inline SparseHamiltonian build_star(std::size_t n_in, double J, double omega) {
    if (n_in == 0) {
        throw DomainError("build_star: n_in >= 1 required");
    }
    if (J == 0.0) {
        throw DomainError("build_star: J must be non-zero");
    }
    const std::size_t n = n_in + 1;
    SparseHamiltonian h(n);
    for (std::size_t i = 0; i < n_in; ++i) {
        h.add(detail::two_site_word(n, i, 'Z', n_in, 'Z'), J);
    }
    if (omega != 0.0) {
        h.add(detail::one_site_word(n, n_in, 'X'), omega);
    }
    return h;
}

/// Complete bipartite network: J Z_i Z_j over inputs x outputs plus
/// Omega X_j on every output.
inline SparseHamiltonian build_bipartite(std::size_t n_in, std::size_t n_out,
                                         double J, double omega) {
    if (n_in == 0 || n_out == 0) {
        throw DomainError("build_bipartite: n_in, n_out >= 1 required");
    }
    const std::size_t n = n_in + n_out;
    SparseHamiltonian h(n);
    for (std::size_t i = 0; i < n_in; ++i) {
        for (std::size_t j = 0; j < n_out; ++j) {
            h.add(detail::two_site_word(n, i, 'Z', n_in + j, 'Z'), J);
        }
    }
    if (omega != 0.0) {
        for (std::size_t j = 0; j < n_out; ++j) {
            h.add(detail::one_site_word(n, n_in + j, 'X'), omega);
        }
    }
    return h;
}

enum class PropagationMethod { DenseExponential, Krylov };

struct PropagatorConfig {
    PropagationMethod method = PropagationMethod::Krylov;
    std::size_t krylov_dim = 30;
    double step = 0.0; ///< initial step; 0 picks one from the Hamiltonian norm
    double tolerance = 1e-10;
    std::size_t max_steps = 100000;

    void validate() const {
        if (!(tolerance > 0.0)) {
            throw DomainError("PropagatorConfig: tolerance must be > 0");
        }
        if (krylov_dim < 2) {
            throw DomainError("PropagatorConfig: krylov_dim must be >= 2");
        }
    }
};

namespace detail {

inline CVector dense_propagate(const CVector &psi, const SparseHamiltonian &h,
                               double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.dense());
    if (solver.info() != Eigen::Success) {
        throw NumericError("dense_propagate: eigendecomposition failed");
    }
    const CMatrix &v = solver.eigenvectors();
    CVector c = v.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        c(k) *= std::polar(1.0, -solver.eigenvalues()(k) * t);
    }
    return v * c;
}

/// Upper bound on ||H|| from the term coefficients.
inline double coefficient_norm(const SparseHamiltonian &h) {
    double s = 0.0;
    for (const auto &t : h.terms()) {
        s += std::abs(t.coeff);
    }
    return s;
}

/**
 * Lanczos propagation with adaptive steps. Each step builds an m-dimensional
 * Krylov space from the current state and accepts the step when the
 * residual estimate beta_m |[exp(-i T dt) e_1]_m| is below the tolerance.
 */
inline CVector krylov_propagate(CVector psi, const SparseHamiltonian &h, double t,
                                const PropagatorConfig &cfg) {
    const double hnorm = coefficient_norm(h);
    if (hnorm == 0.0 || t == 0.0) {
        return psi;
    }
    double remaining = t;
    double dt = cfg.step > 0.0 ? cfg.step : std::min(t, 10.0 / hnorm);
    const auto m_max = static_cast<Eigen::Index>(
        std::min<std::size_t>(cfg.krylov_dim, std::size_t(psi.size())));
    std::size_t steps = 0;

    while (remaining > 0.0) {
        if (++steps > cfg.max_steps) {
            throw ConvergenceError("krylov_propagate: step budget exhausted", remaining);
        }
        const double norm0 = psi.norm();
        std::vector<CVector> basis;
        basis.reserve(std::size_t(m_max) + 1);
        basis.push_back(psi / norm0);
        Eigen::VectorXd alpha(m_max);
        Eigen::VectorXd beta(m_max);
        Eigen::Index m = 0;
        double beta_last = 0.0;
        for (; m < m_max; ++m) {
            CVector w = h.apply(basis.back());
            alpha(m) = basis.back().dot(w).real();
            // full reorthogonalisation, applied twice
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto &v : basis) {
                    w -= v.dot(w) * v;
                }
            }
            const double b = w.norm();
            beta(m) = b;
            beta_last = b;
            if (b < 1e-12 * hnorm) {
                ++m;
                beta_last = 0.0; // invariant subspace: exact
                break;
            }
            basis.push_back(w / b);
        }
        const Eigen::Index dim = std::min<Eigen::Index>(m, m_max);
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            tri(k, k) = alpha(k);
            if (k + 1 < dim) {
                tri(k, k + 1) = beta(k);
                tri(k + 1, k) = beta(k);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
        const Eigen::MatrixXd &q = eig.eigenvectors();

        auto small_exp = [&](double tau) {
            CVector y(dim);
            for (Eigen::Index r = 0; r < dim; ++r) {
                Complex acc{0.0, 0.0};
                for (Eigen::Index k = 0; k < dim; ++k) {
                    acc += q(r, k) * std::polar(1.0, -eig.eigenvalues()(k) * tau) *
                           q(0, k);
                }
                y(r) = acc;
            }
            return y;
        };

        double tau = std::min(dt, remaining);
        CVector y;
        double err = 0.0;
        for (int attempt = 0;; ++attempt) {
            y = small_exp(tau);
            err = beta_last * std::abs(y(dim - 1));
            if (err <= cfg.tolerance) {
                break;
            }
            if (attempt > 60) {
                throw ConvergenceError("krylov_propagate: step size collapsed", err);
            }
            tau *= 0.5;
        }
        CVector next = CVector::Zero(psi.size());
        for (Eigen::Index k = 0; k < dim; ++k) {
            next += y(k) * basis[std::size_t(k)];
        }
        psi = norm0 * next;
        remaining -= tau;
        if (remaining < 1e-15 * t) {
            remaining = 0.0;
        }
        // grow the step after an easy acceptance
        dt = err < 0.01 * cfg.tolerance ? 1.5 * tau : tau;
    }
    return psi;
}

} // namespace detail

/// exp(-i H t) |state>.
inline FullState propagate(const FullState &state, const SparseHamiltonian &h,
                           double t, const PropagatorConfig &cfg = {}) {
    cfg.validate();
    if (state.n_qubits() != h.n_qubits()) {
        throw StructuralError("propagate: state and Hamiltonian sizes differ");
    }
    if (!(t >= 0.0)) {
        throw DomainError("propagate: t must be >= 0");
    }
    if (t == 0.0) {
        return state;
    }
    CVector out = cfg.method == PropagationMethod::DenseExponential
                      ? detail::dense_propagate(state.amplitudes(), h, t)
                      : detail::krylov_propagate(state.amplitudes(), h, t, cfg);
    const double drift = std::abs(out.norm() - state.norm());
    if (drift > cfg.tolerance && cfg.method == PropagationMethod::Krylov) {
        throw ConvergenceError("propagate: norm drift", drift);
    }
    return FullState(state.n_qubits(), std::move(out));
}

// ---------------------------------------------------------------------------
// Single-qubit and collective primitives in the computational basis.

/// exp(-i angle sigma / 2) on qubit q for sigma in {X, Y, Z}.
inline void rotate_qubit(CVector &psi, std::size_t q, Axis axis, double angle) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const std::uint64_t bit = std::uint64_t{1} << q;
    const auto dim = static_cast<std::uint64_t>(psi.size());
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & bit) {
            continue;
        }
        const Complex a0 = psi(Eigen::Index(b));
        const Complex a1 = psi(Eigen::Index(b | bit));
        switch (axis) {
        case Axis::X:
            psi(Eigen::Index(b)) = c * a0 + Complex{0.0, -s} * a1;
            psi(Eigen::Index(b | bit)) = Complex{0.0, -s} * a0 + c * a1;
            break;
        case Axis::Y:
            psi(Eigen::Index(b)) = c * a0 - s * a1;
            psi(Eigen::Index(b | bit)) = s * a0 + c * a1;
            break;
        case Axis::Z:
            psi(Eigen::Index(b)) = std::polar(1.0, -0.5 * angle) * a0;
            psi(Eigen::Index(b | bit)) = std::polar(1.0, 0.5 * angle) * a1;
            break;
        }
    }
}

/// Hadamard on qubit q (used to diagonalise X).
inline void hadamard(CVector &psi, std::size_t q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    const double r = std::numbers::sqrt2 / 2.0;
    const auto dim = static_cast<std::uint64_t>(psi.size());
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & bit) {
            continue;
        }
        const Complex a0 = psi(Eigen::Index(b));
        const Complex a1 = psi(Eigen::Index(b | bit));
        psi(Eigen::Index(b)) = r * (a0 + a1);
        psi(Eigen::Index(b | bit)) = r * (a0 - a1);
    }
}

/// Qubit range [first, first + count).
struct QubitBlock {
    std::size_t first;
    std::size_t count;

    [[nodiscard]] std::uint64_t mask() const {
        return ((std::uint64_t{1} << count) - 1) << first;
    }
    /// Collective S_z eigenvalue of a basis state restricted to the block.
    [[nodiscard]] double m(std::uint64_t b) const {
        const int ones = std::popcount(b & mask());
        return 0.5 * (double(count) - 2.0 * double(ones));
    }
};

/// exp(-i angle S_z^2) on a block, as a diagonal phase.
inline void block_twist(CVector &psi, const QubitBlock &blk, double angle) {
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
        const double m = blk.m(std::uint64_t(b));
        psi(b) *= std::polar(1.0, -angle * m * m);
    }
}

/// S_axis summed over the listed blocks, applied to psi.
inline CVector apply_collective(const CVector &psi, const std::vector<QubitBlock> &blocks,
                                Axis axis) {
    CVector out = CVector::Zero(psi.size());
    const auto dim = static_cast<std::uint64_t>(psi.size());
    for (const auto &blk : blocks) {
        for (std::size_t q = blk.first; q < blk.first + blk.count; ++q) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            for (std::uint64_t b = 0; b < dim; ++b) {
                const Complex a = psi(Eigen::Index(b));
                const bool one = (b & bit) != 0;
                switch (axis) {
                case Axis::X:
                    out(Eigen::Index(b ^ bit)) += 0.5 * a;
                    break;
                case Axis::Y:
                    // Y|0> = i|1>, Y|1> = -i|0>
                    out(Eigen::Index(b ^ bit)) +=
                        (one ? Complex{0.0, -0.5} : Complex{0.0, 0.5}) * a;
                    break;
                case Axis::Z:
                    out(Eigen::Index(b)) += (one ? -0.5 : 0.5) * a;
                    break;
                }
            }
        }
    }
    return out;
}

struct Moments {
    double mean;
    double variance;
};

inline Moments collective_moments(const CVector &psi,
                                  const std::vector<QubitBlock> &blocks, Axis axis) {
    const CVector a = apply_collective(psi, blocks, axis);
    const double mean = psi.dot(a).real();
    const double var = a.squaredNorm() - mean * mean;
    return {mean, std::max(var, 0.0)};
}

/// Embeds a Dicke-basis block state into the full register (symmetric
/// superposition over bitstrings of equal weight).
inline FullState embed(const BlockState &block) {
    const std::size_t n = block.n_qubits();
    check_size(n, kMaxQubits, "embed");
    const auto dim = Eigen::Index(1) << n;
    CVector amps = CVector::Zero(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        const int ones = std::popcount(std::uint64_t(b));
        // m = n/2 - ones, Dicke index k = m + n/2 = n - ones
        const std::size_t k = n - std::size_t(ones);
        const double log_binom = std::lgamma(double(n) + 1.0) -
                                 std::lgamma(double(ones) + 1.0) -
                                 std::lgamma(double(n - ones) + 1.0);
        amps(b) = block[k] * std::exp(-0.5 * log_binom);
    }
    return FullState(n, std::move(amps));
}

// ---------------------------------------------------------------------------
// Effective Hamiltonian validation.

enum class Frame { Lab, Toggling };

struct EffectiveComparison {
    double fidelity;
    Frame frame;
};

namespace detail {

inline std::vector<QubitBlock> single_block(std::size_t first, std::size_t count) {
    return {QubitBlock{first, count}};
}

/// exp(-i chi t (S_z^in)^2 (sum_j X_j)) applied to psi; inputs low qubits.
inline CVector effective_evolution(CVector psi, std::size_t n_in, std::size_t n_out,
                                   double chi, double t) {
    for (std::size_t j = 0; j < n_out; ++j) {
        hadamard(psi, n_in + j);
    }
    const QubitBlock in{0, n_in};
    const QubitBlock out{n_in, n_out};
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
        const double m = in.m(std::uint64_t(b));
        // after the Hadamards, bit 0 on an output is the X = +1 eigenstate
        const double x_sum = 2.0 * out.m(std::uint64_t(b));
        psi(b) *= std::polar(1.0, -chi * t * m * m * x_sum);
    }
    for (std::size_t j = 0; j < n_out; ++j) {
        hadamard(psi, n_in + j);
    }
    return psi;
}

/// Full evolution under the bipartite network, optionally mapped back
/// through exp(+i Omega t sum_j X_j).
inline CVector full_evolution(std::size_t n_in, std::size_t n_out, double J,
                              double omega, double t, Frame frame,
                              const PropagatorConfig &cfg) {
    const auto h = build_bipartite(n_in, n_out, J, omega);
    auto psi = propagate(FullState::plus(n_in + n_out), h, t, cfg).amplitudes();
    if (frame == Frame::Toggling) {
        for (std::size_t j = 0; j < n_out; ++j) {
            // exp(+i Omega t X) = exp(-i (-2 Omega t) X / 2)
            rotate_qubit(psi, n_in + j, Axis::X, -2.0 * omega * t);
        }
    }
    return psi;
}

inline PropagatorConfig default_config(std::size_t n) {
    PropagatorConfig cfg;
    cfg.method = n <= 10 ? PropagationMethod::DenseExponential
                         : PropagationMethod::Krylov;
    return cfg;
}

} // namespace detail

/**
 * Fidelity between the full driven evolution (mapped to the toggling frame
 * of the drive) and the effective twist chi (S_z^in)^2 (sum_j X_j), both
 * starting from |+> on every qubit.
 */
inline EffectiveComparison effective_vs_full(std::size_t n_in, std::size_t n_out,
                                             double J, double omega, double t,
                                             double chi, Frame frame = Frame::Toggling) {
    if (!(omega > 0.0)) {
        throw DomainError("effective_vs_full: Omega must be > 0");
    }
    check_size(n_in + n_out, kMaxQubits, "effective_vs_full");
    const auto cfg = detail::default_config(n_in + n_out);
    const CVector full =
        detail::full_evolution(n_in, n_out, J, omega, t, frame, cfg);
    const CVector eff = detail::effective_evolution(
        FullState::plus(n_in + n_out).amplitudes(), n_in, n_out, chi, t);
    return {std::norm(eff.dot(full)), frame};
}

struct ChiCandidate {
    std::string label;
    double chi;
    double fidelity;
};

struct ChiFit {
    double best_chi;
    double best_fidelity;
    std::vector<ChiCandidate> candidates;
};

/// Scans chi over [0, 2 * (2 J^2 / Omega)] for the best toggling-frame
/// fidelity and evaluates the two closed-form conversions.
inline ChiFit fit_effective_chi(std::size_t n_in, std::size_t n_out, double J,
                                double omega, double t) {
    if (!(omega > 0.0)) {
        throw DomainError("fit_effective_chi: Omega must be > 0");
    }
    check_size(n_in + n_out, kMaxQubits, "fit_effective_chi");
    const auto cfg = detail::default_config(n_in + n_out);
    const CVector full =
        detail::full_evolution(n_in, n_out, J, omega, t, Frame::Toggling, cfg);
    const CVector plus = FullState::plus(n_in + n_out).amplitudes();
    auto fidelity = [&](double chi) {
        return std::norm(detail::effective_evolution(plus, n_in, n_out, chi, t).dot(full));
    };
    const double half = J * J / (2.0 * omega);
    const double twice = 2.0 * J * J / omega;
    ChiFit fit{};
    if (twice == 0.0) {
        fit.best_chi = 0.0;
        fit.best_fidelity = fidelity(0.0);
    } else {
        const auto best = maximize_scalar(fidelity, 0.0, 2.0 * twice,
                                          MaximizeOptions{1e-9 * twice, 129, false});
        fit.best_chi = best.argmax;
        fit.best_fidelity = best.value;
    }
    fit.candidates = {{"J^2/(2 Omega)", half, fidelity(half)},
                      {"2 J^2/Omega", twice, fidelity(twice)}};
    return fit;
}

// ---------------------------------------------------------------------------
// Joint-space replication of the idealised protocols.

struct OracleMoments {
    double exp_sy;
    double var_sy;
    double exp_sx;
    double var_sx;
    double exp_sz;
    double var_sz;
};

struct OracleRun {
    FullState state;
    std::vector<QubitBlock> readout;
    OracleMoments moments;
};

namespace detail {

struct OracleBlock {
    QubitBlock qubits;
    double accel; ///< twist multiplier, 0 for untwisted blocks
    bool sensing;
};

/// Register layout of a protocol, derived independently of block_plan.
inline std::vector<OracleBlock> oracle_layout(const ProtocolSpec &spec) {
    std::vector<OracleBlock> out;
    const auto &sizes = spec.arch.layers;
    std::size_t first = 0;
    auto add = [&](std::size_t count, double accel, bool sensing) {
        out.push_back({QubitBlock{first, count}, accel, sensing});
        first += count;
    };
    switch (spec.arch.kind) {
    case ArchKind::QRC:
        add(sizes[0], 1.0, true);
        break;
    case ArchKind::Perceptron:
        add(sizes[0], 1.0, true); // one output steers the inputs
        add(1, 0.0, false);
        break;
    case ArchKind::QNN: {
        const std::size_t L = sizes.size();
        for (std::size_t i = 0; i < L; ++i) {
            const double left = i > 0 ? double(sizes[i - 1]) : 0.0;
            const double right = i + 1 < L ? double(sizes[i + 1]) : 0.0;
            if (spec.sensing == Sensing::Input) {
                if (i == 0) {
                    add(sizes[0], right, true);
                } else {
                    add(sizes[i], 0.0, false);
                }
            } else if (spec.model == MultilayerModel::EventAdditive) {
                // each steering neighbour is scored as its own copy of the layer
                if (i > 0) {
                    add(sizes[i], left, true);
                }
                if (i + 1 < L) {
                    add(sizes[i], right, true);
                }
            } else {
                add(sizes[i], left + right, true);
            }
        }
        break;
    }
    }
    return out;
}

} // namespace detail

/**
 * Runs the idealised echo of `spec` on the full 2^n register: diagonal
 * twist phases per block, single-qubit encoding rotations on the sensing
 * blocks, mirrored reversal. Moments are of the sensing-block collective
 * spin.
 */
inline OracleRun oracle_protocol_run(const ProtocolSpec &spec) {
    spec.validate();
    const auto layout = detail::oracle_layout(spec);
    std::size_t n = 0;
    for (const auto &b : layout) {
        n += b.qubits.count;
    }
    check_size(n, kMaxQubits, "oracle_protocol_run");
    CVector psi = FullState::plus(n).amplitudes();

    for (const auto &b : layout) {
        if (b.accel > 0.0) {
            block_twist(psi, b.qubits, b.accel * spec.theta);
        }
    }
    std::vector<QubitBlock> readout;
    for (const auto &b : layout) {
        if (!b.sensing) {
            continue;
        }
        readout.push_back(b.qubits);
        for (std::size_t q = b.qubits.first; q < b.qubits.first + b.qubits.count; ++q) {
            // exp(-i phi S_axis) factorises into exp(-i phi sigma_q / 2)
            rotate_qubit(psi, q, spec.encoding_axis, spec.phi);
        }
    }
    for (auto it = layout.rbegin(); it != layout.rend(); ++it) {
        if (it->accel > 0.0) {
            block_twist(psi, it->qubits, -it->accel * spec.theta);
        }
    }
    const auto y = collective_moments(psi, readout, Axis::Y);
    const auto x = collective_moments(psi, readout, Axis::X);
    const auto z = collective_moments(psi, readout, Axis::Z);
    return {FullState(n, std::move(psi)), std::move(readout),
            {y.mean, y.variance, x.mean, x.variance, z.mean, z.variance}};
}

/**
 * Operator-level sequential two-layer echo: the stage unitaries
 * exp(-i theta (S_z^in)^2 sum_j X_j) and exp(-i theta (S_z^out)^2 sum_i X_i)
 * act on the joint register without assuming the steering layer stays
 * x-polarised. Returns <S_y^in + S_y^out> after encode and strict reversal.
 */
inline double operator_level_sequential_sy(std::size_t n_in, std::size_t n_out,
                                           double theta, double phi) {
    const std::size_t n = n_in + n_out;
    check_size(n, kMaxQubits, "operator_level_sequential_sy");
    const QubitBlock in{0, n_in};
    const QubitBlock out{n_in, n_out};

    // stage unitary: steered block twisted at rate (sum of steering X)
    auto stage = [&](CVector &psi, const QubitBlock &steered,
                     const QubitBlock &steering, double angle) {
        for (std::size_t q = steering.first; q < steering.first + steering.count; ++q) {
            hadamard(psi, q);
        }
        for (Eigen::Index b = 0; b < psi.size(); ++b) {
            const double m = steered.m(std::uint64_t(b));
            const double x_sum = 2.0 * steering.m(std::uint64_t(b));
            psi(b) *= std::polar(1.0, -angle * m * m * x_sum);
        }
        for (std::size_t q = steering.first; q < steering.first + steering.count; ++q) {
            hadamard(psi, q);
        }
    };

    CVector psi = FullState::plus(n).amplitudes();
    stage(psi, in, out, theta);
    stage(psi, out, in, theta);
    for (std::size_t q = 0; q < n; ++q) {
        rotate_qubit(psi, q, Axis::Y, phi);
    }
    stage(psi, out, in, -theta);
    stage(psi, in, out, -theta);
    return collective_moments(psi, {in, out}, Axis::Y).mean;
}

} // namespace qnnsense::oracle
