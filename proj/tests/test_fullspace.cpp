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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qnnsense/fullspace.hpp"
#include "qnnsense/protocols.hpp"

using namespace qnnsense;
using namespace qnnsense::oracle;

namespace {

FullState random_state(std::size_t n, std::mt19937 &rng) {
    std::normal_distribution<double> g;
    CVector v(Eigen::Index(1) << n);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        v(k) = Complex{g(rng), g(rng)};
    }
    v /= v.norm();
    return FullState(n, v);
}

SparseHamiltonian random_hamiltonian(std::size_t n, std::mt19937 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SparseHamiltonian h(n);
    for (std::size_t a = 0; a < n; ++a) {
        h.add(oracle::detail::one_site_word(n, a, 'X'), u(rng));
        h.add(oracle::detail::one_site_word(n, a, 'Z'), u(rng));
        for (std::size_t b = a + 1; b < n; ++b) {
            h.add(oracle::detail::two_site_word(n, a, 'Z', b, 'Z'), u(rng));
            h.add(oracle::detail::two_site_word(n, a, 'X', b, 'X'), u(rng));
        }
    }
    return h;
}

} // namespace

TEST(Hamiltonian, TermCounts) {
    EXPECT_EQ(build_star(4, 1.0, 5.0).terms().size(), 5u);
    EXPECT_EQ(build_star(4, 1.0, 0.0).terms().size(), 4u);
    EXPECT_EQ(build_bipartite(3, 2, 1.0, 5.0).terms().size(), 8u);
    EXPECT_EQ(build_bipartite(3, 2, 0.0, 5.0).terms().size(), 8u);
    EXPECT_THROW(build_star(3, 0.0, 1.0), DomainError);
    EXPECT_THROW(build_star(0, 1.0, 1.0), DomainError);
}

TEST(Hamiltonian, MalformedWords) {
    SparseHamiltonian h(3);
    EXPECT_THROW(h.add("XX", 1.0), StructuralError);
    EXPECT_THROW(h.add("XYZ", 1.0), DomainError);
}

TEST(Hamiltonian, UndrivenStarSpectrum) {
    const CMatrix h = build_star(3, 0.7, 0.0).dense();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    std::vector<double> ev(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    // J Z_out (Z_1 + Z_2 + Z_3): +-3J twice each, +-J six times each
    std::vector<double> ref;
    for (int i = 0; i < 2; ++i) ref.push_back(-2.1);
    for (int i = 0; i < 6; ++i) ref.push_back(-0.7);
    for (int i = 0; i < 6; ++i) ref.push_back(0.7);
    for (int i = 0; i < 2; ++i) ref.push_back(2.1);
    ASSERT_EQ(ev.size(), ref.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
        EXPECT_NEAR(ev[i], ref[i], 1e-12);
    }
}

TEST(Hamiltonian, SparseApplyMatchesDense) {
    std::mt19937 rng(1);
    const auto h = random_hamiltonian(6, rng);
    const auto psi = random_state(6, rng);
    EXPECT_LT((h.dense() * psi.amplitudes() - h.apply(psi.amplitudes())).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_THROW(SparseHamiltonian(13).dense(), ResourceError);
}

TEST(Propagation, KrylovMatchesDense) {
    std::mt19937 rng(2);
    const auto h = random_hamiltonian(8, rng);
    const auto psi = random_state(8, rng);
    PropagatorConfig dense;
    dense.method = PropagationMethod::DenseExponential;
    for (double t : {0.1, 1.0, 3.0}) {
        const auto a = propagate(psi, h, t, dense);
        const auto b = propagate(psi, h, t);
        EXPECT_LT((a.amplitudes() - b.amplitudes()).norm(), 1e-8) << t;
        EXPECT_NEAR(b.norm(), 1.0, 1e-10);
        EXPECT_NEAR(h.energy(b), h.energy(psi), 1e-8);
    }
}

TEST(Propagation, ZeroTimeAndErrors) {
    std::mt19937 rng(3);
    const auto h = random_hamiltonian(4, rng);
    const auto psi = random_state(4, rng);
    EXPECT_EQ((propagate(psi, h, 0.0).amplitudes() - psi.amplitudes()).norm(), 0.0);
    EXPECT_THROW(propagate(psi, h, -1.0), DomainError);
    EXPECT_THROW(propagate(random_state(3, rng), h, 1.0), StructuralError);
    PropagatorConfig bad;
    bad.krylov_dim = 1;
    EXPECT_THROW(propagate(psi, h, 1.0, bad), DomainError);
}

TEST(Register, SizeBound) {
    EXPECT_THROW(FullState::plus(kMaxQubits + 1), ResourceError);
    EXPECT_THROW(FullState::plus(0), DomainError);
    EXPECT_THROW(FullState(2, CVector::Zero(3)), StructuralError);
}

TEST(Register, EmbeddingOfCoherentState) {
    for (std::size_t n = 1; n <= 8; ++n) {
        EXPECT_LT((embed(css_x(n)).amplitudes() - FullState::plus(n).amplitudes())
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-15);
    }
}

TEST(Register, TwoQubitReservoirMoments) {
    const auto run = oracle_protocol_run(protocol::qrc_spec(2, 0.4, 0.0));
    EXPECT_NEAR(run.moments.exp_sy, 0.0, 1e-14);
    EXPECT_NEAR(run.moments.var_sy, 0.5, 1e-14);
    EXPECT_NEAR(run.moments.exp_sx, 1.0, 1e-14);
}

TEST(Effective, UncoupledNetworkIsExact) {
    // J = 0: only the drive acts, and the toggling frame removes it
    const auto cmp = effective_vs_full(2, 1, 0.0, 30.0, 0.5, 0.0);
    EXPECT_NEAR(cmp.fidelity, 1.0, 1e-12);
}

TEST(Effective, InfidelityFallsWithDrive) {
    for (std::size_t n_in : {2u, 3u}) {
        for (std::size_t n_out : {1u, 2u}) {
            double prev = 2.0;
            for (double omega : {20.0, 40.0, 80.0, 160.0}) {
                const double chi = 2.0 / omega;
                const double inf = 1.0 - effective_vs_full(n_in, n_out, 1.0, omega, 0.2, chi).fidelity;
                EXPECT_LT(inf, prev) << n_in << "," << n_out << " omega=" << omega;
                prev = inf;
            }
            EXPECT_LT(prev, 1e-3);
        }
    }
}

TEST(Effective, SecondOrderCoefficientFitsBest) {
    const auto fit = fit_effective_chi(2, 1, 1.0, 80.0, 0.2);
    ASSERT_EQ(fit.candidates.size(), 2u);
    EXPECT_GT(fit.candidates[1].fidelity, fit.candidates[0].fidelity);
    EXPECT_NEAR(fit.best_chi / fit.candidates[1].chi, 1.0, 0.2);
    EXPECT_THROW(fit_effective_chi(2, 1, 1.0, 0.0, 0.2), DomainError);
}

TEST(Gates, QubitRotations) {
    CVector psi = FullState::plus(1).amplitudes();
    rotate_qubit(psi, 0, Axis::Z, std::numbers::pi);
    // |+> -> |-> up to phase
    EXPECT_NEAR(std::abs(psi(0) + psi(1)), 0.0, 1e-15);
    hadamard(psi, 0);
    EXPECT_NEAR(std::abs(psi(0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(psi(1)), 1.0, 1e-15);
}
