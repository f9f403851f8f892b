// Copyright 2026 The wgs-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wgs/rdm.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wgs/error.hpp"
#include "wgs/exact_state.hpp"

namespace wgs {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(RdmEntry, FlatAtTimeZero) {
    PhaseModel model{{5, 3, 1.2}, 0.0};
    SubsystemSpec block(model.chain, {1, 3});
    const std::vector<int> a{2, 1}, b{0, 2};
    Complex v = rdm_entry(model, block, a, b);
    EXPECT_NEAR(v.real(), 1.0 / 9.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(RdmEntry, DiagonalIsFlatAtAnyTime) {
    PhaseModel model{{6, 3, 0.7}, 2.3};
    SubsystemSpec block(model.chain, {0, 2, 5});
    const std::vector<int> a{2, 1, 2};
    Complex v = rdm_entry(model, block, a, a);
    EXPECT_NEAR(v.real(), 1.0 / 27.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(RdmEntry, SingleSiteMatchesPartialTrace) {
    PhaseModel model{{4, 2, 1.0}, 0.5};
    SubsystemSpec block(model.chain, {0});
    const std::vector<int> k{0}, l{1};
    Complex v = rdm_entry(model, block, k, l);
    ExactState state = build_state(model);
    const std::vector<int> slots{0};
    SubsystemRdm oracle = partial_trace(state, slots);
    EXPECT_LT(std::abs(v - oracle.matrix(0, 1)), 1e-12);
}

TEST(RdmEntry, RejectsBadDigits) {
    PhaseModel model{{4, 2, 1.0}, 0.5};
    SubsystemSpec block(model.chain, {0});
    const std::vector<int> ok{0}, bad{2};
    EXPECT_THROW(rdm_entry(model, block, ok, bad), DomainError);
    const std::vector<int> two{0, 1};
    EXPECT_THROW(rdm_entry(model, block, two, ok), DomainError);
}

TEST(SubsystemSpec, Validation) {
    ChainSpec chain{10, 3, 1.0};
    EXPECT_THROW(SubsystemSpec(chain, {}), DomainError);
    EXPECT_THROW(SubsystemSpec(chain, {2, 1}), DomainError);
    EXPECT_THROW(SubsystemSpec(chain, {1, 1}), DomainError);
    EXPECT_THROW(SubsystemSpec(chain, {10}), DomainError);
    EXPECT_THROW(SubsystemSpec(chain, {0, 1, 2, 3, 4, 5, 6, 7}), ResourceError);
    EXPECT_NO_THROW(SubsystemSpec(chain, {0, 1, 2, 3, 4, 5, 6}));
    EXPECT_THROW(SubsystemSpec(chain, {0, 1, 2}, 2), ResourceError);
    EXPECT_EQ(default_max_block(2), 12);
    EXPECT_EQ(default_max_block(3), 7);
    EXPECT_EQ(default_max_block(4), 6);
    EXPECT_EQ(default_max_block(5), 5);
    EXPECT_EQ(SubsystemSpec(chain, {0, 4}).complement().size(), 8u);
}

TEST(BuildRdm, FlatPureStateAtTimeZero) {
    PhaseModel model{{7, 2, 0.4}, 0.0};
    SubsystemRdm rdm = build_rdm(model, SubsystemSpec(model.chain, {0, 3, 6}));
    for (Eigen::Index a = 0; a < 8; ++a) {
        for (Eigen::Index b = 0; b < 8; ++b) EXPECT_NEAR(std::abs(rdm.matrix(a, b) - 0.125), 0.0, 1e-15);
    }
}

TEST(BuildRdm, NearestNeighbourEdgeQubitAtPiIsMaximallyMixed) {
    PhaseModel model{{20, 2, 4.0, Boundary::Open, 1}, kPi};
    SubsystemRdm rdm = build_rdm(model, SubsystemSpec(model.chain, {0}));
    EXPECT_NEAR(rdm.matrix(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rdm.matrix(1, 1).real(), 0.5, 1e-15);
    EXPECT_LT(std::abs(rdm.matrix(0, 1)), 1e-15);
    EXPECT_NEAR(entropy(spectrum(rdm)), 1.0, 1e-12);
}

TEST(BuildRdm, MatchesOracleForNonContiguousQutrits) {
    PhaseModel model{{6, 3, 1.5}, 1.0};
    SubsystemRdm rdm = build_rdm(model, SubsystemSpec(model.chain, {1, 4}));
    ExactState state = build_state(model);
    const std::vector<int> slots{1, 4};
    SubsystemRdm oracle = partial_trace(state, slots);
    EXPECT_LT((rdm.matrix - oracle.matrix).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BuildRdm, AgreesWithEntryFormula) {
    PhaseModel model{{9, 3, 0.8}, 1.7};
    SubsystemSpec block(model.chain, {0, 2, 3});
    SubsystemRdm rdm = build_rdm(model, block);
    for (std::size_t a = 0; a < block.dim(); ++a) {
        for (std::size_t b = 0; b < block.dim(); ++b) {
            auto da = testing_support::digits(a, 3, 3);
            auto db = testing_support::digits(b, 3, 3);
            EXPECT_LT(std::abs(rdm.matrix(a, b) - rdm_entry(model, block, da, db)), 1e-13);
        }
    }
}

TEST(BuildRdm, RandomInstancesMatchOracle) {
    std::mt19937_64 rng(20261018);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = testing_support::random_instance(rng);
        SubsystemRdm rdm = build_rdm(inst.model, SubsystemSpec(inst.model.chain, inst.sites));
        ExactState state = build_state(inst.model);
        SubsystemRdm oracle = partial_trace(state, inst.sites);
        ASSERT_LT((rdm.matrix - oracle.matrix).cwiseAbs().maxCoeff(), 1e-10) << testing_support::describe(inst);
        const double flat = 1.0 / static_cast<double>(rdm.dim());
        for (Eigen::Index a = 0; a < rdm.matrix.rows(); ++a) {
            EXPECT_NEAR(rdm.matrix(a, a).real(), flat, 1e-14);
            EXPECT_EQ(rdm.matrix(a, a).imag(), 0.0);
        }
        EXPECT_EQ((rdm.matrix - rdm.matrix.adjoint()).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_NEAR(rdm.matrix.trace().real(), 1.0, 1e-12);
    }
}

TEST(BuildRdm, ComplementaryBlocksShareEntropy) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = testing_support::random_instance(rng);
        SubsystemSpec block(inst.model.chain, inst.sites);
        auto rest = block.complement();
        if (rest.empty() || static_cast<int>(rest.size()) > default_max_block(inst.model.chain.local_dim)) continue;
        double s_a = entropy(spectrum(build_rdm(inst.model, block)));
        double s_b = entropy(spectrum(build_rdm(inst.model, SubsystemSpec(inst.model.chain, rest))));
        EXPECT_NEAR(s_a, s_b, 1e-9) << testing_support::describe(inst);
    }
}

TEST(BuildRdm, EntropyInvariantUnderConjugation) {
    PhaseModel model{{10, 3, 0.9}, 2.2};
    SubsystemRdm rdm = build_rdm(model, SubsystemSpec(model.chain, {2, 3, 7}));
    Eigen::MatrixXcd conj = rdm.matrix.conjugate();
    EXPECT_NEAR(entropy(spectrum(rdm)), entropy(spectrum(conj)), 1e-12);
}

TEST(BuildRdm, NearestNeighbourModelIsTwoPiPeriodic) {
    ChainSpec chain{12, 3, 2.0, Boundary::Open, 1};
    SubsystemSpec block(chain, {3, 4, 6});
    for (double t : {0.3, 1.1, 2.9}) {
        SubsystemRdm a = build_rdm(PhaseModel{chain, t}, block);
        SubsystemRdm b = build_rdm(PhaseModel{chain, t + 2 * kPi}, block);
        EXPECT_LT((a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(EnvironmentTable, PurityMatchesMatrix) {
    PhaseModel model{{8, 3, 1.1}, 1.3};
    const std::vector<int> sites{1, 2, 5};
    const std::vector<int> env{0, 3, 4, 6, 7};
    EnvironmentTable table(model, sites, env);
    Eigen::MatrixXcd m = table.environment_matrix();
    EXPECT_NEAR(table.purity(), (m * m).trace().real(), 1e-13);
    // Same spectrum as the full reduced state: the intra-block phases are a
    // diagonal unitary conjugation.
    Spectrum with = spectrum(build_rdm(model, SubsystemSpec(model.chain, sites)));
    Spectrum without = spectrum(m);
    for (std::size_t i = 0; i < with.eigenvalues.size(); ++i) {
        EXPECT_NEAR(with.eigenvalues[i], without.eigenvalues[i], 1e-12);
    }
}

TEST(Spectrum, Examples) {
    PhaseModel model{{4, 3, 1.0}, 0.0};
    Spectrum pure = spectrum(build_rdm(model, SubsystemSpec(model.chain, {2})));
    ASSERT_EQ(pure.eigenvalues.size(), 3u);
    EXPECT_NEAR(pure.eigenvalues[0], 1.0, 1e-14);
    EXPECT_NEAR(pure.eigenvalues[1], 0.0, 1e-14);
    EXPECT_NEAR(pure.eigenvalues[2], 0.0, 1e-14);

    Eigen::MatrixXcd half = Eigen::MatrixXcd::Identity(2, 2) * 0.5;
    Spectrum mixed = spectrum(half);
    EXPECT_DOUBLE_EQ(mixed.eigenvalues[0], 0.5);
    EXPECT_DOUBLE_EQ(mixed.eigenvalues[1], 0.5);
}

TEST(Spectrum, MatchesSchmidtValues) {
    PhaseModel model{{8, 2, 0.5}, 0.7};
    Spectrum rdm = spectrum(build_rdm(model, SubsystemSpec(model.chain, {0, 1, 2})));
    ExactState state = build_state(model);
    Spectrum schmidt = schmidt_spectrum(state, Bipartition{{0, 1, 2}, {3, 4, 5, 6, 7}});
    ASSERT_EQ(rdm.eigenvalues.size(), schmidt.eigenvalues.size());
    for (std::size_t i = 0; i < rdm.eigenvalues.size(); ++i) {
        EXPECT_NEAR(rdm.eigenvalues[i], schmidt.eigenvalues[i], 1e-9);
    }
    EXPECT_NEAR(rdm.sum(), 1.0, 1e-9);
}

TEST(Spectrum, RejectsIndefiniteInput) {
    Eigen::MatrixXcd bad(2, 2);
    bad << 1.2, 0.0, 0.0, -0.2;
    EXPECT_THROW(spectrum(bad), NumericalError);
}

TEST(Entropy, Examples) {
    EXPECT_EQ(entropy(Spectrum{{1.0, 0.0, 0.0}}), 0.0);
    std::vector<double> flat(27, 1.0 / 27.0);
    EXPECT_NEAR(entropy(Spectrum{flat}), 3.0 * std::log2(3.0), 1e-12);
    EXPECT_NEAR(entropy(Spectrum{{0.5, 0.5}}), 1.0, 1e-15);
}

}  // namespace
}  // namespace wgs
