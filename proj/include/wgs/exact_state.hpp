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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wgs/chain.hpp"
#include "wgs/rdm.hpp"

namespace wgs {

inline constexpr std::size_t kDefaultStateCap = 2'000'000;

/// Full amplitude vector of a weighted graph state on a set of chain
/// positions. The basis index is eta = sum_i a_i d^{n-1-i} over the
/// retained positions in increasing order.
struct ExactState {
    ChainSpec chain;
    double time = 0.0;
    std::vector<int> positions;
    Eigen::VectorXcd amplitudes;

    int n_qudits() const { return static_cast<int>(positions.size()); }
    int local_dim() const { return chain.local_dim; }
};

/// A split of the qudits of a state into two non-empty parts. Indices refer
/// to qudit slots 0..n-1 of the state, not chain positions.
struct Bipartition {
    std::vector<int> part_a;
    std::vector<int> part_b;

    /// Slot 0 always lands in part_a; bit k of `mask` puts slot k+1 there too.
    static Bipartition from_mask(int n_qudits, unsigned long long mask);
    void validate(int n_qudits) const;
};

/// The state on every site of the chain.
ExactState build_state(const PhaseModel& model, std::size_t max_entries = kDefaultStateCap);

/// The state restricted to `positions`: only pairs inside the set pick up
/// phases, each with the coupling of its original chain distance.
ExactState build_state(const PhaseModel& model, std::span<const int> positions,
                       std::size_t max_entries = kDefaultStateCap);

/// rho_A = Tr_{not A} |psi><psi| by explicit summation. `slots` must be
/// strictly increasing qudit slots; the result is subject to the same block
/// cap as build_rdm.
SubsystemRdm partial_trace(const ExactState& state, std::span<const int> slots);

/// Squared singular values of the amplitude tensor reshaped along the cut.
Spectrum schmidt_spectrum(const ExactState& state, const Bipartition& cut);

/// Largest bipartition count exact_ggm accepts: N <= 12, 11, 7, 6 for
/// d = 2, 3, 4, 5 and N <= 5 beyond.
int max_exact_ggm_sites(int local_dim);

/// 1 - max over every bipartition of the largest squared Schmidt coefficient.
double exact_ggm(const ExactState& state);

/// Outcome of a computational-basis (generalized Z) measurement on one qudit.
struct MeasurementReduction {
    int measured_slot = 0;
    int outcome = 0;
    double probability = 0.0;
    /// Post-measurement state of the remaining qudits, renormalized.
    ExactState residual;
    /// For every remaining qudit, mu -> exp(i mu m phi_{ik}).
    std::vector<std::vector<Complex>> local_phases;

    /// Residual with the local phases divided out; equals the graph state on
    /// the remaining positions.
    ExactState without_local_phases() const;
};

/// Projects qudit `slot` onto |outcome>. Throws NumericalError if the
/// outcome probability differs from 1/d by more than 1e-12.
MeasurementReduction measure_reduce(const ExactState& state, int slot, int outcome);

/// Copy of `state` with its global phase fixed so the first non-negligible
/// amplitude is real and positive.
ExactState canonical_global_phase(const ExactState& state);

}  // namespace wgs
