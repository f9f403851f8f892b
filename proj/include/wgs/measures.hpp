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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgs/chain.hpp"

namespace wgs {

enum class MeasureId { Entropy, MutualInformation, Ggm };

std::string to_string(MeasureId id);

/// A measure sampled on a strictly increasing time grid.
struct TimeSeries {
    MeasureId measure = MeasureId::Ggm;
    std::vector<double> times;
    std::vector<double> values;
};

/// (1/t0) * integral_0^t0 f(t) dt by the composite trapezoid rule, with the
/// half-step value kept as a convergence certificate.
struct AveragedValue {
    double value = 0.0;
    double t0 = 0.0;
    double quadrature_step = 0.0;
    double half_step_value = 0.0;
    bool converged = false;
};

/// Entropy of the first L sites, in bits.
double block_entropy(const PhaseModel& model, int block_length);

/// Strong-subadditivity bound on the block entropy built from sub-blocks of
/// length `sub_length`:
///   sum_{j=1}^{n-1} S(L_j u L_{j+1}) - sum_{j=2}^{n-1} S(L_j),  n = L / sub_length.
/// With n = 1 it is S_L itself.
double u_l_bound(const PhaseModel& model, int block_length, int sub_length);

/// Left site of a pair at separation r placed in the middle of the chain.
int centered_anchor(int n_sites, int separation);

/// I(i : i + r) in bits. The pair is centred unless `anchor` gives i.
double mutual_information(const PhaseModel& model, int separation, std::optional<int> anchor = std::nullopt);

/// GGM from the edge bipartition {0} | rest: 1 - lambda_max(rho_0).
double ggm_edge(const PhaseModel& model);

/// GGM over every bipartition, using the reduced state of the smaller side.
/// Cuts whose purity bound cannot beat the current best are skipped.
double all_cuts_ggm(const PhaseModel& model);

/// Chain length from which ggm() switches to the edge bipartition:
/// 12, 9, 7 for d = 2, 3, 4.
int edge_ggm_threshold(int local_dim);

/// GGM with the size-based policy: all bipartitions for short chains, the
/// edge bipartition beyond edge_ggm_threshold(d).
double ggm(const PhaseModel& model);

/// Default trapezoid step pi / (16 (d-1)^2).
double default_quadrature_step(int local_dim);

inline constexpr double kConvergenceTolerance = 1e-4;

/// Evaluates f on the half-step grid (in parallel, deterministic reduction)
/// and integrates at both resolutions. The step is shrunk so that t0 is a
/// whole number of steps. Throws DomainError unless t0 > 0 and step > 0.
AveragedValue time_average(const std::function<double(double)>& f, double t0, double step, int jobs = 1);

/// Evaluates `f` at each time.
TimeSeries sample_series(MeasureId measure, const std::function<double(double)>& f, std::span<const double> times,
                         int jobs = 1);

}  // namespace wgs
