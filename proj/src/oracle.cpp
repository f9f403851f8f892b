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

#include "wgs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wgs/exact_state.hpp"
#include "wgs/measures.hpp"
#include "wgs/rdm.hpp"

namespace wgs {

RandomInstance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick_d(2, 4);
    const int d = pick_d(rng);
    const int n_max = d == 2 ? 8 : (d == 3 ? 6 : 5);
    std::uniform_int_distribution<int> pick_n(2, n_max);
    const int n = pick_n(rng);
    std::uniform_real_distribution<double> pick_alpha(0.0, 5.0);
    std::uniform_real_distribution<double> pick_t(0.0, 2 * std::numbers::pi);
    const double alpha = pick_alpha(rng);
    const double t = pick_t(rng);
    RandomInstance inst{PhaseModel{ChainSpec{n, d, alpha}, t}, {}};
    std::uniform_int_distribution<unsigned> pick_mask(1, (1u << n) - 2);
    const unsigned mask = pick_mask(rng);
    for (int k = 0; k < n; ++k) {
        if ((mask >> k) & 1u) inst.sites.push_back(k);
    }
    return inst;
}

std::string describe(const RandomInstance& inst) {
    std::ostringstream os;
    os << to_string(inst.model.chain) << " t=" << inst.model.time << " A={";
    for (std::size_t k = 0; k < inst.sites.size(); ++k) os << (k ? "," : "") << inst.sites[k];
    os << "}";
    return os.str();
}

double rdm_oracle_deviation(const RandomInstance& inst) {
    SubsystemSpec block(inst.model.chain, inst.sites);
    auto analytic = build_rdm(inst.model, block);
    auto state = build_state(inst.model);
    auto traced = partial_trace(state, inst.sites);
    double worst = (analytic.matrix - traced.matrix).cwiseAbs().maxCoeff();
    // Spot-check the direct entry formula against the table-based build too.
    const int s = block.size();
    const auto dim = static_cast<std::size_t>(block.dim());
    std::vector<int> a(s), b(s);
    for (std::size_t i = 0; i < dim; i += std::max<std::size_t>(1, dim / 7)) {
        std::size_t x = i, y = dim - 1 - i;
        for (int k = s - 1; k >= 0; --k) {
            a[k] = static_cast<int>(x % inst.model.chain.local_dim);
            b[k] = static_cast<int>(y % inst.model.chain.local_dim);
            x /= inst.model.chain.local_dim;
            y /= inst.model.chain.local_dim;
        }
        Complex direct = rdm_entry(inst.model, block, a, b);
        worst = std::max(worst, std::abs(direct - traced.matrix(i, dim - 1 - i)));
    }
    return worst;
}

double ggm_oracle_deviation(const RandomInstance& inst) {
    return std::abs(all_cuts_ggm(inst.model) - exact_ggm(build_state(inst.model)));
}

ReductionCase random_reduction_case(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick_d(2, 4);
    const int d = pick_d(rng);
    std::uniform_int_distribution<int> pick_n(2, 6);
    const int n = pick_n(rng);
    std::uniform_real_distribution<double> pick_alpha(0.0, 5.0);
    std::uniform_real_distribution<double> pick_t(0.0, 2 * std::numbers::pi);
    const double alpha = pick_alpha(rng);
    const double t = pick_t(rng);
    std::uniform_int_distribution<int> pick_slot(0, n - 1);
    std::uniform_int_distribution<int> pick_outcome(0, d - 1);
    const int slot = pick_slot(rng);
    const int outcome = pick_outcome(rng);
    return {PhaseModel{ChainSpec{n, d, alpha}, t}, slot, outcome};
}

ReductionCheck reduction_check(const ReductionCase& c) {
    ExactState state = build_state(c.model);
    ReductionCheck out;
    const int d = c.model.chain.local_dim;
    for (int m = 0; m < d; ++m) {
        out.probability_deviation =
            std::max(out.probability_deviation, std::abs(measure_reduce(state, c.slot, m).probability - 1.0 / d));
    }
    MeasurementReduction red = measure_reduce(state, c.slot, c.outcome);
    std::vector<int> rest;
    for (int k = 0; k < c.model.chain.n_sites; ++k) {
        if (k != c.slot) rest.push_back(k);
    }
    ExactState target = canonical_global_phase(build_state(c.model, rest));
    ExactState got = canonical_global_phase(red.without_local_phases());
    out.amplitude_deviation = (got.amplitudes - target.amplitudes).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace wgs
