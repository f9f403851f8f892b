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

#include <random>
#include <string>
#include <vector>

#include "wgs/chain.hpp"

namespace wgs {

/// A small chain with a non-empty proper subset of its sites.
struct RandomInstance {
    PhaseModel model;
    std::vector<int> sites;
};

/// N <= 8 for d = 2, N <= 6 for d = 3, N <= 5 for d = 4; alpha in [0, 5],
/// t in [0, 2 pi].
RandomInstance random_instance(std::mt19937_64& rng);
std::string describe(const RandomInstance& instance);

/// Max entrywise |closed-form RDM - partial trace of the full state|.
double rdm_oracle_deviation(const RandomInstance& instance);

/// Max |all_cuts_ggm - exact_ggm| on the instance's chain.
double ggm_oracle_deviation(const RandomInstance& instance);

struct ReductionCase {
    PhaseModel model;
    int slot = 0;
    int outcome = 0;
};

/// N <= 6, d <= 4, random measured qudit and outcome.
ReductionCase random_reduction_case(std::mt19937_64& rng);

struct ReductionCheck {
    /// Entrywise gap between the inverse-phased residual and the smaller graph state.
    double amplitude_deviation = 0.0;
    /// Max |p(m) - 1/d| over every outcome m of the measured qudit.
    double probability_deviation = 0.0;
};

ReductionCheck reduction_check(const ReductionCase& c);

}  // namespace wgs
