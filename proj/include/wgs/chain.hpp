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
#include <string>

namespace wgs {

enum class Boundary { Open };

/// Physical configuration of an open chain of qudits coupled by
/// g(r) = 1 / r^alpha, r = |i - j|.
///
/// Sites are 0-based. `max_range` truncates the interaction: when it is
/// positive, pairs further apart than `max_range` do not couple at all.
/// max_range = 1 is the nearest-neighbour cluster-state limit.
struct ChainSpec {
    int n_sites = 2;
    int local_dim = 2;
    double alpha = 0.0;
    Boundary boundary = Boundary::Open;
    int max_range = 0;

    /// Throws DomainError when an invariant is broken.
    void validate() const;

    bool operator==(const ChainSpec&) const = default;
};

/// Coupling as a function of the distance alone; zero beyond max_range.
double coupling_at_distance(const ChainSpec& chain, int distance);

/// g_ij for distinct in-range sites i, j.
double coupling(const ChainSpec& chain, int i, int j);

/// A chain frozen at a (dimensionless) evolution time.
struct PhaseModel {
    ChainSpec chain;
    double time = 0.0;

    void validate() const;
};

/// Accumulated pair phase g_ij * t. Symmetric in (i, j).
double phase(const PhaseModel& model, int i, int j);

std::string to_string(const ChainSpec& chain);

}  // namespace wgs
