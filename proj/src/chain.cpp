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

#include "wgs/chain.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "wgs/error.hpp"

namespace wgs {

void ChainSpec::validate() const {
    if (n_sites < 2) throw DomainError("chain needs at least 2 sites, got " + std::to_string(n_sites));
    if (local_dim < 2) throw DomainError("local dimension must be >= 2, got " + std::to_string(local_dim));
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("fall-off exponent must be finite and >= 0");
    if (max_range < 0) throw DomainError("max_range must be >= 0 (0 = unlimited)");
}

double coupling_at_distance(const ChainSpec& chain, int distance) {
    if (distance < 1 || distance >= chain.n_sites) {
        throw DomainError("distance " + std::to_string(distance) + " outside [1, N-1]");
    }
    if (chain.max_range > 0 && distance > chain.max_range) return 0.0;
    if (chain.alpha == 0.0) return 1.0;
    return std::pow(static_cast<double>(distance), -chain.alpha);
}

double coupling(const ChainSpec& chain, int i, int j) {
    if (i < 0 || j < 0 || i >= chain.n_sites || j >= chain.n_sites) {
        throw DomainError("site index out of range");
    }
    if (i == j) throw DomainError("coupling of a site with itself is undefined");
    return coupling_at_distance(chain, std::abs(i - j));
}

void PhaseModel::validate() const {
    chain.validate();
    if (!(time >= 0.0) || !std::isfinite(time)) throw DomainError("time must be finite and >= 0");
}

double phase(const PhaseModel& model, int i, int j) { return coupling(model.chain, i, j) * model.time; }

std::string to_string(const ChainSpec& chain) {
    std::ostringstream os;
    os << "ChainSpec{N=" << chain.n_sites << ", d=" << chain.local_dim << ", alpha=" << chain.alpha;
    if (chain.max_range > 0) os << ", range=" << chain.max_range;
    os << "}";
    return os.str();
}

}  // namespace wgs
