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

#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wgs/chain.hpp"
#include "wgs/oracle.hpp"

namespace wgs::testing_support {

inline std::vector<int> digits(std::size_t index, int d, int width) {
    std::vector<int> out(width);
    for (int k = width - 1; k >= 0; --k) {
        out[k] = static_cast<int>(index % d);
        index /= d;
    }
    return out;
}

using Instance = RandomInstance;

inline Instance random_instance(std::mt19937_64& rng) { return wgs::random_instance(rng); }

inline std::string describe(const Instance& inst) { return wgs::describe(inst); }

}  // namespace wgs::testing_support
