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

#include "wgs/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wgs/error.hpp"
#include "wgs/exact_state.hpp"
#include "wgs/parallel.hpp"
#include "wgs/rdm.hpp"

namespace wgs {
namespace {

double block_entropy_of(const PhaseModel& model, std::vector<int> sites) {
    SubsystemSpec block(model.chain, std::move(sites));
    return entropy(spectrum(build_rdm(model, block)));
}

std::vector<int> site_range(int first, int count) {
    std::vector<int> out(count);
    for (int k = 0; k < count; ++k) out[k] = first + k;
    return out;
}

}  // namespace

std::string to_string(MeasureId id) {
    switch (id) {
        case MeasureId::Entropy: return "entropy";
        case MeasureId::MutualInformation: return "mutual_information";
        case MeasureId::Ggm: return "ggm";
    }
    return "unknown";
}

double block_entropy(const PhaseModel& model, int block_length) {
    model.validate();
    if (block_length < 1 || block_length > model.chain.n_sites) throw DomainError("block length out of range");
    return block_entropy_of(model, site_range(0, block_length));
}

double u_l_bound(const PhaseModel& model, int block_length, int sub_length) {
    model.validate();
    if (block_length < 1 || block_length > model.chain.n_sites) throw DomainError("block length out of range");
    if (sub_length < 1 || block_length % sub_length != 0) {
        throw DomainError("sub-block length must divide the block length");
    }
    const int blocks = block_length / sub_length;
    if (blocks == 1) return block_entropy(model, block_length);
    if (2 * sub_length > default_max_block(model.chain.local_dim)) {
        throw DomainError("adjacent sub-block pair of " + std::to_string(2 * sub_length) +
                          " sites exceeds the block cap");
    }
    double bound = 0.0;
    for (int j = 0; j + 1 < blocks; ++j) bound += block_entropy_of(model, site_range(j * sub_length, 2 * sub_length));
    for (int j = 1; j + 1 < blocks; ++j) bound -= block_entropy_of(model, site_range(j * sub_length, sub_length));
    return bound;
}

int centered_anchor(int n_sites, int separation) { return (n_sites - separation) / 2; }

double mutual_information(const PhaseModel& model, int separation, std::optional<int> anchor) {
    model.validate();
    const int n = model.chain.n_sites;
    if (separation < 1 || separation > n - 1) throw DomainError("separation must lie in [1, N-1]");
    const int i = anchor.value_or(centered_anchor(n, separation));
    const int j = i + separation;
    if (i < 0 || j >= n) throw DomainError("pair anchored at " + std::to_string(i) + " leaves the chain");
    const double s_i = block_entropy_of(model, {i});
    const double s_j = block_entropy_of(model, {j});
    const double s_ij = block_entropy_of(model, {i, j});
    return std::max(0.0, s_i + s_j - s_ij);
}

double ggm_edge(const PhaseModel& model) {
    model.validate();
    SubsystemSpec edge(model.chain, {0});
    return std::clamp(1.0 - spectrum(build_rdm(model, edge)).largest(), 0.0, 1.0);
}

double all_cuts_ggm(const PhaseModel& model) {
    model.validate();
    const int n = model.chain.n_sites;
    const int d = model.chain.local_dim;
    if (n > max_exact_ggm_sites(d)) {
        throw ResourceError("all-bipartition GGM is capped at N=" + std::to_string(max_exact_ggm_sites(d)) +
                            " for d=" + std::to_string(d));
    }
    // Smaller side of every cut; the edge cut {0} comes first.
    std::vector<std::vector<int>> sides;
    const unsigned long long count = (1ULL << (n - 1)) - 1;
    sides.reserve(count);
    for (unsigned long long mask = 0; mask < count; ++mask) {
        Bipartition cut = Bipartition::from_mask(n, mask);
        sides.push_back(cut.part_a.size() <= cut.part_b.size() ? cut.part_a : cut.part_b);
    }
    std::stable_sort(sides.begin(), sides.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });

    std::vector<char> member(n);
    std::vector<int> env;
    double best = 0.0;
    for (const auto& side : sides) {
        std::fill(member.begin(), member.end(), 0);
        for (int k : side) member[k] = 1;
        env.clear();
        for (int l = 0; l < n; ++l) {
            if (!member[l]) env.push_back(l);
        }
        EnvironmentTable table(model, side, env);
        // lambda_max^2 <= Tr(rho^2)
        if (std::sqrt(table.purity()) <= best) continue;
        best = std::max(best, largest_eigenvalue(table.environment_matrix()));
    }
    return std::clamp(1.0 - best, 0.0, 1.0);
}

int edge_ggm_threshold(int local_dim) {
    switch (local_dim) {
        case 2: return 12;
        case 3: return 9;
        case 4: return 7;
        default: return max_exact_ggm_sites(local_dim) + 1;
    }
}

double ggm(const PhaseModel& model) {
    if (model.chain.n_sites >= edge_ggm_threshold(model.chain.local_dim)) return ggm_edge(model);
    return all_cuts_ggm(model);
}

double default_quadrature_step(int local_dim) {
    const double dm1 = local_dim - 1;
    return std::numbers::pi / (16.0 * dm1 * dm1);
}

AveragedValue time_average(const std::function<double(double)>& f, double t0, double step, int jobs) {
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("averaging window t0 must be positive");
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("quadrature step must be positive");
    const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(t0 / step - 1e-9)));
    const double h = t0 / static_cast<double>(intervals);
    const std::size_t fine = 2 * intervals;
    std::vector<double> values(fine + 1);
    parallel_for(fine + 1, jobs, [&](std::size_t i) {
        values[i] = f(t0 * static_cast<double>(i) / static_cast<double>(fine));
    });
    double coarse_sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 2; i < fine; i += 2) coarse_sum += values[i];
    double fine_sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i < fine; ++i) fine_sum += values[i];

    AveragedValue out;
    out.t0 = t0;
    out.quadrature_step = h;
    out.value = coarse_sum * h / t0;
    out.half_step_value = fine_sum * (0.5 * h) / t0;
    out.converged = std::abs(out.value - out.half_step_value) < kConvergenceTolerance;
    return out;
}

TimeSeries sample_series(MeasureId measure, const std::function<double(double)>& f, std::span<const double> times,
                         int jobs) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw DomainError("sample times must be strictly increasing");
    }
    TimeSeries out{measure, std::vector<double>(times.begin(), times.end()), std::vector<double>(times.size())};
    parallel_for(times.size(), jobs, [&](std::size_t i) { out.values[i] = f(times[i]); });
    return out;
}

}  // namespace wgs
