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

#include "wgs/transition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wgs/error.hpp"
#include "wgs/exact_state.hpp"
#include "wgs/parallel.hpp"
#include "wgs/rdm.hpp"

namespace wgs {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMiFloor = 1e-14;

double resolve_step(double step, int local_dim) { return step > 0.0 ? step : default_quadrature_step(local_dim); }

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

std::vector<double> AlphaGrid::values() const {
    std::vector<double> out(std::max(count, 0));
    for (int i = 0; i < count; ++i) out[i] = at(i);
    return out;
}

void AlphaGrid::validate() const {
    if (count < 1) throw DomainError("alpha grid must be non-empty");
    if (count > 1 && !(step > 0.0)) throw DomainError("alpha grid step must be positive");
    if (!(start >= 0.0)) throw DomainError("alpha grid must start at alpha >= 0");
}

FitResult fit_mi_scaling(std::span<const ScalingPoint> points, int r_min, int r_max) {
    if (r_min < 1 || r_max < r_min) throw DomainError("invalid separation range for the scaling fit");
    FitResult out;
    out.r_min = r_min;
    out.r_max = r_max;
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        if (p.r < r_min || p.r > r_max) continue;
        if (!(p.value > kMiFloor)) {
            out.excluded.push_back(p.r);
            continue;
        }
        xs.push_back(std::log2(static_cast<double>(p.r)));
        ys.push_back(std::log2(p.value));
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    if (n < 4) throw DomainError("scaling fit needs at least 4 usable points, got " + std::to_string(n));
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = xs[i] * xs[i];
        design(i, 1) = xs[i];
        design(i, 2) = 1.0;
        rhs[i] = ys[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3) throw DomainError("scaling fit is rank deficient: need at least 3 distinct separations");
    Eigen::Vector3d coef = qr.solve(rhs);
    out.a_tilde = -coef[0];
    out.b_tilde = -coef[1];
    out.c_tilde = coef[2];
    out.residual_rms = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
    out.points_used = static_cast<int>(n);
    return out;
}

std::vector<ScalingPoint> averaged_mi_profile(const ChainSpec& chain, const MiFitOptions& options) {
    chain.validate();
    if (options.r_max >= chain.n_sites) throw DomainError("largest separation must be below N");
    const double step = resolve_step(options.step, chain.local_dim);
    std::vector<ScalingPoint> out;
    for (int r = options.r_min; r <= options.r_max; ++r) {
        auto f = [&](double t) { return mutual_information(PhaseModel{chain, t}, r); };
        out.push_back({r, time_average(f, options.t0, step, options.jobs).value});
    }
    return out;
}

FitResult mi_fit_at(int local_dim, double alpha, const MiFitOptions& options) {
    ChainSpec chain{options.n_sites, local_dim, alpha};
    auto profile = averaged_mi_profile(chain, options);
    return fit_mi_scaling(profile, options.r_min, options.r_max);
}

std::string to_string(TransitionMethod method) {
    switch (method) {
        case TransitionMethod::FitCoefficient: return "fit_coefficient";
        case TransitionMethod::AlphaDerivativeJump: return "alpha_derivative_jump";
        case TransitionMethod::TimeDerivativeJump: return "time_derivative_jump";
    }
    return "unknown";
}

TransitionReport alpha_star_from_fit(int local_dim, const AlphaGrid& grid, const MiFitOptions& options) {
    grid.validate();
    TransitionReport report;
    report.local_dim = local_dim;
    report.method = TransitionMethod::FitCoefficient;
    report.grid_resolution = options.refine_resolution;
    auto a_tilde = [&](double alpha) { return mi_fit_at(local_dim, alpha, options).a_tilde; };
    for (int i = 0; i < grid.count; ++i) {
        report.alphas.push_back(grid.at(i));
        report.values.push_back(a_tilde(grid.at(i)));
    }
    // Largest grid alpha still below the threshold with a departed successor.
    int below = -1;
    for (int i = grid.count - 2; i >= 0; --i) {
        if (std::abs(report.values[i]) < options.threshold && std::abs(report.values[i + 1]) >= options.threshold) {
            below = i;
            break;
        }
    }
    if (below < 0) return report;
    double lo = grid.at(below);
    double hi = grid.at(below + 1);
    while (hi - lo > options.refine_resolution) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(a_tilde(mid)) < options.threshold) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    report.found = true;
    report.alpha_star = 0.5 * (lo + hi);
    report.jump_magnitude = std::abs(report.values[below + 1]);
    return report;
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

DerivativeSeries ggm_derivative(DerivativeKind kind, const GgmFamily& family, const AlphaGrid& grid, double h,
                                int jobs) {
    grid.validate();
    if (kind == DerivativeKind::Alpha) {
        if (h == 0.0) h = kDefaultAlphaStep;
        if (!(h > 0.0) || h > kDefaultAlphaStep) throw DomainError("alpha-derivative step must lie in (0, 1e-3]");
        if (grid.start - h < 0.0) throw DomainError("alpha grid too close to zero for the derivative step");
    } else {
        if (h == 0.0) h = kDefaultTimeStep;
        if (!(h > 0.0)) throw DomainError("time-derivative step must be positive");
    }
    DerivativeSeries out{kind, grid.values(), std::vector<double>(grid.count), grid.step};
    auto edge = [&](double alpha, double t) {
        return ggm_edge(PhaseModel{ChainSpec{family.n_sites, family.local_dim, alpha, Boundary::Open, family.max_range}, t});
    };
    parallel_for(out.alphas.size(), jobs, [&](std::size_t i) {
        const double alpha = out.alphas[i];
        if (kind == DerivativeKind::Alpha) {
            out.values[i] = central_difference([&](double a) { return edge(a, kTwoPi); }, alpha, h);
        } else {
            out.values[i] = central_difference([&](double t) { return edge(alpha, t); }, kTwoPi, h);
        }
    });
    return out;
}

TransitionReport detect_jump(const DerivativeSeries& series, int local_dim, double noise_factor) {
    const std::size_t n = series.values.size();
    if (n < 10 || series.alphas.size() != n) throw DomainError("jump detection needs at least 10 grid points");
    for (std::size_t i = 1; i < n; ++i) {
        double gap = series.alphas[i] - series.alphas[i - 1];
        if (!(gap > 0.0) || std::abs(gap - series.grid_step) > 1e-9 * std::max(1.0, series.grid_step) + 1e-12) {
            throw DomainError("jump detection needs a uniform increasing grid");
        }
    }
    TransitionReport report;
    report.local_dim = local_dim;
    report.method = series.kind == DerivativeKind::Alpha ? TransitionMethod::AlphaDerivativeJump
                                                         : TransitionMethod::TimeDerivativeJump;
    report.grid_resolution = series.grid_step;
    report.alphas = series.alphas;
    report.values = series.values;

    std::vector<double> steps(n - 1);
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        steps[i] = std::abs(series.values[i + 1] - series.values[i]);
        if (steps[i] > steps[best]) best = i;
    }
    const double floor = noise_factor * median(steps);
    report.jump_magnitude = steps[best];
    report.alpha_star = 0.5 * (series.alphas[best] + series.alphas[best + 1]);
    report.found = steps[best] > floor && steps[best] > 0.0;
    return report;
}

TransitionReport alpha_star_from_jump(DerivativeKind kind, const GgmFamily& family, double lo, double hi,
                                      double coarse_step, double fine_step, int jobs) {
    if (!(hi > lo) || !(coarse_step > 0.0) || !(fine_step > 0.0)) throw DomainError("invalid scan range");
    AlphaGrid coarse{lo, coarse_step, static_cast<int>(std::floor((hi - lo) / coarse_step + 1e-9)) + 1};
    TransitionReport rough = detect_jump(ggm_derivative(kind, family, coarse, 0.0, jobs), family.local_dim);
    if (!rough.found) return rough;
    const double window = 0.1;
    double start = std::round((rough.alpha_star - window) / fine_step) * fine_step;
    start = std::max(start, lo);
    AlphaGrid fine{start, fine_step, static_cast<int>(std::round(2.0 * window / fine_step)) + 1};
    return detect_jump(ggm_derivative(kind, family, fine, 0.0, jobs), family.local_dim);
}

ScalingLawFit scaling_law_fit(std::span<const std::pair<int, double>> points) {
    if (points.size() < 4) throw DomainError("scaling-law fit needs at least 4 (d, alpha*) pairs");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [d, alpha] : points) {
        if (d < 2) throw DomainError("local dimension must be >= 2");
        const double x = std::log2(static_cast<double>(d));
        sx += x;
        sy += alpha;
        sxx += x * x;
        sxy += x * alpha;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw DomainError("scaling-law fit needs at least two distinct dimensions");
    ScalingLawFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [d, alpha] : points) {
        const double r = alpha - (fit.slope * std::log2(static_cast<double>(d)) + fit.intercept);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

std::vector<double> averaged_ggm_by_size(int local_dim, double alpha, const SizeSweepOptions& options) {
    ChainSpec(options.n_max, local_dim, alpha).validate();
    if (!(options.t0 > 0.0)) throw DomainError("averaging window t0 must be positive");
    const int d = local_dim;
    const double step = resolve_step(options.step, d);
    const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(options.t0 / step - 1e-9)));
    const std::size_t sizes = static_cast<std::size_t>(options.n_max - 1);

    std::vector<double> couplings(options.n_max);
    ChainSpec chain{options.n_max, d, alpha};
    for (int r = 1; r < options.n_max; ++r) couplings[r] = coupling_at_distance(chain, r);

    std::vector<std::vector<double>> rows(intervals + 1);
    parallel_for(intervals + 1, options.jobs, [&](std::size_t i) {
        const double t = options.t0 * static_cast<double>(i) / static_cast<double>(intervals);
        std::vector<Complex> product(d, Complex(1.0, 0.0));
        Eigen::MatrixXcd rho(d, d);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(d);
        auto& row = rows[i];
        row.resize(sizes);
        for (int n = 2; n <= options.n_max; ++n) {
            const double phi = t * couplings[n - 1];
            const Complex w = std::polar(1.0, phi);
            for (int delta = 1; delta < d; ++delta) {
                const Complex z = std::pow(w, delta);
                Complex sum = 1.0, zp = 1.0;
                for (int p = 1; p < d; ++p) {
                    zp *= z;
                    sum += zp;
                }
                product[delta] *= sum / static_cast<double>(d);
            }
            for (int k = 0; k < d; ++k) {
                rho(k, k) = 1.0 / d;
                for (int l = k + 1; l < d; ++l) {
                    rho(l, k) = product[l - k] / static_cast<double>(d);
                    rho(k, l) = std::conj(rho(l, k));
                }
            }
            solver.compute(rho, Eigen::EigenvaluesOnly);
            row[n - 2] = std::clamp(1.0 - solver.eigenvalues()[d - 1], 0.0, 1.0);
        }
    });

    std::vector<double> out(sizes, 0.0);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double weight = (i == 0 || i == intervals) ? 0.5 : 1.0;
        for (std::size_t k = 0; k < sizes; ++k) out[k] += weight * rows[i][k];
    }
    for (double& v : out) v /= static_cast<double>(intervals);
    return out;
}

NSatResult n_sat(std::span<const double> averages, int first_n, double epsilon, int window, int n_min) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (window < 1) throw DomainError("persistence window must be >= 1");
    NSatResult out;
    const int last_n = first_n + static_cast<int>(averages.size()) - 1;
    auto diff = [&](int n) { return std::abs(averages[n + 1 - first_n] - averages[n - first_n]); };
    for (int n = std::max(n_min, first_n); n < last_n; ++n) {
        if (!out.literal_n_sat && diff(n) < epsilon) out.literal_n_sat = n;
        if (!out.n_sat && n + window <= last_n) {
            bool ok = true;
            for (int k = 0; k < window && ok; ++k) ok = diff(n + k) < epsilon;
            if (ok) out.n_sat = n;
        }
        if (out.n_sat && out.literal_n_sat) break;
    }
    return out;
}

NSatResult n_sat(int local_dim, double alpha, double epsilon, const SizeSweepOptions& options, int window,
                 int n_min) {
    auto averages = averaged_ggm_by_size(local_dim, alpha, options);
    return n_sat(averages, 2, epsilon, window, n_min);
}

std::optional<std::size_t> first_epsilon_independent(const std::vector<std::vector<std::optional<int>>>& per_alpha) {
    auto agrees = [](const std::vector<std::optional<int>>& row) {
        if (row.empty() || !row.front()) return false;
        return std::all_of(row.begin(), row.end(), [&](const auto& v) { return v == row.front(); });
    };
    std::optional<std::size_t> first;
    for (std::size_t i = per_alpha.size(); i-- > 0;) {
        if (!agrees(per_alpha[i])) break;
        first = i;
    }
    return first;
}

SaturationReport saturation_report(int local_dim, const AlphaGrid& grid, const SaturationOptions& options) {
    grid.validate();
    SaturationReport report;
    report.local_dim = local_dim;
    report.n_sites = options.sweep.n_max;
    std::vector<std::vector<std::optional<int>>> per_alpha;
    for (int i = 0; i < grid.count; ++i) {
        const double alpha = grid.at(i);
        auto averages = averaged_ggm_by_size(local_dim, alpha, options.sweep);
        report.alphas.push_back(alpha);
        report.g_avg.push_back(averages.back());
        std::vector<std::optional<int>> row;
        for (double eps : options.epsilons) {
            NSatResult r = n_sat(averages, 2, eps, options.window, options.n_min);
            report.n_sat_table.push_back({alpha, eps, r});
            row.push_back(r.n_sat);
        }
        per_alpha.push_back(std::move(row));
    }
    report.plateau_value = report.g_avg.back();
    for (std::size_t i = report.g_avg.size(); i-- > 1;) {
        if (std::abs(report.g_avg[i] - report.g_avg[i - 1]) >= options.plateau_tolerance) break;
        report.alpha_plateau = report.alphas[i - 1];
    }
    if (auto idx = first_epsilon_independent(per_alpha)) report.alpha_sat_estimate = report.alphas[*idx];
    return report;
}

std::vector<ApproxErrorPoint> ggm_approx_error(int local_dim, int n_first, int n_last, double alpha, double t0,
                                               double step, int jobs) {
    if (n_first < 2 || n_last < n_first) throw DomainError("invalid system-size range");
    if (n_last > max_exact_ggm_sites(local_dim)) {
        throw ResourceError("approximation error needs GGM over every bipartition; N is capped at " +
                            std::to_string(max_exact_ggm_sites(local_dim)) + " for d=" + std::to_string(local_dim));
    }
    const double h = resolve_step(step, local_dim);
    std::vector<ApproxErrorPoint> out;
    for (int n = n_first; n <= n_last; ++n) {
        ChainSpec chain{n, local_dim, alpha};
        auto f = [&](double t) {
            PhaseModel model{chain, t};
            return std::abs(all_cuts_ggm(model) - ggm_edge(model));
        };
        out.push_back({n, time_average(f, t0, h, jobs)});
    }
    return out;
}

}  // namespace wgs
