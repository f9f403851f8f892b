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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wgs/chain.hpp"
#include "wgs/measures.hpp"

namespace wgs {

/// Uniform grid start + i * step, i < count. Points are never accumulated.
struct AlphaGrid {
    double start = 0.0;
    double step = 0.05;
    int count = 1;

    double at(int i) const { return start + step * i; }
    std::vector<double> values() const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Mutual-information scaling

struct ScalingPoint {
    int r = 1;
    double value = 0.0;
};

/// log2 <I> = -a (log2 r)^2 - b log2 r + c, fitted by least squares.
struct FitResult {
    double a_tilde = 0.0;
    double b_tilde = 0.0;
    double c_tilde = 0.0;
    double residual_rms = 0.0;
    int r_min = 1;
    int r_max = 15;
    int points_used = 0;
    /// Separations dropped because <I> <= 1e-14.
    std::vector<int> excluded;
};

/// Throws DomainError when fewer than 4 usable points fall in [r_min, r_max].
FitResult fit_mi_scaling(std::span<const ScalingPoint> points, int r_min = 1, int r_max = 15);

struct MiFitOptions {
    int n_sites = 1000;
    double t0 = 15.0 * std::numbers::pi;
    /// 0 selects default_quadrature_step(d).
    double step = 0.0;
    int r_min = 1;
    int r_max = 15;
    /// |A~| departure threshold.
    double threshold = 0.02;
    /// Bisection stops once the bracket is this narrow.
    double refine_resolution = 0.01;
    int jobs = 1;
};

/// Time-averaged mutual information <I>_t0 for r = r_min..r_max.
std::vector<ScalingPoint> averaged_mi_profile(const ChainSpec& chain, const MiFitOptions& options);

FitResult mi_fit_at(int local_dim, double alpha, const MiFitOptions& options);

// ---------------------------------------------------------------------------
// Transition reports

enum class TransitionMethod { FitCoefficient, AlphaDerivativeJump, TimeDerivativeJump };

std::string to_string(TransitionMethod method);

struct TransitionReport {
    int local_dim = 0;
    bool found = false;
    double alpha_star = 0.0;
    TransitionMethod method = TransitionMethod::FitCoefficient;
    double jump_magnitude = 0.0;
    double grid_resolution = 0.0;
    /// Scanned curve (A~ or the derivative series).
    std::vector<double> alphas;
    std::vector<double> values;
};

/// alpha*_d as the largest alpha with |A~| < threshold, bracketed on the grid
/// and refined by bisection. found = false when A~ never departs.
TransitionReport alpha_star_from_fit(int local_dim, const AlphaGrid& grid, const MiFitOptions& options);

// ---------------------------------------------------------------------------
// GGM derivatives at t = 2 pi

enum class DerivativeKind { Alpha, Time };

struct DerivativeSeries {
    DerivativeKind kind = DerivativeKind::Alpha;
    std::vector<double> alphas;
    std::vector<double> values;
    double grid_step = 0.0;
};

/// The chain family the GGM identifiers are evaluated on.
struct GgmFamily {
    int local_dim = 2;
    int n_sites = 1000;
    int max_range = 0;
};

inline constexpr double kDefaultAlphaStep = 1e-3;
inline constexpr double kDefaultTimeStep = 1e-4;

/// (f(x + h) - f(x - h)) / 2h
double central_difference(const std::function<double(double)>& f, double x, double h);

/// dG(alpha, 2 pi)/d alpha or dG(alpha, t)/dt at t = 2 pi on every grid point,
/// using the edge GGM. h = 0 picks the default step for the kind; alpha steps
/// above 1e-3 are rejected.
DerivativeSeries ggm_derivative(DerivativeKind kind, const GgmFamily& family, const AlphaGrid& grid, double h = 0.0,
                                int jobs = 1);

/// Finds the grid interval with the largest |forward difference|; alpha* is
/// its midpoint. found = false unless that difference exceeds
/// noise_factor x the median |forward difference|. Needs >= 10 points.
TransitionReport detect_jump(const DerivativeSeries& series, int local_dim = 0, double noise_factor = 5.0);

/// Coarse scan of [lo, hi] at `coarse_step`, then detect_jump again on a
/// +-0.1 window around the coarse estimate at `fine_step`.
TransitionReport alpha_star_from_jump(DerivativeKind kind, const GgmFamily& family, double lo, double hi,
                                      double coarse_step = 0.05, double fine_step = 0.005, int jobs = 1);

struct ScalingLawFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

/// Least squares of alpha* on log2 d. Needs >= 4 points and two distinct d.
ScalingLawFit scaling_law_fit(std::span<const std::pair<int, double>> points);

// ---------------------------------------------------------------------------
// Saturation with system size

struct SizeSweepOptions {
    double t0 = 3.0 * std::numbers::pi;
    /// 0 selects default_quadrature_step(d).
    double step = 0.0;
    int n_max = 1000;
    int jobs = 1;
};

/// <G_edge>_t0 for every chain length N = 2..n_max (entry N - 2), built by
/// growing the edge reduced state one site at a time.
std::vector<double> averaged_ggm_by_size(int local_dim, double alpha, const SizeSweepOptions& options);

struct NSatResult {
    /// Smallest N >= n_min whose next `window` successive differences are < epsilon.
    std::optional<int> n_sat;
    /// Smallest N >= n_min with a single successive difference < epsilon.
    std::optional<int> literal_n_sat;
};

inline constexpr int kDefaultNSatWindow = 5;
inline constexpr int kDefaultNSatMin = 10;

/// `averages[i]` is <G> at N = first_n + i.
NSatResult n_sat(std::span<const double> averages, int first_n, double epsilon, int window = kDefaultNSatWindow,
                 int n_min = kDefaultNSatMin);

NSatResult n_sat(int local_dim, double alpha, double epsilon, const SizeSweepOptions& options,
                 int window = kDefaultNSatWindow, int n_min = kDefaultNSatMin);

struct NSatRow {
    double alpha = 0.0;
    double epsilon = 0.0;
    NSatResult result;
};

struct SaturationReport {
    int local_dim = 0;
    int n_sites = 1000;
    std::vector<double> alphas;
    /// <G>_t0 at N = n_sites for each alpha.
    std::vector<double> g_avg;
    /// <G> at the largest scanned alpha.
    double plateau_value = 0.0;
    /// Smallest alpha after which successive <G> changes stay below 1e-3.
    std::optional<double> alpha_plateau;
    std::vector<NSatRow> n_sat_table;
    /// Smallest alpha from which N_sat is the same for every epsilon.
    std::optional<double> alpha_sat_estimate;
};

struct SaturationOptions {
    SizeSweepOptions sweep;
    std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5};
    int window = kDefaultNSatWindow;
    int n_min = kDefaultNSatMin;
    double plateau_tolerance = 1e-3;
};

SaturationReport saturation_report(int local_dim, const AlphaGrid& grid, const SaturationOptions& options);

/// Index of the first alpha from which every row's N_sat agrees across
/// epsilons (and is defined); nullopt if the last alpha already disagrees.
std::optional<std::size_t> first_epsilon_independent(const std::vector<std::vector<std::optional<int>>>& per_alpha);

// ---------------------------------------------------------------------------
// Edge-GGM approximation error

struct ApproxErrorPoint {
    int n_sites = 0;
    AveragedValue error;
};

/// E(N) = <|G(N, t) - G_edge(N, t)|>_t over [0, t0] with G over every
/// bipartition, for N in [n_first, n_last].
std::vector<ApproxErrorPoint> ggm_approx_error(int local_dim, int n_first, int n_last, double alpha,
                                               double t0 = 3.0 * std::numbers::pi, double step = 0.0, int jobs = 1);

}  // namespace wgs
