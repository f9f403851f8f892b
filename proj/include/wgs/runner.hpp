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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgs/transition.hpp"

namespace wgs {

enum class Experiment {
    Entropy,
    MiTime,
    MiAverage,
    GgmTime,
    AlphaStarFit,
    AlphaStarJump,
    Saturation,
    NSat,
    ApproxError,
    Validate,
};

/// Command-line names: entropy, mi-time, mi-average, ...
std::string to_string(Experiment experiment);
std::optional<Experiment> parse_experiment(const std::string& name);
const std::vector<Experiment>& all_experiments();

/// Thrown for invalid configurations; the message lists every offending field.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct SweepConfig {
    Experiment experiment = Experiment::GgmTime;
    int n_sites = 1000;
    int local_dim = 2;
    int max_range = 0;
    AlphaGrid alphas{1.0, 0.0, 1};
    /// Explicit fall-off values; when non-empty they replace `alphas` for the
    /// per-alpha experiments (entropy, mi-*, ggm-time, approx-error).
    std::vector<double> alpha_values;
    /// Sample times for the *-time experiments; also the single time (start) for entropy.
    AlphaGrid times{0.0, 0.0, 1};
    /// 0 selects the experiment's default window.
    double t0 = 0.0;
    /// 0 selects default_quadrature_step(d).
    double t_step = 0.0;
    int l_max = 10;
    int sub_length = 5;
    int r_max = 15;
    int n_first = 2;
    std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5};
    double threshold = 0.02;
    /// Window step of the refined derivative scan.
    double fine_step = 0.005;
    int instances = 200;
    std::uint64_t seed = 7;
    std::string out_dir = "results";
    std::string cache_dir;
    int jobs = 1;

    /// Throws UsageError naming every invalid field.
    void validate() const;
    double resolved_t0() const;
    std::vector<double> alpha_points() const;
};

nlohmann::json to_json(const SweepConfig& config);
/// Missing keys keep the values already in `base`.
SweepConfig config_from_json(const nlohmann::json& j, SweepConfig base = {});

/// Parses "start:step:count" or a single value.
AlphaGrid parse_grid(const std::string& text);
/// Parses a comma-separated list of values.
std::vector<double> parse_list(const std::string& text);

struct ResultTable {
    std::vector<std::string> columns;
    /// NaN cells are written empty.
    std::vector<std::vector<double>> rows;
    nlohmann::json derived = nlohmann::json::object();
    int unconverged = 0;
    bool incomplete = false;
    std::string failure;
};

/// 17 significant digits, locale independent.
std::string format_number(double value);
std::string to_csv(const ResultTable& table);

std::string code_version();
/// Stable hash of the config fields that affect results plus the code version.
std::string config_hash(const SweepConfig& config);

struct CachedResult {
    std::string csv;
    nlohmann::json metadata;
};

/// Prior result for an identical config and code version. Corrupt entries are
/// reported on stderr and treated as absent.
std::optional<CachedResult> cache_lookup(const SweepConfig& config);

struct RunOutcome {
    int exit_code = 0;
    bool cache_hit = false;
    std::string csv_path;
    std::string json_path;
    ResultTable table;
    nlohmann::json metadata;
};

ResultTable compute(const SweepConfig& config);

/// Executes, writes <out>/<experiment>.csv and .json and fills the cache.
/// Exit codes: 0 ok, 2 numerical or validation failure, 3 resource overrun.
RunOutcome run(const SweepConfig& config);

/// Per-experiment defaults used by the command line before flags are applied.
SweepConfig default_config(Experiment experiment);

/// Human-readable plan for --dry-run.
std::string describe_plan(const SweepConfig& config);

}  // namespace wgs
