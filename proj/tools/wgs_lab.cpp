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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wgs/error.hpp"
#include "wgs/runner.hpp"

namespace {

std::string experiment_names() {
    std::string out;
    for (auto e : wgs::all_experiments()) out += (out.empty() ? "" : ", ") + wgs::to_string(e);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted graph state entanglement sweeps"};
    std::string experiment_name;
    std::string config_file;
    std::string alpha_text, times_text;
    bool dry_run = false;
    wgs::SweepConfig flags;

    app.add_option("experiment", experiment_name, "One of: " + experiment_names())->required();
    app.add_option("--config", config_file, "JSON config file; flags override its fields");
    auto* o_n = app.add_option("--n", flags.n_sites, "Number of sites (largest N for approx-error)");
    auto* o_d = app.add_option("--d", flags.local_dim, "Local dimension");
    auto* o_range = app.add_option("--max-range", flags.max_range, "Coupling cutoff distance, 0 for none");
    auto* o_alpha = app.add_option("--alpha", alpha_text, "Fall-off grid start:step:count, a list a,b,c or a single value");
    auto* o_times = app.add_option("--times", times_text, "Sample-time grid start:step:count or a single time");
    auto* o_t0 = app.add_option("--t0", flags.t0, "Averaging window [0, t0]");
    auto* o_tstep = app.add_option("--t-step", flags.t_step, "Quadrature step");
    auto* o_lmax = app.add_option("--l-max", flags.l_max, "Largest entropy block length");
    auto* o_sub = app.add_option("--sub-len", flags.sub_length, "Sub-block length for the U_L bound");
    auto* o_rmax = app.add_option("--r-max", flags.r_max, "Largest mutual-information separation");
    auto* o_nfirst = app.add_option("--n-first", flags.n_first, "Smallest N for approx-error");
    auto* o_eps = app.add_option("--eps", flags.epsilons, "N_sat tolerances");
    auto* o_thr = app.add_option("--threshold", flags.threshold, "Departure threshold on the fit curvature");
    auto* o_fine = app.add_option("--fine-step", flags.fine_step, "Refined derivative scan step");
    auto* o_inst = app.add_option("--instances", flags.instances, "Random instances for validate");
    auto* o_seed = app.add_option("--seed", flags.seed, "Random seed");
    auto* o_out = app.add_option("--out", flags.out_dir, "Output directory");
    auto* o_cache = app.add_option("--cache", flags.cache_dir, "Result cache directory");
    auto* o_jobs = app.add_option("--jobs", flags.jobs, "Worker threads");
    app.add_flag("--dry-run", dry_run, "Print the resolved plan and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto experiment = wgs::parse_experiment(experiment_name);
        if (!experiment) throw wgs::UsageError("unknown experiment '" + experiment_name + "'; expected one of " +
                                               experiment_names());
        wgs::SweepConfig config = wgs::default_config(*experiment);
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw wgs::UsageError("cannot open config file " + config_file);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw wgs::UsageError("config file " + config_file + ": " + e.what());
            }
            config = wgs::config_from_json(j, config);
            config.experiment = *experiment;
        }
        auto given = [](CLI::Option* o) { return o->count() > 0; };
        if (given(o_n)) config.n_sites = flags.n_sites;
        if (given(o_d)) config.local_dim = flags.local_dim;
        if (given(o_range)) config.max_range = flags.max_range;
        if (given(o_alpha)) {
            if (alpha_text.find(',') != std::string::npos) {
                config.alpha_values = wgs::parse_list(alpha_text);
                config.alphas = {config.alpha_values.front(), 0.0, 1};
            } else {
                config.alpha_values.clear();
                config.alphas = wgs::parse_grid(alpha_text);
            }
        }
        if (given(o_times)) config.times = wgs::parse_grid(times_text);
        if (given(o_t0)) config.t0 = flags.t0;
        if (given(o_tstep)) config.t_step = flags.t_step;
        if (given(o_lmax)) config.l_max = flags.l_max;
        if (given(o_sub)) config.sub_length = flags.sub_length;
        if (given(o_rmax)) config.r_max = flags.r_max;
        if (given(o_nfirst)) config.n_first = flags.n_first;
        if (given(o_eps)) config.epsilons = flags.epsilons;
        if (given(o_thr)) config.threshold = flags.threshold;
        if (given(o_fine)) config.fine_step = flags.fine_step;
        if (given(o_inst)) config.instances = flags.instances;
        if (given(o_seed)) config.seed = flags.seed;
        if (given(o_out)) config.out_dir = flags.out_dir;
        if (given(o_cache)) config.cache_dir = flags.cache_dir;
        if (given(o_jobs)) config.jobs = flags.jobs;

        config.validate();
        if (dry_run) {
            std::cout << wgs::describe_plan(config);
            return 0;
        }
        wgs::RunOutcome outcome = wgs::run(config);
        std::cout << (outcome.cache_hit ? "cache hit: " : "wrote ") << outcome.csv_path << " and "
                  << outcome.json_path << "\n";
        if (outcome.metadata.contains("derived")) std::cout << outcome.metadata["derived"].dump(2) << "\n";
        if (outcome.exit_code == 3) std::cerr << "incomplete: " << outcome.table.failure << "\n";
        if (outcome.exit_code == 2) std::cerr << "failed: " << outcome.table.failure << "\n";
        return outcome.exit_code;
    } catch (const wgs::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const wgs::ResourceError& e) {
        std::cerr << "resource overrun: " << e.what() << "\n";
        return 3;
    } catch (const wgs::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
