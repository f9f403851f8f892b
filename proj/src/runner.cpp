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

#include "wgs/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "wgs/error.hpp"
#include "wgs/exact_state.hpp"
#include "wgs/measures.hpp"
#include "wgs/oracle.hpp"
#include "wgs/parallel.hpp"
#include "wgs/rdm.hpp"

#ifndef WGS_VERSION
#define WGS_VERSION "0.0.0"
#endif

namespace wgs {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kValidateTolerance = 1e-9;

struct NamedExperiment {
    Experiment id;
    const char* name;
};

constexpr NamedExperiment kNames[] = {
    {Experiment::Entropy, "entropy"},         {Experiment::MiTime, "mi-time"},
    {Experiment::MiAverage, "mi-average"},    {Experiment::GgmTime, "ggm-time"},
    {Experiment::AlphaStarFit, "alpha-star-fit"}, {Experiment::AlphaStarJump, "alpha-star-jump"},
    {Experiment::Saturation, "saturation"},   {Experiment::NSat, "nsat"},
    {Experiment::ApproxError, "approx-error"}, {Experiment::Validate, "validate"},
};

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json grid_json(const AlphaGrid& g) { return {{"start", g.start}, {"step", g.step}, {"count", g.count}}; }

AlphaGrid grid_from_json(const json& j) {
    if (j.is_string()) return parse_grid(j.get<std::string>());
    if (j.is_number()) return AlphaGrid{j.get<double>(), 0.0, 1};
    return AlphaGrid{j.value("start", 0.0), j.value("step", 0.0), j.value("count", 1)};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("output path is not writable: " + path.string());
    out << text;
    if (!out) throw UsageError("failed writing " + path.string());
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
double optional_cell(const std::optional<int>& v) { return v ? static_cast<double>(*v) : kNaN; }

void count_unconverged(ResultTable& table, const AveragedValue& v) {
    if (!v.converged) ++table.unconverged;
}

PhaseModel model_at(const SweepConfig& c, double alpha, double t) {
    return PhaseModel{ChainSpec{c.n_sites, c.local_dim, alpha, Boundary::Open, c.max_range}, t};
}

// Row-parallel evaluation with one slot per row, appended in index order.
template <typename Body>
void fill_rows(ResultTable& table, std::size_t count, int jobs, Body&& body) {
    std::vector<std::vector<double>> slots(count);
    parallel_for(count, jobs, [&](std::size_t i) { slots[i] = body(i); });
    for (auto& row : slots) table.rows.push_back(std::move(row));
}

void run_entropy(const SweepConfig& c, ResultTable& table) {
    table.columns = {"alpha", "L", "S_L", "U_L"};
    const double t = c.times.start;
    for (double alpha : c.alpha_points()) {
        const PhaseModel model = model_at(c, alpha, t);
        fill_rows(table, c.l_max, c.jobs, [&](std::size_t k) {
            const int length = static_cast<int>(k) + 1;
            const double u = length % c.sub_length == 0 ? u_l_bound(model, length, c.sub_length) : kNaN;
            return std::vector<double>{model.chain.alpha, double(length), block_entropy(model, length), u};
        });
    }
    table.derived["time"] = t;
    bool bound_holds = true;
    for (const auto& row : table.rows) {
        if (!std::isnan(row[3]) && row[3] < row[2] - 1e-9) bound_holds = false;
    }
    table.derived["u_l_bounds_s_l"] = bound_holds;
}

void run_mi_time(const SweepConfig& c, ResultTable& table) {
    table.columns = {"alpha", "t", "r", "mi"};
    const std::size_t per_alpha = static_cast<std::size_t>(c.times.count) * c.r_max;
    for (double alpha : c.alpha_points()) {
        fill_rows(table, per_alpha, c.jobs, [&](std::size_t k) {
            const double t = c.times.at(static_cast<int>(k / c.r_max));
            const int r = static_cast<int>(k % c.r_max) + 1;
            return std::vector<double>{alpha, t, double(r), mutual_information(model_at(c, alpha, t), r)};
        });
    }
}

void run_mi_average(const SweepConfig& c, ResultTable& table) {
    table.columns = {"alpha", "r", "mi_avg", "mi_avg_half_step", "converged"};
    const double t0 = c.resolved_t0();
    const double step = c.t_step > 0 ? c.t_step : default_quadrature_step(c.local_dim);
    json fits = json::array();
    for (double alpha : c.alpha_points()) {
        std::vector<ScalingPoint> points;
        for (int r = 1; r <= c.r_max; ++r) {
            auto f = [&](double t) { return mutual_information(model_at(c, alpha, t), r); };
            AveragedValue v = time_average(f, t0, step, c.jobs);
            count_unconverged(table, v);
            points.push_back({r, v.value});
            table.rows.push_back({alpha, double(r), v.value, v.half_step_value, v.converged ? 1.0 : 0.0});
        }
        json fit = {{"alpha", alpha}};
        try {
            FitResult fr = fit_mi_scaling(points, 1, c.r_max);
            fit.update({{"a_tilde", fr.a_tilde},
                        {"b_tilde", fr.b_tilde},
                        {"c_tilde", fr.c_tilde},
                        {"residual_rms", fr.residual_rms},
                        {"excluded_r", fr.excluded}});
        } catch (const DomainError& e) {
            fit["error"] = e.what();
        }
        fits.push_back(fit);
    }
    table.derived["fits"] = fits;
    table.derived["t0"] = t0;
    table.derived["quadrature_step"] = step;
}

void run_ggm_time(const SweepConfig& c, ResultTable& table) {
    table.columns = {"alpha", "t", "ggm"};
    json maxima = json::array();
    for (double alpha : c.alpha_points()) {
        const std::size_t first = table.rows.size();
        fill_rows(table, c.times.count, c.jobs, [&](std::size_t k) {
            const double t = c.times.at(static_cast<int>(k));
            return std::vector<double>{alpha, t, ggm(model_at(c, alpha, t))};
        });
        std::size_t best = first;
        for (std::size_t k = first; k < table.rows.size(); ++k) {
            if (table.rows[k][2] > table.rows[best][2]) best = k;
        }
        maxima.push_back({{"alpha", alpha}, {"max_ggm", table.rows[best][2]}, {"t_at_max", table.rows[best][1]}});
    }
    table.derived["maxima"] = maxima;
    table.derived["ceiling"] = 1.0 - 1.0 / c.local_dim;
}

json report_json(const TransitionReport& r) {
    return {{"found", r.found},
            {"alpha_star", r.found ? json(r.alpha_star) : json(nullptr)},
            {"method", to_string(r.method)},
            {"jump_magnitude", r.jump_magnitude},
            {"grid_resolution", r.grid_resolution}};
}

void run_alpha_star_fit(const SweepConfig& c, ResultTable& table) {
    table.columns = {"alpha", "a_tilde"};
    MiFitOptions opts;
    opts.n_sites = c.n_sites;
    opts.t0 = c.resolved_t0();
    opts.step = c.t_step;
    opts.r_max = c.r_max;
    opts.threshold = c.threshold;
    opts.jobs = c.jobs;
    TransitionReport r = alpha_star_from_fit(c.local_dim, c.alphas, opts);
    for (std::size_t i = 0; i < r.alphas.size(); ++i) table.rows.push_back({r.alphas[i], r.values[i]});
    table.derived["transition"] = report_json(r);
    table.derived["threshold"] = c.threshold;
}

void run_alpha_star_jump(const SweepConfig& c, ResultTable& table) {
    table.columns = {"kind", "alpha", "derivative"};
    GgmFamily family{c.local_dim, c.n_sites, c.max_range};
    const double lo = c.alphas.start;
    const double hi = c.alphas.at(c.alphas.count - 1);
    json reports = json::object();
    std::optional<double> stars[2];
    for (auto kind : {DerivativeKind::Alpha, DerivativeKind::Time}) {
        TransitionReport r = alpha_star_from_jump(kind, family, lo, hi, c.alphas.step, c.fine_step, c.jobs);
        const double code = kind == DerivativeKind::Alpha ? 0.0 : 1.0;
        for (std::size_t i = 0; i < r.alphas.size(); ++i) table.rows.push_back({code, r.alphas[i], r.values[i]});
        reports[kind == DerivativeKind::Alpha ? "alpha_derivative" : "time_derivative"] = report_json(r);
        if (r.found) stars[kind == DerivativeKind::Alpha ? 0 : 1] = r.alpha_star;
    }
    table.derived["transitions"] = reports;
    table.derived["log2_d"] = std::log2(static_cast<double>(c.local_dim));
    if (stars[0] && stars[1]) table.derived["alpha_star_gap"] = std::abs(*stars[0] - *stars[1]);
}

SaturationReport saturation_for(const SweepConfig& c) {
    SaturationOptions opts;
    opts.sweep = SizeSweepOptions{c.resolved_t0(), c.t_step, c.n_sites, c.jobs};
    opts.epsilons = c.epsilons;
    return saturation_report(c.local_dim, c.alphas, opts);
}

void saturation_derived(const SaturationReport& rep, ResultTable& table) {
    table.derived["plateau_value"] = rep.plateau_value;
    table.derived["alpha_plateau"] = optional_json(rep.alpha_plateau);
    table.derived["alpha_sat_estimate"] = optional_json(rep.alpha_sat_estimate);
    table.derived["n_sites"] = rep.n_sites;
}

void run_saturation(const SweepConfig& c, ResultTable& table) {
    table.columns = {"alpha", "g_avg"};
    SaturationReport rep = saturation_for(c);
    for (std::size_t i = 0; i < rep.alphas.size(); ++i) table.rows.push_back({rep.alphas[i], rep.g_avg[i]});
    saturation_derived(rep, table);
}

void run_nsat(const SweepConfig& c, ResultTable& table) {
    table.columns = {"alpha", "epsilon", "n_sat", "n_sat_literal"};
    SaturationReport rep = saturation_for(c);
    for (const auto& row : rep.n_sat_table) {
        table.rows.push_back({row.alpha, row.epsilon, optional_cell(row.result.n_sat),
                              optional_cell(row.result.literal_n_sat)});
    }
    saturation_derived(rep, table);
}

void run_approx_error(const SweepConfig& c, ResultTable& table) {
    table.columns = {"n", "error", "error_half_step", "converged"};
    const double alpha = c.alpha_points().front();
    double worst = 0.0;
    for (int n = c.n_first; n <= c.n_sites; ++n) {
        auto points = ggm_approx_error(c.local_dim, n, n, alpha, c.resolved_t0(), c.t_step, c.jobs);
        const AveragedValue& e = points.front().error;
        count_unconverged(table, e);
        worst = std::max(worst, e.value);
        table.rows.push_back({double(n), e.value, e.half_step_value, e.converged ? 1.0 : 0.0});
        table.derived["max_error"] = worst;
    }
}

void run_validate(const SweepConfig& c, ResultTable& table) {
    table.columns = {"instance", "rdm_deviation", "ggm_deviation", "reduction_amplitude_deviation",
                     "reduction_probability_deviation"};
    std::mt19937_64 rng(c.seed);
    std::vector<RandomInstance> instances;
    std::vector<ReductionCase> reductions;
    for (int i = 0; i < c.instances; ++i) {
        instances.push_back(random_instance(rng));
        reductions.push_back(random_reduction_case(rng));
    }
    fill_rows(table, instances.size(), c.jobs, [&](std::size_t i) {
        ReductionCheck red = reduction_check(reductions[i]);
        return std::vector<double>{double(i), rdm_oracle_deviation(instances[i]), ggm_oracle_deviation(instances[i]),
                                   red.amplitude_deviation, red.probability_deviation};
    });
    std::vector<double> worst(4, 0.0);
    for (const auto& row : table.rows) {
        for (int k = 0; k < 4; ++k) worst[k] = std::max(worst[k], row[k + 1]);
    }
    const bool passed = std::all_of(worst.begin(), worst.end(), [](double w) { return w <= kValidateTolerance; });
    table.derived["max_deviation"] = {{"rdm", worst[0]},
                                      {"ggm", worst[1]},
                                      {"reduction_amplitude", worst[2]},
                                      {"reduction_probability", worst[3]}};
    table.derived["tolerance"] = kValidateTolerance;
    table.derived["passed"] = passed;
    if (!passed) throw NumericalError("oracle cross-check exceeded tolerance");
}

}  // namespace

std::string to_string(Experiment experiment) {
    for (const auto& n : kNames) {
        if (n.id == experiment) return n.name;
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
    for (const auto& n : kNames) {
        if (name == n.name) return n.id;
    }
    return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
    static const std::vector<Experiment> all = [] {
        std::vector<Experiment> out;
        for (const auto& n : kNames) out.push_back(n.id);
        return out;
    }();
    return all;
}

std::vector<double> SweepConfig::alpha_points() const {
    return alpha_values.empty() ? alphas.values() : alpha_values;
}

double SweepConfig::resolved_t0() const {
    if (t0 > 0.0) return t0;
    switch (experiment) {
        case Experiment::MiAverage:
        case Experiment::AlphaStarFit: return 15 * kPi;
        case Experiment::Saturation:
        case Experiment::NSat:
        case Experiment::ApproxError: return 3 * kPi;
        default: return 0.0;
    }
}

void SweepConfig::validate() const {
    std::vector<std::string> bad;
    auto check = [&](bool ok, const std::string& field, const std::string& why) {
        if (!ok) bad.push_back(field + ": " + why);
    };
    auto check_grid = [&](const AlphaGrid& g, const std::string& field) {
        check(g.count >= 1, field, "count must be >= 1");
        check(g.count <= 1 || g.step > 0.0, field, "step must be positive when count > 1");
    };
    check(n_sites >= 2, "n", "must be >= 2");
    check(local_dim >= 2, "d", "must be >= 2");
    check(max_range >= 0, "max_range", "must be >= 0");
    check_grid(alphas, "alpha");
    for (double a : alpha_values) check(a >= 0.0, "alpha", "values must be >= 0");
    const bool uniform_only = experiment == Experiment::AlphaStarFit || experiment == Experiment::AlphaStarJump ||
                              experiment == Experiment::Saturation || experiment == Experiment::NSat;
    check(!(uniform_only && !alpha_values.empty()), "alpha", "this experiment needs a uniform start:step:count grid");
    check(alphas.start >= 0.0, "alpha", "must start at >= 0");
    check_grid(times, "times");
    check(times.start >= 0.0, "times", "must start at >= 0");
    check(t0 >= 0.0, "t0", "must be >= 0");
    check(t_step >= 0.0, "t_step", "must be >= 0");
    check(jobs >= 1, "jobs", "must be >= 1");
    check(!out_dir.empty(), "out", "must be non-empty");
    check(!epsilons.empty(), "epsilons", "must be non-empty");
    for (double e : epsilons) check(e > 0.0, "epsilons", "entries must be positive");
    switch (experiment) {
        case Experiment::Entropy: {
            const int cap = local_dim >= 2 ? default_max_block(local_dim) : 0;
            check(l_max >= 1 && l_max < n_sites, "l_max", "must lie in [1, n)");
            check(l_max <= cap, "l_max", "exceeds the RDM block cap " + std::to_string(cap));
            check(sub_length >= 1, "sub_len", "must be >= 1");
            check(2 * sub_length <= cap || sub_length >= l_max, "sub_len",
                  "adjacent pair of sub-blocks exceeds the RDM block cap");
            break;
        }
        case Experiment::MiTime:
        case Experiment::MiAverage:
        case Experiment::AlphaStarFit: check(r_max >= 1 && r_max < n_sites, "r_max", "must lie in [1, n)"); break;
        case Experiment::AlphaStarJump:
            check(alphas.count >= 10, "alpha", "jump scan needs at least 10 grid points");
            check(fine_step > 0.0, "fine_step", "must be positive");
            break;
        case Experiment::ApproxError: check(n_first >= 2 && n_first <= n_sites, "n_first", "must lie in [2, n]"); break;
        case Experiment::Validate: check(instances >= 1, "instances", "must be >= 1"); break;
        default: break;
    }
    if (experiment == Experiment::AlphaStarFit || experiment == Experiment::MiAverage) {
        check(r_max >= 4, "r_max", "scaling fit needs at least 4 separations");
    }
    if (!bad.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw UsageError(msg);
    }
}

json to_json(const SweepConfig& c) {
    return {{"experiment", to_string(c.experiment)},
            {"n", c.n_sites},
            {"d", c.local_dim},
            {"max_range", c.max_range},
            {"alpha", c.alpha_values.empty() ? grid_json(c.alphas) : json(c.alpha_values)},
            {"times", grid_json(c.times)},
            {"t0", c.t0},
            {"t_step", c.t_step},
            {"l_max", c.l_max},
            {"sub_len", c.sub_length},
            {"r_max", c.r_max},
            {"n_first", c.n_first},
            {"epsilons", c.epsilons},
            {"threshold", c.threshold},
            {"fine_step", c.fine_step},
            {"instances", c.instances},
            {"seed", c.seed},
            {"out", c.out_dir},
            {"cache", c.cache_dir},
            {"jobs", c.jobs}};
}

SweepConfig config_from_json(const json& j, SweepConfig c) {
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    try {
        if (j.contains("experiment")) {
            auto e = parse_experiment(j.at("experiment").get<std::string>());
            if (!e) throw UsageError("experiment: unknown name " + j.at("experiment").dump());
            c.experiment = *e;
        }
        c.n_sites = j.value("n", c.n_sites);
        c.local_dim = j.value("d", c.local_dim);
        c.max_range = j.value("max_range", c.max_range);
        if (j.contains("alpha")) {
            if (j.at("alpha").is_array()) {
                c.alpha_values = j.at("alpha").get<std::vector<double>>();
                c.alphas = AlphaGrid{c.alpha_values.empty() ? 0.0 : c.alpha_values.front(), 0.0, 1};
            } else {
                c.alpha_values.clear();
                c.alphas = grid_from_json(j.at("alpha"));
            }
        }
        if (j.contains("times")) c.times = grid_from_json(j.at("times"));
        c.t0 = j.value("t0", c.t0);
        c.t_step = j.value("t_step", c.t_step);
        c.l_max = j.value("l_max", c.l_max);
        c.sub_length = j.value("sub_len", c.sub_length);
        c.r_max = j.value("r_max", c.r_max);
        c.n_first = j.value("n_first", c.n_first);
        c.epsilons = j.value("epsilons", c.epsilons);
        c.threshold = j.value("threshold", c.threshold);
        c.fine_step = j.value("fine_step", c.fine_step);
        c.instances = j.value("instances", c.instances);
        c.seed = j.value("seed", c.seed);
        c.out_dir = j.value("out", c.out_dir);
        c.cache_dir = j.value("cache", c.cache_dir);
        c.jobs = j.value("jobs", c.jobs);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config file: ") + e.what());
    }
    return c;
}

AlphaGrid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    auto number = [&](const std::string& s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("not a number in grid '" + text + "'");
        return v;
    };
    if (parts.size() == 1) return AlphaGrid{number(parts[0]), 0.0, 1};
    if (parts.size() != 3) throw UsageError("grid must be 'value' or 'start:step:count', got '" + text + "'");
    const double count = number(parts[2]);
    if (count != std::floor(count) || count < 1) throw UsageError("grid count must be a positive integer");
    return AlphaGrid{number(parts[0]), number(parts[1]), static_cast<int>(count)};
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_grid(item).start);
    if (out.empty()) throw UsageError("empty value list");
    return out;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t k = 0; k < table.columns.size(); ++k) out += (k ? "," : "") + table.columns[k];
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_number(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::string code_version() { return WGS_VERSION; }

std::string config_hash(const SweepConfig& config) {
    json j = to_json(config);
    j.erase("out");
    j.erase("cache");
    j.erase("jobs");
    j["version"] = code_version();
    return hex(fnv1a(j.dump()));
}

std::optional<CachedResult> cache_lookup(const SweepConfig& config) {
    if (config.cache_dir.empty()) return std::nullopt;
    const std::string key = config_hash(config);
    const fs::path base = fs::path(config.cache_dir) / key;
    const fs::path csv_path = base.string() + ".csv";
    const fs::path json_path = base.string() + ".json";
    std::error_code ec;
    if (!fs::exists(csv_path, ec) || !fs::exists(json_path, ec)) return std::nullopt;
    try {
        CachedResult hit;
        hit.csv = read_file(csv_path);
        hit.metadata = json::parse(read_file(json_path));
        if (hit.metadata.value("config_hash", "") != key || hit.metadata.value("version", "") != code_version() ||
            hit.metadata.value("csv_checksum", "") != hex(fnv1a(hit.csv))) {
            throw std::runtime_error("checksum or key mismatch");
        }
        return hit;
    } catch (const std::exception& e) {
        std::cerr << "warning: ignoring corrupt cache entry " << base.string() << " (" << e.what() << ")\n";
        return std::nullopt;
    }
}

ResultTable compute(const SweepConfig& c) {
    ResultTable table;
    try {
        switch (c.experiment) {
            case Experiment::Entropy: run_entropy(c, table); break;
            case Experiment::MiTime: run_mi_time(c, table); break;
            case Experiment::MiAverage: run_mi_average(c, table); break;
            case Experiment::GgmTime: run_ggm_time(c, table); break;
            case Experiment::AlphaStarFit: run_alpha_star_fit(c, table); break;
            case Experiment::AlphaStarJump: run_alpha_star_jump(c, table); break;
            case Experiment::Saturation: run_saturation(c, table); break;
            case Experiment::NSat: run_nsat(c, table); break;
            case Experiment::ApproxError: run_approx_error(c, table); break;
            case Experiment::Validate: run_validate(c, table); break;
        }
    } catch (const ResourceError& e) {
        table.incomplete = true;
        table.failure = std::string("resource: ") + e.what();
    } catch (const NumericalError& e) {
        table.failure = std::string("numerical: ") + e.what();
    }
    return table;
}

RunOutcome run(const SweepConfig& config) {
    config.validate();
    RunOutcome outcome;
    const fs::path out_dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw UsageError("out: cannot create " + out_dir.string() + ": " + ec.message());
    const std::string stem = to_string(config.experiment);
    outcome.csv_path = (out_dir / (stem + ".csv")).string();
    outcome.json_path = (out_dir / (stem + ".json")).string();

    if (auto hit = cache_lookup(config)) {
        outcome.cache_hit = true;
        outcome.metadata = hit->metadata;
        outcome.metadata["cache_hit"] = true;
        write_file(outcome.csv_path, hit->csv);
        write_file(outcome.json_path, outcome.metadata.dump(2) + "\n");
        return outcome;
    }

    const auto start = std::chrono::steady_clock::now();
    ResultTable table;
    try {
        table = compute(config);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string csv = to_csv(table);
    json meta = {{"experiment", stem},
                 {"config", to_json(config)},
                 {"config_hash", config_hash(config)},
                 {"version", code_version()},
                 {"timestamp", utc_timestamp()},
                 {"seed", config.seed},
                 {"wall_clock_seconds", elapsed},
                 {"derived", table.derived},
                 {"unconverged_points", table.unconverged},
                 {"all_converged", table.unconverged == 0},
                 {"incomplete", table.incomplete},
                 {"failure", table.failure},
                 {"rows", table.rows.size()},
                 {"columns", table.columns},
                 {"csv_checksum", hex(fnv1a(csv))},
                 {"cache_hit", false}};
    write_file(outcome.csv_path, csv);
    write_file(outcome.json_path, meta.dump(2) + "\n");

    if (table.incomplete) {
        outcome.exit_code = 3;
    } else if (!table.failure.empty()) {
        outcome.exit_code = 2;
    } else if (!config.cache_dir.empty()) {
        fs::create_directories(config.cache_dir, ec);
        const fs::path base = fs::path(config.cache_dir) / config_hash(config);
        if (!ec) {
            write_file(base.string() + ".csv", csv);
            write_file(base.string() + ".json", meta.dump(2) + "\n");
        } else {
            std::cerr << "warning: cache directory unavailable: " << ec.message() << "\n";
        }
    }
    outcome.table = std::move(table);
    outcome.metadata = std::move(meta);
    return outcome;
}

SweepConfig default_config(Experiment experiment) {
    SweepConfig c;
    c.experiment = experiment;
    switch (experiment) {
        case Experiment::Entropy:
            c.alphas = {0.5, 0.5, 10};
            c.times = {0.5, 0.0, 1};
            break;
        case Experiment::MiTime: c.times = {0.0, kPi / 16, 65}; break;
        case Experiment::MiAverage: c.alphas = {0.5, 0.1, 16}; break;
        case Experiment::GgmTime:
            c.local_dim = 3;
            c.alpha_values = {0.5, 2.5, 5.0};
            c.alphas = {0.5, 0.0, 1};
            c.times = {0.0, 2.5 * kPi / 120, 121};
            break;
        case Experiment::AlphaStarFit: c.alphas = {0.5, 0.1, 16}; break;
        case Experiment::AlphaStarJump: c.alphas = {0.1, 0.05, 79}; break;
        case Experiment::Saturation:
        case Experiment::NSat: c.alphas = {0.5, 0.25, 23}; break;
        case Experiment::ApproxError:
            c.n_sites = 11;
            c.local_dim = 3;
            c.alphas = {2.0, 0.0, 1};
            break;
        case Experiment::Validate: c.n_sites = 8; break;
    }
    return c;
}

std::string describe_plan(const SweepConfig& config) {
    std::ostringstream os;
    os << "experiment: " << to_string(config.experiment) << "\n";
    os << "config hash: " << config_hash(config) << " (version " << code_version() << ")\n";
    const auto points = config.alpha_points();
    os << "alpha values: " << points.size() << " point(s) from " << format_number(points.front());
    if (points.size() > 1) os << " to " << format_number(points.back());
    os << "\n";
    if (const double t0 = config.resolved_t0(); t0 > 0.0) {
        const double step = config.t_step > 0 ? config.t_step : default_quadrature_step(config.local_dim);
        os << "time average: [0, " << format_number(t0) << "] step " << format_number(step) << "\n";
    }
    os << "outputs: " << (fs::path(config.out_dir) / (to_string(config.experiment) + ".csv")).string() << " + .json\n";
    if (!config.cache_dir.empty()) {
        os << "cache: " << config.cache_dir << (cache_lookup(config) ? " (hit)" : " (miss)") << "\n";
    }
    os << "resolved config:\n" << to_json(config).dump(2) << "\n";
    return os.str();
}

}  // namespace wgs
