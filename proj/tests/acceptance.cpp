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

// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wgs/exact_state.hpp"
#include "wgs/measures.hpp"
#include "wgs/oracle.hpp"
#include "wgs/runner.hpp"
#include "wgs/transition.hpp"

namespace {

using namespace wgs;
constexpr double kPi = std::numbers::pi;

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    if constexpr (sizeof...(Args) == 0) {
        return fmt;
    } else {
        char buf[1024];
        std::snprintf(buf, sizeof buf, fmt, args...);
        return buf;
    }
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void note(const char* fmt, auto... args) { details.push_back(format(fmt, args...)); }
    void require(bool ok, const char* fmt, auto... args) {
        if (!ok) pass = false;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + format(fmt, args...));
    }
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.details.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && elapsed > budget_seconds) {
        out.pass = false;
        out.details.push_back("runtime over budget");
    }
    std::printf("[%s] %2d %s (%.1fs", out.pass ? "PASS" : "FAIL", id, title, elapsed);
    if (budget_seconds > 0) std::printf(", budget %.0fs", budget_seconds);
    std::printf(")\n");
    for (const auto& d : out.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    criterion(1, "oracle equivalence: closed-form RDM vs partial trace, 200 instances", 120, [](Outcome& o) {
        std::mt19937_64 rng(20260101);
        double worst = 0.0;
        std::string where;
        for (int i = 0; i < 200; ++i) {
            RandomInstance inst = random_instance(rng);
            const double dev = rdm_oracle_deviation(inst);
            if (dev > worst) {
                worst = dev;
                where = describe(inst);
            }
        }
        o.require(worst <= 1e-10, "max entry deviation %.3g (tolerance 1e-10) at %s", worst, where.c_str());
    });

    criterion(2, "GGM ceiling 1-1/d at t=2pi/d, N=1000", 60, [](Outcome& o) {
        for (int d : {2, 3}) {
            for (double alpha : {0.5, 2.5, 5.0}) {
                const double g = ggm_edge(PhaseModel{{1000, d, alpha}, 2 * kPi / d});
                o.require(std::abs(g - (1.0 - 1.0 / d)) <= 1e-3, "d=%d alpha=%.1f G=%.12f", d, alpha, g);
            }
        }
    });

    std::vector<std::pair<int, double>> detected;
    criterion(3, "NL->QL transition from derivative jumps (Gbar_alpha and Gbar_t)", 1800, [&](Outcome& o) {
        const double expected[] = {1.000, 1.585, 2.000, 2.322};
        for (int d = 2; d <= 5; ++d) {
            GgmFamily family{d, 1000};
            TransitionReport ra = alpha_star_from_jump(DerivativeKind::Alpha, family, 0.1, 4.0, 0.05, 0.005);
            TransitionReport rt = alpha_star_from_jump(DerivativeKind::Time, family, 0.1, 4.0, 0.05, 0.005);
            o.require(ra.found && std::abs(ra.alpha_star - expected[d - 2]) <= 0.02,
                      "d=%d Gbar_alpha jump at %.4f (expected %.3f +- 0.02), |jump|=%.3g", d, ra.alpha_star,
                      expected[d - 2], ra.jump_magnitude);
            o.require(rt.found && std::abs(rt.alpha_star - ra.alpha_star) <= 0.005 + 1e-12,
                      "d=%d Gbar_t jump at %.4f (within one 0.005 step of Gbar_alpha)", d, rt.alpha_star);
            if (ra.found) detected.push_back({d, ra.alpha_star});
        }
    });

    criterion(4, "scaling law alpha*_d ~ log2 d over d=2..5", 0, [&](Outcome& o) {
        o.require(detected.size() == 4, "%zu detected transition points", detected.size());
        ScalingLawFit fit = scaling_law_fit(detected);
        o.require(std::abs(fit.slope - 1.0) <= 0.05, "slope %.4f (1 +- 0.05)", fit.slope);
        o.require(std::abs(fit.intercept) <= 0.05, "intercept %.4f (0 +- 0.05)", fit.intercept);
        o.note("residual rms %.3g", fit.residual_rms);
    });

    criterion(5, "MI-fit transition: |A~|<0.02 below alpha*-0.1, A~>0.05 by alpha*+0.3 (d=2,3)", 3600, [](Outcome& o) {
        MiFitOptions opts;  // N=1000, t0=15pi, r=1..15
        for (int d : {2, 3}) {
            const double star = std::log2(static_cast<double>(d));
            std::vector<double> low;
            for (int k = 1; 0.1 * k < star - 0.1 - 1e-9; ++k) low.push_back(0.1 * k);
            low.push_back(star - 0.1);
            double worst = 0.0, worst_alpha = 0.0;
            std::string curve;
            for (double a : low) {
                const double v = mi_fit_at(d, a, opts).a_tilde;
                char buf[48];
                std::snprintf(buf, sizeof buf, " %.2f:%+.4f", a, v);
                curve += buf;
                if (std::abs(v) > worst) {
                    worst = std::abs(v);
                    worst_alpha = a;
                }
            }
            o.note("d=%d A~ on the low grid:%s", d, curve.c_str());
            o.require(worst < 0.02, "d=%d max |A~| for alpha <= %.3f is %.4f at alpha=%.2f (needs < 0.02)", d,
                      star - 0.1, worst, worst_alpha);
            const double high = mi_fit_at(d, star + 0.3, opts).a_tilde;
            o.require(high > 0.05, "d=%d A~(%.3f) = %.4f (needs > 0.05)", d, star + 0.3, high);
        }
    });

    criterion(6, "edge-GGM approximation error, d=3, alpha=2, N<=11", 1200, [](Outcome& o) {
        auto points = ggm_approx_error(3, 2, 11, 2.0, 3 * kPi);
        bool all_small = true;
        std::string series;
        for (const auto& p : points) {
            char buf[48];
            std::snprintf(buf, sizeof buf, " %d:%.3g", p.n_sites, p.error.value);
            series += buf;
            if (!(p.error.value < 1e-3)) all_small = false;
        }
        o.note("E(N):%s", series.c_str());
        o.require(all_small, "E(N) < 1e-3 for every N <= 11");
        o.require(points.back().error.value < 1e-3, "E(11) = %.3g < 1e-3", points.back().error.value);
        bool decreasing = true;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            if (points[i].n_sites >= 5 && !(points[i + 1].error.value < points[i].error.value)) decreasing = false;
        }
        o.require(decreasing, "log E strictly decreasing over N=5..11");
    });

    criterion(7, "saturation values <G>_3pi at alpha=6, N=1000", 0, [](Outcome& o) {
        const double expected[] = {0.18, 0.36, 0.48, 0.56};
        for (int d = 2; d <= 5; ++d) {
            SizeSweepOptions opts{3 * kPi, 0.0, 1000, 1};
            const double g = averaged_ggm_by_size(d, 6.0, opts).back();
            o.require(std::abs(g - expected[d - 2]) <= 0.02, "d=%d <G> = %.4f (expected %.2f +- 0.02)", d, g,
                      expected[d - 2]);
        }
    });

    criterion(8, "N_sat epsilon-independence (d=3) and plateau onset (d=2)", 0, [](Outcome& o) {
        SaturationOptions opts;
        opts.sweep = SizeSweepOptions{3 * kPi, 0.0, 1000, 1};
        const AlphaGrid grid{0.5, 0.25, 23};
        SaturationReport r3 = saturation_report(3, grid, opts);
        const std::size_t per = opts.epsilons.size();
        bool high_ok = true, low_ok = true;
        for (std::size_t i = 0; i < r3.alphas.size(); ++i) {
            std::string cells;
            bool same = true;
            for (std::size_t k = 0; k < per; ++k) {
                const auto& v = r3.n_sat_table[i * per + k].result.n_sat;
                cells += v ? " " + std::to_string(*v) : std::string(" -");
                same = same && v && v == r3.n_sat_table[i * per].result.n_sat;
            }
            if (r3.alphas[i] >= 3.5 - 1e-9 && !same) high_ok = false;
            if (r3.alphas[i] <= 2.5 + 1e-9 && same) low_ok = false;
            o.note("d=3 alpha=%.2f N_sat(eps=1e-2..1e-5):%s", r3.alphas[i], cells.c_str());
        }
        o.require(high_ok, "d=3 N_sat identical across epsilon for every alpha >= 3.5");
        o.require(low_ok, "d=3 N_sat epsilon-dependent for every alpha <= 2.5");
        SaturationReport r2 = saturation_report(2, grid, opts);
        o.require(r2.alpha_sat_estimate && std::abs(*r2.alpha_sat_estimate - 2.0) <= 0.5,
                  "d=2 epsilon-independence onset alpha = %.2f (near 2, +- 0.5)",
                  r2.alpha_sat_estimate ? *r2.alpha_sat_estimate : -1.0);
        o.note("d=2 plateau entry (|step| < 1e-3) at alpha = %.2f, plateau <G> = %.4f",
               r2.alpha_plateau ? *r2.alpha_plateau : -1.0, r2.plateau_value);
    });

    criterion(9, "entropy laws at t=0.5, N=1000", 0, [](Outcome& o) {
        PhaseModel local{{1000, 2, 5.0}, 0.5};
        const double s10 = block_entropy(local, 10), s9 = block_entropy(local, 9);
        o.require(std::abs(s10 - s9) < 1e-2, "(a) d=2 alpha=5 |S10 - S9| = %.3g", std::abs(s10 - s9));
        PhaseModel nonlocal{{1000, 3, 0.5}, 0.5};
        bool increasing = true;
        double prev = -1.0;
        std::string series;
        for (int l = 1; l <= 6; ++l) {
            const double s = block_entropy(nonlocal, l);
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.4f", s);
            series += buf;
            increasing = increasing && s > prev;
            prev = s;
        }
        o.require(increasing, "(b) d=3 alpha=0.5 S_1..S_6:%s", series.c_str());
        double worst = 1e300;
        int checked = 0;
        for (int d : {2, 3}) {
            const int l_cap = std::min(default_max_block(d), 10);
            for (double alpha : {0.5, 1.0, 2.0, 3.0, 5.0}) {
                PhaseModel m{{1000, d, alpha}, 0.5};
                for (int sub : {2, 3, 5}) {
                    if (2 * sub > l_cap) continue;
                    for (int l = 2 * sub; l <= l_cap; l += sub) {
                        worst = std::min(worst, u_l_bound(m, l, sub) - block_entropy(m, l));
                        ++checked;
                    }
                }
            }
        }
        o.require(worst >= -1e-9, "(c) min(U_L - S_L) = %.3g over %d instances", worst, checked);
    });

    criterion(10, "measurement reduction to the (N-1)-qudit state, 50 cases", 0, [](Outcome& o) {
        std::mt19937_64 rng(4242);
        double amp = 0.0, prob = 0.0;
        for (int i = 0; i < 50; ++i) {
            ReductionCheck c = reduction_check(random_reduction_case(rng));
            amp = std::max(amp, c.amplitude_deviation);
            prob = std::max(prob, c.probability_deviation);
        }
        o.require(amp <= 1e-10, "max amplitude deviation %.3g (1e-10)", amp);
        o.require(prob <= 1e-12, "max |p - 1/d| %.3g (1e-12)", prob);
    });

    criterion(11, "determinism: CSV bodies identical at jobs 1 and 8", 0, [](Outcome& o) {
        namespace fs = std::filesystem;
        const fs::path root = fs::temp_directory_path() / "wgs_acceptance_determinism";
        fs::remove_all(root);
        std::vector<SweepConfig> configs;
        configs.push_back(default_config(Experiment::GgmTime));
        SweepConfig nsat = default_config(Experiment::NSat);
        nsat.local_dim = 3;
        nsat.n_sites = 200;
        configs.push_back(nsat);
        SweepConfig mi = default_config(Experiment::MiAverage);
        mi.n_sites = 200;
        mi.alphas = {0.5, 0.5, 3};
        mi.t0 = 3 * kPi;
        configs.push_back(mi);
        SweepConfig val = default_config(Experiment::Validate);
        val.instances = 40;
        configs.push_back(val);
        for (auto& c : configs) {
            SweepConfig a = c, b = c;
            a.out_dir = (root / "serial").string();
            b.out_dir = (root / "parallel").string();
            b.jobs = 8;
            RunOutcome ra = run(a), rb = run(b);
            const std::string ca = slurp(ra.csv_path), cb = slurp(rb.csv_path);
            o.require(ra.exit_code == 0 && rb.exit_code == 0 && ca == cb && !ca.empty(),
                      "%s: %zu bytes, identical=%d", to_string(c.experiment).c_str(), ca.size(), int(ca == cb));
        }
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
