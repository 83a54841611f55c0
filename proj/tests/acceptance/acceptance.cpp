// Copyright 2026 The fockmetro Authors
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

// Acceptance runner: evaluates the fourteen release criteria and prints one
// PASS/FAIL line per criterion. Exit status is 0 when every criterion passes
// or is listed with --known-failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fockmetro/analysis.hpp"
#include "fockmetro/error.hpp"
#include "fockmetro/metrology.hpp"
#include "fockmetro/optimize.hpp"
#include "support/properties.hpp"

using namespace fockmetro;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, auto... args) {
    std::string out(static_cast<std::size_t>(std::snprintf(nullptr, 0, format, args...)), '\0');
    std::snprintf(out.data(), out.size() + 1, format, args...);
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Preparation and measurement runs reused by several criteria.
class Runs {
  public:
    Runs(std::size_t seeds, std::size_t workers) {
        config_.seeds = seeds;
        config_.workers = workers;
    }

    const OptimizerConfig &config() const { return config_; }

    const std::vector<OptRecord> &preparation(Nonlinearity kind, double n, std::size_t d_max) {
        auto &slot = prep_[{kind, n}];
        if (slot.first < d_max) {
            std::vector<std::size_t> schedule;
            for (std::size_t d = 1; d <= d_max; ++d) {
                schedule.push_back(d);
            }
            OptimizerConfig c = config_;
            c.d_max = d_max;
            slot.second = optimize_preparation(ProblemSpec{kind, n}, schedule, c);
            slot.first = d_max;
        }
        return slot.second;
    }

    AnsatzParams best_prepared(Nonlinearity kind, double n, std::size_t d) {
        const auto best = best_record(preparation(kind, n, d), d);
        require(best.has_value(), ErrorCode::kNumerical, "no successful preparation record");
        return AnsatzParams::from_flat(kind, best->best_params);
    }

    // Pre-measurement runs on the best prepared probe of each depth.
    const std::vector<OptRecord> &measurement(Nonlinearity kind, double n, MeasurementKind measure,
                                              std::size_t d_max) {
        auto &slot = measure_[{kind, n, measure}];
        if (slot.first < d_max) {
            const ProblemSpec problem{kind, n};
            std::vector<ProbeSource> probes;
            std::vector<std::size_t> schedule;
            for (std::size_t d = 1; d <= d_max; ++d) {
                probes.push_back({best_prepared(kind, n, d), 0.0});
                schedule.push_back(d);
            }
            const bool emitters = kind == Nonlinearity::kJC;
            const MeasurementModel model = measure == MeasurementKind::kCounting
                                               ? MeasurementModel::counting(emitters)
                                               : MeasurementModel::homodyne(0.0, problem.resolved_cutoff(), emitters);
            OptimizerConfig c = config_;
            c.d_max = d_max;
            slot.second = optimize_measurement(problem, probes, model, schedule, c);
            slot.first = d_max;
        }
        return slot.second;
    }

  private:
    OptimizerConfig config_;
    std::map<std::pair<Nonlinearity, double>, std::pair<std::size_t, std::vector<OptRecord>>> prep_;
    std::map<std::tuple<Nonlinearity, double, MeasurementKind>, std::pair<std::size_t, std::vector<OptRecord>>>
        measure_;
};

double best_inverse(const std::vector<OptRecord> &records, std::size_t d) {
    const auto best = best_record(records, d);
    require(best.has_value(), ErrorCode::kNumerical, "no successful record at depth " + std::to_string(d));
    return best->inverse_fisher();
}

double first_minimum_time(Nonlinearity kind, double n, const std::vector<double> &grid) {
    const auto minima = find_minima(sweep_continuous(kind, n, grid));
    require(!minima.empty(), ErrorCode::kNotFound, "no interior minimum on the grid");
    return minima.front().time;
}

// r^2 of y = a sqrt(x) through the origin, against the mean-centred spread.
double sqrt_proportional_r2(const std::vector<double> &xs, const std::vector<double> &ys) {
    double sxy = 0.0, sxx = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += std::sqrt(xs[i]) * ys[i];
        sxx += xs[i];
        mean += ys[i];
    }
    mean /= static_cast<double>(ys.size());
    const double a = sxy / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ss_res += std::pow(ys[i] - a * std::sqrt(xs[i]), 2);
        ss_tot += std::pow(ys[i] - mean, 2);
    }
    return 1.0 - ss_res / ss_tot;
}

// ---------------------------------------------------------------------------

Outcome bounds_table(Runs &) {
    const Bounds b = bounds(20.0);
    const bool pass = std::abs(b.sql_inv_fi - 0.05) <= 1e-15 && std::abs(b.tfs_inv_fi - 2.0 / 440.0) <= 1e-15 &&
                      std::abs(b.hl_inv_fi - 2.5e-3) <= 1e-15;
    return {pass, fmt("SQL %.6g  TFS %.6g  HL %.6g", b.sql_inv_fi, b.tfs_inv_fi, b.hl_inv_fi)};
}

Outcome oracle_equivalence(Runs &) {
    testing::Sampler sampler(20260101);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double n = sampler.uniform(1.0, 20.0);
        const CompositeState probe = sampler.random_probe(Nonlinearity::kKerr, n, 40, sampler.index(1, 3));
        const double fidelity = qfi_fidelity(probe, kDefaultPhi, 1e-2).value;
        const double oracle = qfi_variance_oracle(probe, kDefaultPhi).value;
        worst = std::max(worst, std::abs(fidelity - oracle) / oracle);
    }
    return {worst <= 1e-3, fmt("20 random circuit probes, worst relative gap %.3g (limit 1e-3)", worst)};
}

Outcome jc_sweep(Runs &) {
    const auto records = sweep_continuous(Nonlinearity::kJC, 20.0, default_time_grid(Nonlinearity::kJC));
    const auto minima = find_minima(records);
    require(!minima.empty(), ErrorCode::kNotFound, "no minima");
    bool located = true;
    std::string where;
    for (const double target : {5.0, 16.0, 26.0}) {
        double nearest = -1.0;
        for (const Extremum &m : minima) {
            if (nearest < 0.0 || std::abs(m.time - target) < std::abs(nearest - target)) {
                nearest = m.time;
            }
        }
        located = located && std::abs(nearest - target) <= 0.1 * target;
        where += fmt("%.2f ", nearest);
    }
    const double ratio = minima.front().value / bounds(20.0).tfs_inv_fi;
    return {located && ratio <= 1.05,
            fmt("minima at %s(targets 5 16 26 +-10%%); first minimum %.4f x TFS (limit 1.05)", where.c_str(), ratio)};
}

Outcome jc_sqrt_law(Runs &) {
    const auto grid = uniform_grid(0.0, 12.0, 121);
    std::vector<double> ns{4, 8, 12, 16, 20}, times;
    for (double n : ns) {
        times.push_back(first_minimum_time(Nonlinearity::kJC, n, grid));
    }
    const FitResult f = fit(FitModel::kSqrt, ns, times);
    return {f.r_squared >= 0.98,
            fmt("first minima %.3f %.3f %.3f %.3f %.3f; r^2 %.5f (limit 0.98)", times[0], times[1], times[2], times[3],
                times[4], f.r_squared)};
}

Outcome kerr_revivals(Runs &) {
    const auto grid = default_time_grid(Nonlinearity::kKerr);
    const double step = grid[1] - grid[0];
    bool pass = true;
    std::string detail;
    for (double n : {8.0, 20.0}) {
        const auto records = sweep_continuous(Nonlinearity::kKerr, n, grid);
        double worst_value = 0.0, worst_shift = 0.0;
        for (int k = 1; k <= 4; ++k) {
            const double target = k * kPi / 2.0;
            std::size_t i0 = 0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (std::abs(grid[i] - target) < std::abs(grid[i0] - target)) {
                    i0 = i;
                }
            }
            worst_value = std::max(worst_value, std::abs(records[i0].inv_qfi * n - 1.0));
            // Nearest grid local maximum of 1/F_Q (endpoints compare one side).
            double shift = 1e9;
            for (std::size_t i = i0 > 2 ? i0 - 2 : 0; i < std::min(grid.size(), i0 + 3); ++i) {
                const bool left = i == 0 || records[i].inv_qfi >= records[i - 1].inv_qfi;
                const bool right = i + 1 == grid.size() || records[i].inv_qfi >= records[i + 1].inv_qfi;
                if (left && right) {
                    shift = std::min(shift, std::abs(grid[i] - target));
                }
            }
            worst_shift = std::max(worst_shift, shift);
        }
        pass = pass && worst_value <= 0.05 && worst_shift <= step + 1e-12;
        detail += fmt("N=%g: worst |N/F_Q - 1| %.4f, worst revival offset %.4g; ", n, worst_value, worst_shift);
    }
    return {pass, detail + "limits 5% and pi/200"};
}

Outcome kerr_plateau(Runs &) {
    const double tfs = bounds(20.0).tfs_inv_fi;
    const double a = evaluate_continuous(Nonlinearity::kKerr, 20.0, kPi / 3.0).inv_qfi / tfs;
    const double b = evaluate_continuous(Nonlinearity::kKerr, 20.0, kPi / 4.0).inv_qfi / tfs;
    return {a <= 1.1 && b <= 1.1, fmt("1/F_Q at pi/3: %.4f x TFS, at pi/4: %.4f x TFS (limit 1.1)", a, b)};
}

Outcome kerr_tfs_time(Runs &) {
    std::vector<double> ns, times;
    std::string missing;
    for (double n = 4; n <= 20; n += 2) {
        try {
            times.push_back(time_to_tfs(Nonlinearity::kKerr, n));
            ns.push_back(n);
        } catch (const Error &e) {
            if (e.code() != ErrorCode::kNotFound) {
                throw;
            }
            double closest = 0.0;
            for (const SweepRecord &r : sweep_continuous(Nonlinearity::kKerr, n, uniform_grid(0.0, 10.0, 1001))) {
                closest = std::max(closest, bounds(n).tfs_inv_fi / r.inv_qfi);
            }
            missing += fmt("N=%g max F_Q/F_TFS %.5f; ", n, closest);
        }
    }
    if (!missing.empty()) {
        return {false, "no crossing of the twin-Fock value on [0, 10]: " + missing};
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < times.size(); ++i) {
        decreasing = decreasing && times[i] < times[i - 1];
    }
    std::vector<double> tail_n, tail_t;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] >= 10) {
            tail_n.push_back(ns[i]);
            tail_t.push_back(times[i]);
        }
    }
    const double slope = fit(FitModel::kPowerLaw, tail_n, tail_t).coefficients[1];
    return {decreasing && std::abs(slope + 0.31) <= 0.10,
            fmt("strictly decreasing: %s; log-log slope over N=10..20 %.3f (target -0.31 +- 0.10)",
                decreasing ? "yes" : "no", slope)};
}

bool monotone_per_seed(const std::vector<OptRecord> &records, std::size_t d_max) {
    std::map<std::size_t, std::vector<const OptRecord *>> by_seed;
    for (const OptRecord &r : records) {
        if (r.d <= d_max) {
            by_seed[r.seed].push_back(&r);
        }
    }
    for (auto &[seed, rows] : by_seed) {
        std::sort(rows.begin(), rows.end(), [](auto *a, auto *b) { return a->d < b->d; });
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!rows[i]->ok() || rows[i]->best_objective > rows[i - 1]->best_objective + 1e-12) {
                return false;
            }
        }
    }
    return true;
}

Outcome programmable_kerr(Runs &runs) {
    const auto start = std::chrono::steady_clock::now();
    OptimizerConfig fast = runs.config();
    fast.d_max = 4;
    const auto fast_records = optimize_preparation(ProblemSpec{Nonlinearity::kKerr, 10.0}, {1, 2, 3, 4}, fast);
    const double fast_best = best_inverse(fast_records, 4) * 100.0;
    const double fast_time = seconds_since(start);

    const auto &records = runs.preparation(Nonlinearity::kKerr, 20.0, 6);
    const double best = best_inverse(records, 4);
    const bool monotone = monotone_per_seed(records, 6) && monotone_per_seed(fast_records, 4);
    return {best <= 1.2 * 2.5e-3 && monotone && fast_best <= 1.25 && fast_time <= 1800.0,
            fmt("N=20 d=4 best 1/F_Q %.4g (limit 3.0e-3, %.3f x HL); per-seed monotone: %s; N=10 fast variant "
                "%.3f / N^2 in %.0f s (limits 1.25, 1800 s)",
                best, best / 2.5e-3, monotone ? "yes" : "no", fast_best, fast_time)};
}

Outcome programmable_jc(Runs &runs) {
    const auto &records = runs.preparation(Nonlinearity::kJC, 20.0, 8);
    double best = 1e9;
    for (std::size_t d = 4; d <= 8; ++d) {
        best = std::min(best, best_inverse(records, d));
    }
    const double d4 = best_inverse(records, 4);
    return {best < bounds(20.0).tfs_inv_fi,
            fmt("N=20 best 1/F_Q over d>=4 %.5g, at d=4 %.5g (TFS %.5g)", best, d4, bounds(20.0).tfs_inv_fi)};
}

Outcome interaction_budgets(Runs &runs) {
    const std::vector<double> ns{4, 8, 12, 16, 20};
    std::vector<double> b2, b8, kerr;
    double worst_ratio = 1.0;
    for (double n : ns) {
        const auto &jc = runs.preparation(Nonlinearity::kJC, n, 8);
        b2.push_back(best_record(jc, 2)->budget.total);
        b8.push_back(best_record(jc, 8)->budget.total);
        worst_ratio = std::max(worst_ratio, std::max(b2.back(), b8.back()) / std::min(b2.back(), b8.back()));
        kerr.push_back(best_record(runs.preparation(Nonlinearity::kKerr, n, 4), 4)->budget.total);
    }
    const double r2_2 = sqrt_proportional_r2(ns, b2);
    const double r2_8 = sqrt_proportional_r2(ns, b8);
    bool kerr_decreasing = true;
    for (std::size_t i = 1; i < kerr.size(); ++i) {
        kerr_decreasing = kerr_decreasing && kerr[i] < kerr[i - 1];
    }
    std::string listing;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        listing += fmt("N=%g %.2f/%.2f/%.3f ", ns[i], b2[i], b8[i], kerr[i]);
    }
    return {worst_ratio <= 1.5 && r2_2 >= 0.9 && r2_8 >= 0.9 && kerr_decreasing,
            fmt("JC d2/d8, Kerr d4 budgets: %s; worst d2:d8 ratio %.3f (limit 1.5); sqrt(N) r^2 %.3f / %.3f "
                "(limit 0.9); Kerr decreasing: %s",
                listing.c_str(), worst_ratio, r2_2, r2_8, kerr_decreasing ? "yes" : "no")};
}

Outcome measurement(Runs &runs) {
    const double tfs = bounds(20.0).tfs_inv_fi;
    SweepOptions options;
    options.counting = true;
    const SweepRecord probe = best_counting_probe(Nonlinearity::kKerr, 20.0, default_time_grid(Nonlinearity::kKerr),
                                                  options);
    const double continuous = *probe.inv_cfi_counting / tfs;
    const double counting = best_inverse(runs.measurement(Nonlinearity::kKerr, 20.0, MeasurementKind::kCounting, 3), 3);
    const double homodyne = best_inverse(runs.measurement(Nonlinearity::kKerr, 20.0, MeasurementKind::kHomodyne, 6), 3);
    return {std::abs(continuous - 1.0) <= 0.05 && counting < tfs && homodyne < tfs && homodyne >= counting,
            fmt("continuous probe (K=%.4f) counting %.4f x TFS (limit +-5%%); d=3 with circuit: counting %.5g, "
                "homodyne %.5g (TFS %.5g)",
                probe.time, continuous, counting, homodyne, tfs)};
}

Outcome theta_sweeps(Runs &) {
    const std::size_t points = 200;
    std::vector<double> thetas(points);
    for (std::size_t i = 0; i < points; ++i) {
        thetas[i] = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(points);
    }
    const double step = thetas[1];
    const auto wrap = [](double a) { return std::abs(std::remainder(a, 2.0 * kPi)); };
    const auto jc_grid = uniform_grid(0.0, 12.0, 121);
    std::map<double, double> jc, kerr;
    for (double n : {8.0, 12.0, 16.0, 20.0}) {
        const double t = first_minimum_time(Nonlinearity::kJC, n, jc_grid);
        jc[n] = sweep_theta(Nonlinearity::kJC, n, t, thetas).theta_min;
        kerr[n] = sweep_theta(Nonlinearity::kKerr, n, kPi / 4.0, thetas).theta_min;
    }
    bool stable = true;
    for (double n : {8.0, 12.0, 16.0}) {
        stable = stable && wrap(jc[n] - jc[20.0]) <= step + 1e-9 && wrap(kerr[n] - kerr[20.0]) <= step + 1e-9;
    }
    const bool jc_ok = wrap(jc[20.0] - 2.0 * kPi / 3.0) <= 0.1;
    const bool kerr_ok = wrap(kerr[20.0] - 0.17 * kPi) <= 0.05 * kPi;
    return {jc_ok && kerr_ok && stable,
            fmt("N=20 theta_min JC %.4f pi (target 0.6667 pi +- 0.1 rad), Kerr %.4f pi (target 0.17 pi +- 0.05 pi); "
                "N=8..20 JC %.3f %.3f %.3f %.3f pi, Kerr %.3f %.3f %.3f %.3f pi; stable within one step: %s",
                jc[20.0] / kPi, kerr[20.0] / kPi, jc[8.0] / kPi, jc[12.0] / kPi, jc[16.0] / kPi, jc[20.0] / kPi,
                kerr[8.0] / kPi, kerr[12.0] / kPi, kerr[16.0] / kPi, kerr[20.0] / kPi, stable ? "yes" : "no")};
}

Outcome ablation(Runs &runs) {
    const ProblemSpec problem{Nonlinearity::kKerr, 20.0};
    const auto &with_circuit = runs.measurement(Nonlinearity::kKerr, 20.0, MeasurementKind::kHomodyne, 6);
    const MeasurementModel zero = MeasurementModel::homodyne(0.0, problem.resolved_cutoff(), false);
    bool ordered = true;
    double without = 0.0;
    std::string listing;
    for (std::size_t d = 1; d <= 6; ++d) {
        const CompositeState probe = run_circuit(runs.best_prepared(Nonlinearity::kKerr, 20.0, d), problem.initial());
        without = 1.0 / cfi(encoded_family(probe, problem.phi), zero).value;
        const double with = best_inverse(with_circuit, d);
        ordered = ordered && without >= with;
        listing += fmt("d=%zu %.4g/%.4g ", d, without, with);
    }
    const double sql = bounds(20.0).sql_inv_fi;
    return {ordered && std::abs(without / sql - 1.0) <= 0.2,
            fmt("homodyne theta=0 without/with circuit: %s; d=6 without circuit %.3f x SQL (limit 1 +- 0.2)",
                listing.c_str(), without / sql)};
}

Outcome properties(Runs &) {
    const auto start = std::chrono::steady_clock::now();
    const auto reports = testing::run_all_properties(100, 7);
    bool pass = true;
    std::string detail;
    for (const auto &r : reports) {
        pass = pass && r.ok() && r.cases >= 100;
        detail += fmt("%s %zu/%zu; ", r.name.c_str(), r.cases - r.failures, r.cases);
        if (!r.ok()) {
            detail += "first failure: " + r.first_failure + "; ";
        }
    }
    const double elapsed = seconds_since(start);
    return {pass && elapsed < 600.0, detail + fmt("%.0f s (limit 600 s)", elapsed)};
}

struct Criterion {
    int id;
    const char *title;
    std::function<Outcome(Runs &)> run;
};

std::set<int> parse_ids(const std::string &text) {
    std::set<int> ids;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            ids.insert(std::stoi(item));
        }
    }
    return ids;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"fockmetro acceptance criteria"};
    std::string only;
    std::string known;
    std::size_t seeds = 10;
    std::size_t workers = 0;
    app.add_option("--only", only, "Comma-separated criterion ids to run");
    app.add_option("--known-failures", known, "Criterion ids whose failure does not affect the exit status");
    app.add_option("--seeds", seeds, "Seeds per optimization (criteria are calibrated for 10)")->capture_default_str();
    app.add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "bounds table", bounds_table},
        {2, "QFI oracle equivalence", oracle_equivalence},
        {3, "JC continuous sweep", jc_sweep},
        {4, "JC square-root law", jc_sqrt_law},
        {5, "Kerr revivals", kerr_revivals},
        {6, "Kerr cat plateau", kerr_plateau},
        {7, "Kerr TFS crossing scaling", kerr_tfs_time},
        {8, "programmable Kerr", programmable_kerr},
        {9, "programmable JC", programmable_jc},
        {10, "interaction budgets", interaction_budgets},
        {11, "measurement", measurement},
        {12, "quadrature-angle sweep", theta_sweeps},
        {13, "pre-measurement ablation", ablation},
        {14, "property suite", properties},
    };
    const std::set<int> selected = parse_ids(only);
    const std::set<int> tolerated = parse_ids(known);
    Runs runs(seeds, workers);
    int unexpected = 0;
    for (const Criterion &c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run(runs);
        } catch (const std::exception &e) {
            outcome = {false, std::string("error: ") + e.what()};
        }
        const char *status = outcome.pass ? "PASS" : (tolerated.count(c.id) ? "FAIL (known)" : "FAIL");
        if (!outcome.pass && !tolerated.count(c.id)) {
            ++unexpected;
        }
        std::printf("criterion %2d  %-12s %s: %s [%.1f s]\n", c.id, status, c.title, outcome.detail.c_str(),
                    seconds_since(start));
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
