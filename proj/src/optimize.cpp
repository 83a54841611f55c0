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

#include "fockmetro/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "fockmetro/error.hpp"

namespace fockmetro {

std::string to_string(OptimizerMethod method) {
    switch (method) {
        case OptimizerMethod::kNelderMead:
            return "nelder-mead";
    }
    return "?";
}

OptimizerMethod parse_optimizer_method(const std::string &text) {
    if (text == "nelder-mead") {
        return OptimizerMethod::kNelderMead;
    }
    fail(ErrorCode::kInvalidArgument, "unknown optimizer method '" + text + "'");
}

void OptimizerConfig::validate() const {
    require(max_iters >= 1, ErrorCode::kInvalidArgument, "max_iters must be at least 1");
    require(tol > 0.0, ErrorCode::kInvalidArgument, "tol must be positive");
    require(init_scale >= 0.0, ErrorCode::kInvalidArgument, "init_scale must be non-negative");
    require(initial_step > 0.0, ErrorCode::kInvalidArgument, "initial_step must be positive");
    require(seeds >= 1, ErrorCode::kInvalidArgument, "need at least one seed");
    require(d_max >= 1, ErrorCode::kInvalidArgument, "d_max must be at least 1");
}

// ---------------------------------------------------------------------------
// Nelder-Mead
// ---------------------------------------------------------------------------

namespace {

class CountedObjective {
  public:
    CountedObjective(const Objective &f, std::size_t budget) : f_(f), budget_(budget) {}

    double operator()(const std::vector<double> &x) {
        ++count_;
        const double value = f_(x);
        if (!std::isfinite(value)) {
            std::string where;
            for (double v : x) {
                where += (where.empty() ? "" : ",") + std::to_string(v);
            }
            fail(ErrorCode::kNumerical, "objective returned a non-finite value at (" + where + ")");
        }
        return value;
    }

    bool exhausted() const { return count_ >= budget_; }
    std::size_t count() const { return count_; }

  private:
    const Objective &f_;
    std::size_t budget_;
    std::size_t count_ = 0;
};

struct Vertex {
    std::vector<double> x;
    double f;
};

std::vector<double> affine(const std::vector<double> &base, const std::vector<double> &toward, double t) {
    std::vector<double> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        out[i] = base[i] + t * (toward[i] - base[i]);
    }
    return out;
}

double max_distance(const std::vector<Vertex> &simplex) {
    double d = 0.0;
    for (std::size_t k = 1; k < simplex.size(); ++k) {
        for (std::size_t i = 0; i < simplex[0].x.size(); ++i) {
            d = std::max(d, std::abs(simplex[k].x[i] - simplex[0].x[i]));
        }
    }
    return d;
}

// One simplex descent from `start` (already evaluated). Returns the best vertex.
Vertex descend(CountedObjective &f, const Vertex &start, double step, double tol, bool &converged) {
    const std::size_t n = start.x.size();
    const double dn = static_cast<double>(n);
    // Dimension-adaptive coefficients.
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / dn;
    const double contract = 0.75 - 1.0 / (2.0 * dn);
    const double shrink = 1.0 - 1.0 / dn;
    const double max_expansion = 4.0 * step;

    std::vector<Vertex> simplex{start};
    for (std::size_t i = 0; i < n && !f.exhausted(); ++i) {
        std::vector<double> x = start.x;
        x[i] += step;
        simplex.push_back({x, f(x)});
    }
    converged = false;
    if (simplex.size() < n + 1) {
        return *std::min_element(simplex.begin(), simplex.end(),
                                 [](const Vertex &a, const Vertex &b) { return a.f < b.f; });
    }
    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex &a, const Vertex &b) { return a.f < b.f; });
    };
    order();
    while (!f.exhausted()) {
        if (simplex[n].f - simplex[0].f <= tol || max_distance(simplex) <= tol) {
            converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                centroid[i] += simplex[k].x[i] / dn;
            }
        }
        const Vertex &worst = simplex[n];
        Vertex r{affine(centroid, worst.x, -reflect), 0.0};
        r.f = f(r.x);
        if (r.f < simplex[0].f) {
            double t = expand;
            double length = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                length = std::max(length, std::abs(centroid[i] - worst.x[i]));
            }
            if (length * t > max_expansion) {
                t = std::max(reflect, max_expansion / length);
            }
            if (t > reflect && !f.exhausted()) {
                Vertex e{affine(centroid, worst.x, -t), 0.0};
                e.f = f(e.x);
                simplex[n] = e.f < r.f ? e : r;
            } else {
                simplex[n] = r;
            }
        } else if (r.f < simplex[n - 1].f) {
            simplex[n] = r;
        } else {
            const bool outside = r.f < worst.f;
            Vertex c{affine(centroid, worst.x, outside ? -contract : contract), 0.0};
            if (f.exhausted()) {
                break;
            }
            c.f = f(c.x);
            if (c.f < std::min(r.f, worst.f) || (c.f <= worst.f && !outside)) {
                simplex[n] = c;
            } else {
                for (std::size_t k = 1; k <= n && !f.exhausted(); ++k) {
                    simplex[k].x = affine(simplex[0].x, simplex[k].x, shrink);
                    simplex[k].f = f(simplex[k].x);
                }
            }
        }
        order();
    }
    return simplex[0];
}

}  // namespace

MinimizeResult minimize(const Objective &objective, const std::vector<double> &x0, const OptimizerConfig &config) {
    config.validate();
    require(!x0.empty(), ErrorCode::kInvalidArgument, "minimize needs at least one parameter");
    CountedObjective f(objective, config.max_iters);
    Vertex best{x0, f(x0)};
    bool converged = false;
    // Restart from the incumbent. A restart that fails is retried with a
    // simplex two and four times larger, which steps over local maxima at
    // the start point; any improvement returns to the base size.
    constexpr int kMaxWidening = 2;
    int widening = 0;
    while (!f.exhausted()) {
        const double step = config.initial_step * static_cast<double>(1 << widening);
        const Vertex next = descend(f, best, step, config.tol, converged);
        const bool improved = next.f < best.f - config.tol;
        if (next.f < best.f) {
            best = next;
        }
        if (improved) {
            widening = 0;
        } else if (++widening > kMaxWidening) {
            break;
        }
    }
    return {best.x, best.f, f.count(), converged};
}

// ---------------------------------------------------------------------------
// Seeds
// ---------------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(master) ^ stream) ^ counter);
}

std::vector<double> random_initial(std::size_t count, double scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(count);
    for (double &v : out) {
        // Explicit mapping; std::uniform_real_distribution is not portable bit-for-bit.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = scale * (2.0 * u - 1.0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

std::size_t ProblemSpec::resolved_cutoff() const {
    return cutoff == 0 ? default_cutoff(n_mean) : cutoff;
}

CompositeState ProblemSpec::initial() const {
    return initial_state(kind, n_mean, resolved_cutoff());
}

double preparation_objective(const ProblemSpec &problem, const AnsatzParams &params) {
    const CompositeState probe = run_circuit(params, problem.initial());
    return -qfi_fidelity(probe, problem.phi, problem.delta).value;
}

CompositeState ProbeSource::build(const ProblemSpec &problem) const {
    if (circuit) {
        return run_circuit(*circuit, problem.initial());
    }
    return evolve_continuous(problem.kind, continuous_time, problem.initial());
}

double measurement_objective(const ProblemSpec &, const PhaseFamily &encoded, const AnsatzParams &premeasure,
                             const MeasurementModel &model) {
    const auto gates = build_circuit(premeasure, encoded.state.layout(), CircuitRole::kPremeasure);
    return -cfi(transform(encoded, gates), model).value;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t max_depth(const std::vector<std::size_t> &d_schedule) {
    require(!d_schedule.empty(), ErrorCode::kInvalidArgument, "empty depth schedule");
    for (std::size_t d : d_schedule) {
        require(d >= 1, ErrorCode::kInvalidArgument, "depths must be at least 1");
    }
    return *std::max_element(d_schedule.begin(), d_schedule.end());
}

// Runs `work(seed)` for every seed on a small pool; results land in seed order.
template <typename Work>
std::vector<std::vector<OptRecord>> for_each_seed(const OptimizerConfig &config, Work work) {
    std::vector<std::vector<OptRecord>> out(config.seeds);
    std::size_t workers = config.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.workers;
    workers = std::min(workers, config.seeds);
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t s = next++; s < config.seeds; s = next++) {
            out[s] = work(s);
        }
    };
    if (workers <= 1) {
        loop();
        return out;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(loop);
    }
    pool.clear();
    return out;
}

// Layer-growing schedule for one seed. `objective_at(depth, params)` evaluates
// a depth-specific objective.
template <typename ObjectiveAt>
std::vector<OptRecord> grow_layers(const ProblemSpec &problem, const std::vector<std::size_t> &d_schedule,
                                   const OptimizerConfig &config, std::size_t seed, std::uint64_t stream,
                                   ObjectiveAt objective_at) {
    const std::size_t top = max_depth(d_schedule);
    const std::size_t per = AnsatzParams::params_per_layer(problem.kind);
    std::vector<OptRecord> records;
    std::vector<double> x = random_initial(per, config.init_scale, derive_seed(config.master_seed, stream, seed));
    for (std::size_t d = 1; d <= top; ++d) {
        OptRecord record;
        record.kind = problem.kind;
        record.n_mean = problem.n_mean;
        record.seed = seed;
        record.d = d;
        const auto t0 = Clock::now();
        try {
            auto f = [&](const std::vector<double> &v) {
                return objective_at(d, AnsatzParams::from_flat(problem.kind, v));
            };
            const MinimizeResult result = minimize(f, x, config);
            x = result.x;
            record.best_params = result.x;
            record.best_objective = result.f;
            record.iters_used = result.iters;
            record.budget = interaction_budget(AnsatzParams::from_flat(problem.kind, result.x));
        } catch (const std::exception &e) {
            record.error = e.what();
        }
        record.wall_time = seconds_since(t0);
        const bool failed = !record.ok();
        if (std::find(d_schedule.begin(), d_schedule.end(), d) != d_schedule.end() || failed) {
            records.push_back(record);
        }
        if (failed) {
            break;
        }
        x.resize(x.size() + per, 0.0);
    }
    return records;
}

std::vector<OptRecord> flatten(std::vector<std::vector<OptRecord>> nested) {
    std::vector<OptRecord> out;
    for (auto &v : nested) {
        for (auto &r : v) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

constexpr std::uint64_t kPrepareStream = 1;
constexpr std::uint64_t kMeasureStream = 2;
constexpr std::uint64_t kAblationStream = 3;

}  // namespace

std::vector<OptRecord> optimize_preparation(const ProblemSpec &problem, const std::vector<std::size_t> &d_schedule,
                                            const OptimizerConfig &config) {
    config.validate();
    max_depth(d_schedule);
    const CompositeState psi0 = problem.initial();
    auto work = [&](std::size_t seed) {
        return grow_layers(problem, d_schedule, config, seed, kPrepareStream,
                           [&](std::size_t, const AnsatzParams &params) {
                               return -qfi_fidelity(run_circuit(params, psi0), problem.phi, problem.delta).value;
                           });
    };
    return flatten(for_each_seed(config, work));
}

std::vector<OptRecord> optimize_measurement(const ProblemSpec &problem, const std::vector<ProbeSource> &probes,
                                            const MeasurementModel &model, const std::vector<std::size_t> &d_schedule,
                                            const OptimizerConfig &config) {
    config.validate();
    max_depth(d_schedule);
    require(probes.size() == 1 || probes.size() == d_schedule.size(), ErrorCode::kInvalidArgument,
            "need one probe or one probe per scheduled depth");
    // Depths outside the schedule reuse the probe of the next scheduled depth.
    std::vector<PhaseFamily> families;
    for (const ProbeSource &probe : probes) {
        families.push_back(encoded_family(probe.build(problem), problem.phi));
    }
    auto family_for = [&](std::size_t d) -> const PhaseFamily & {
        if (families.size() == 1) {
            return families.front();
        }
        std::size_t pick = 0;
        std::size_t best = SIZE_MAX;
        for (std::size_t i = 0; i < d_schedule.size(); ++i) {
            if (d_schedule[i] >= d && d_schedule[i] < best) {
                best = d_schedule[i];
                pick = i;
            }
        }
        return families[pick];
    };
    auto work = [&](std::size_t seed) {
        return grow_layers(problem, d_schedule, config, seed, kMeasureStream,
                           [&](std::size_t d, const AnsatzParams &params) {
                               return measurement_objective(problem, family_for(d), params, model);
                           });
    };
    return flatten(for_each_seed(config, work));
}

ThetaOnlyResult optimize_theta_only(const ProblemSpec &problem, const ProbeSource &probe,
                                    const OptimizerConfig &config, std::size_t scan_points) {
    require(scan_points >= 3, ErrorCode::kInvalidArgument, "theta scan needs at least 3 points");
    const PhaseFamily family = encoded_family(probe.build(problem), problem.phi);
    const bool emitters = problem.kind == Nonlinearity::kJC;
    const std::size_t c = problem.resolved_cutoff();
    auto inv = [&](double theta) {
        return 1.0 / cfi(family, MeasurementModel::homodyne(theta, c, emitters)).value;
    };
    // Coarse scan over one period, then a bracketed simplex polish.
    double best_theta = 0.0;
    double best = inv(0.0);
    for (std::size_t k = 1; k < scan_points; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(scan_points);
        const double v = inv(theta);
        if (v < best) {
            best = v;
            best_theta = theta;
        }
    }
    OptimizerConfig local = config;
    local.initial_step = std::numbers::pi / static_cast<double>(scan_points);
    local.max_iters = std::min<std::size_t>(config.max_iters, 60);
    const MinimizeResult polish = minimize([&](const std::vector<double> &v) { return inv(v[0]); }, {best_theta}, local);
    return {polish.x[0], polish.f, 1};
}

AblationRecord ablation_theta(const ProblemSpec &problem, const AnsatzParams &prepared, const OptimizerConfig &config) {
    config.validate();
    const std::size_t d = prepared.depth();
    const std::size_t c = problem.resolved_cutoff();
    const bool emitters = problem.kind == Nonlinearity::kJC;
    const ProbeSource probe{prepared, 0.0};
    const CompositeState state = probe.build(problem);
    const PhaseFamily family = encoded_family(state, problem.phi);

    AblationRecord out;
    out.d = d;
    out.inv_qfi = 1.0 / qfi_fidelity(state, problem.phi, problem.delta).value;
    out.inv_cfi_theta_zero = 1.0 / cfi(family, MeasurementModel::homodyne(0.0, c, emitters)).value;
    const ThetaOnlyResult a = optimize_theta_only(problem, probe, config);
    out.inv_cfi_theta_free = a.inv_cfi;

    const MeasurementModel zero = MeasurementModel::homodyne(0.0, c, emitters);
    const auto b = optimize_measurement(problem, {probe}, zero, {d}, config);
    const auto best_b = best_record(b, d);
    require(best_b.has_value(), ErrorCode::kNumerical, "all pre-measurement runs failed");
    out.inv_cfi_theta_zero_pqc = best_b->inverse_fisher();

    // (c): joint search over [mu, theta], started from both the (b) circuit
    // at theta = 0 and the identity circuit at the (a) angle.
    auto f = [&](const std::vector<double> &v) {
        const std::vector<double> mu(v.begin(), v.end() - 1);
        return measurement_objective(problem, family, AnsatzParams::from_flat(problem.kind, mu),
                                     MeasurementModel::homodyne(v.back(), c, emitters));
    };
    std::vector<double> from_b = best_b->best_params;
    from_b.push_back(0.0);
    std::vector<double> from_a(from_b.size(), 0.0);
    from_a.back() = a.theta;
    OptimizerConfig local = config;
    local.master_seed = derive_seed(config.master_seed, kAblationStream);
    double best = std::min(minimize(f, from_b, local).f, minimize(f, from_a, local).f);
    // The starting points themselves bound the joint optimum.
    best = std::min({best, -1.0 / out.inv_cfi_theta_zero_pqc, -1.0 / out.inv_cfi_theta_free});
    out.inv_cfi_theta_free_pqc = -1.0 / best;
    return out;
}

std::optional<OptRecord> best_record(const std::vector<OptRecord> &records, std::size_t d) {
    std::optional<OptRecord> best;
    for (const OptRecord &r : records) {
        if (r.ok() && r.d == d && (!best || r.best_objective < best->best_objective)) {
            best = r;
        }
    }
    return best;
}

}  // namespace fockmetro
