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

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"
#include "fockmetro/error.hpp"
#include "fockmetro/optimize.hpp"

using namespace fockmetro;

namespace {

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode{};
}

OptimizerConfig small_config() {
    OptimizerConfig c;
    c.max_iters = 150;
    c.seeds = 2;
    c.d_max = 2;
    return c;
}

}  // namespace

TEST_CASE("minimize finds the bottom of a shifted quadratic") {
    OptimizerConfig c;
    c.max_iters = 4000;
    const Objective f = [](const std::vector<double> &x) {
        return std::pow(x[0] - 1.0, 2) + 4.0 * std::pow(x[1] + 2.0, 2) + std::pow(x[2] - 0.5, 2) + 3.0;
    };
    const MinimizeResult r = minimize(f, {0.0, 0.0, 0.0}, c);
    CHECK(r.f == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-4));
    CHECK(r.iters <= c.max_iters);
}

TEST_CASE("minimize follows the Rosenbrock valley") {
    OptimizerConfig c;
    c.max_iters = 5000;
    const Objective f = [](const std::vector<double> &x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const MinimizeResult r = minimize(f, {-1.2, 1.0}, c);
    CHECK(r.f < 1e-8);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("minimize never returns worse than the start and stops on flat objectives") {
    OptimizerConfig c;
    c.max_iters = 200;
    const MinimizeResult flat = minimize([](const std::vector<double> &) { return 7.0; }, {0.3, -0.1}, c);
    CHECK(flat.f == 7.0);
    CHECK(flat.iters <= c.max_iters);

    const Objective bumpy = [](const std::vector<double> &x) { return std::cos(5.0 * x[0]) + 0.1 * x[0] * x[0]; };
    const MinimizeResult r = minimize(bumpy, {0.05}, c);
    CHECK(r.f <= bumpy({0.05}));
}

TEST_CASE("non-finite objective values are numerical errors") {
    OptimizerConfig c;
    const Objective f = [](const std::vector<double> &x) {
        return x[0] > 0.2 ? std::numeric_limits<double>::quiet_NaN() : -x[0];
    };
    CHECK(code_of([&] { minimize(f, {0.0}, c); }) == ErrorCode::kNumerical);
    CHECK(code_of([&] { minimize(f, {}, c); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("optimizer configurations are validated") {
    OptimizerConfig c;
    CHECK(code_of([&] { c.validate(); }) == ErrorCode{});
    for (auto mutate : std::vector<void (*)(OptimizerConfig &)>{
             [](OptimizerConfig &x) { x.max_iters = 0; }, [](OptimizerConfig &x) { x.tol = 0.0; },
             [](OptimizerConfig &x) { x.init_scale = -1.0; }, [](OptimizerConfig &x) { x.initial_step = 0.0; },
             [](OptimizerConfig &x) { x.seeds = 0; }, [](OptimizerConfig &x) { x.d_max = 0; }}) {
        OptimizerConfig bad;
        mutate(bad);
        CHECK(code_of([&] { bad.validate(); }) == ErrorCode::kInvalidArgument);
    }
    CHECK(parse_optimizer_method(to_string(OptimizerMethod::kNelderMead)) == OptimizerMethod::kNelderMead);
    CHECK(code_of([] { parse_optimizer_method("cobyla-ish"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("seed derivation is deterministic and separates streams") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 50; ++s) {
        seen.insert(derive_seed(0, s));
        seen.insert(derive_seed(1, s));
    }
    CHECK(seen.size() == 100);
    const auto x = random_initial(6, 0.01, 42);
    CHECK(x == random_initial(6, 0.01, 42));
    for (double v : x) {
        CHECK(std::abs(v) <= 0.01);
    }
}

TEST_CASE("preparation records re-evaluate to their stored objective") {
    const ProblemSpec problem{Nonlinearity::kKerr, 4.0};
    const auto records = optimize_preparation(problem, {1, 2}, small_config());
    REQUIRE(records.size() == 4);
    for (const OptRecord &r : records) {
        REQUIRE(r.ok());
        const AnsatzParams p = AnsatzParams::from_flat(problem.kind, r.best_params);
        CHECK(p.depth() == r.d);
        CHECK(preparation_objective(problem, p) == doctest::Approx(r.best_objective).epsilon(1e-9));
        CHECK(r.budget.total == doctest::Approx(interaction_budget(p).total));
        // Nonlinear evolution should beat the coherent input.
        CHECK(r.inverse_fisher() < 1.0 / 4.0);
    }
    // Ordered by (seed, d) and warm-started, so deeper is never worse per seed.
    CHECK(records[0].seed == 0);
    CHECK(records[1].d == 2);
    CHECK(records[1].best_objective <= records[0].best_objective);
    CHECK(records[3].best_objective <= records[2].best_objective);
    const auto best = best_record(records, 2);
    REQUIRE(best.has_value());
    CHECK(best->best_objective == std::min(records[1].best_objective, records[3].best_objective));
    CHECK_FALSE(best_record(records, 5).has_value());
}

TEST_CASE("preparation is reproducible for a fixed master seed") {
    const ProblemSpec problem{Nonlinearity::kJC, 2.0};
    OptimizerConfig c = small_config();
    c.d_max = 1;
    const auto a = optimize_preparation(problem, {1}, c);
    const auto b = optimize_preparation(problem, {1}, c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].best_params == b[i].best_params);
        CHECK(a[i].best_objective == b[i].best_objective);
    }
    c.master_seed = 99;
    const auto other = optimize_preparation(problem, {1}, c);
    CHECK(other[0].best_params != a[0].best_params);
}

TEST_CASE("measurement stage returns per-depth records and accepts one shared probe") {
    const ProblemSpec problem{Nonlinearity::kKerr, 2.0};
    OptimizerConfig c = small_config();
    c.seeds = 1;
    const ProbeSource probe{std::nullopt, 0.3};
    const auto records = optimize_measurement(problem, {probe}, MeasurementModel::counting(false), {1, 2}, c);
    REQUIRE(records.size() == 2);
    const double inv_qfi = 1.0 / qfi_fidelity(probe.build(problem), problem.phi, problem.delta).value;
    for (const OptRecord &r : records) {
        CHECK(r.ok());
        // The Cramer-Rao chain F_C <= F_Q, allowing for the finite-difference estimate.
        CHECK(r.inverse_fisher() >= inv_qfi * (1.0 - 1e-3));
    }
    CHECK(code_of([&] {
              optimize_measurement(problem, {probe, probe}, MeasurementModel::counting(false), {1, 2, 3}, c);
          }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([&] { optimize_preparation(problem, {}, c); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("theta-only optimization has one parameter and beats the zero angle") {
    const ProblemSpec problem{Nonlinearity::kKerr, 2.0};
    OptimizerConfig c = small_config();
    const ProbeSource probe{std::nullopt, 0.2};
    const ThetaOnlyResult r = optimize_theta_only(problem, probe, c, 16);
    CHECK(r.parameter_count == 1);
    const PhaseFamily family = encoded_family(probe.build(problem), problem.phi);
    const double at_zero = 1.0 / cfi(family, MeasurementModel::homodyne(0.0, problem.resolved_cutoff(), false)).value;
    CHECK(r.inv_cfi <= at_zero * (1.0 + 1e-12));
    CHECK(code_of([&] { optimize_theta_only(problem, probe, c, 2); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("ablation strategies are ordered by their freedom") {
    const ProblemSpec problem{Nonlinearity::kKerr, 2.0};
    OptimizerConfig c = small_config();
    c.seeds = 1;
    c.max_iters = 60;
    const AnsatzParams prepared = AnsatzParams::from_flat(Nonlinearity::kKerr, std::vector<double>{0.3, 0.1});
    const AblationRecord a = ablation_theta(problem, prepared, c);
    CHECK(a.d == 1);
    CHECK(a.inv_cfi_theta_free <= a.inv_cfi_theta_zero * (1.0 + 1e-12));
    CHECK(a.inv_cfi_theta_free_pqc <= a.inv_cfi_theta_free * (1.0 + 1e-12));
    CHECK(a.inv_cfi_theta_free_pqc <= a.inv_cfi_theta_zero_pqc * (1.0 + 1e-12));
    CHECK(a.inv_cfi_theta_free_pqc >= a.inv_qfi * (1.0 - 1e-3));
}

TEST_CASE("minimize reference problems") {
    OptimizerConfig c;
    const MinimizeResult bowl =
        minimize([](const std::vector<double> &x) { return (x[0] - 2.0) * (x[0] - 2.0); }, {0.0}, c);
    CHECK(bowl.x[0] == doctest::Approx(2.0).epsilon(1e-4));
    const MinimizeResult banana = minimize(
        [](const std::vector<double> &x) { return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2); },
        {0.0, 0.0}, c);
    CHECK(banana.f < 1e-6);
    CHECK(banana.iters <= 1000);
    const MinimizeResult flat = minimize([](const std::vector<double> &) { return 1.0; }, {0.5, 0.5}, c);
    CHECK(flat.x == std::vector<double>{0.5, 0.5});
}
