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

// Exercises the shared library through its C interface only.

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "fockmetro/fockmetro.h"

namespace {

double shifted_bowl(const double *x, size_t n, void *user) {
    ++*static_cast<int *>(user);
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        s += (x[i] - 0.25) * (x[i] - 0.25);
    }
    return s;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(fm_version()) > 0);
    CHECK(std::string(fm_status_name(FM_OK)) == "ok");
    CHECK(std::string(fm_status_name(FM_ERR_TRUNCATION)) == "truncation");
}

TEST_CASE("bounds and defaults") {
    fm_bounds b{};
    REQUIRE(fm_compute_bounds(20.0, &b) == FM_OK);
    CHECK(b.sql_inv_fi == doctest::Approx(0.05));
    CHECK(b.tfs_inv_fi == doctest::Approx(2.0 / 440.0));
    CHECK(b.hl_inv_fi == doctest::Approx(0.0025));
    CHECK(fm_compute_bounds(-1.0, &b) == FM_ERR_INVALID_ARGUMENT);
    CHECK(std::string(fm_last_error_message()).find("positive") != std::string::npos);
    CHECK(fm_compute_bounds(1.0, nullptr) == FM_ERR_INVALID_ARGUMENT);
    size_t c = 0;
    REQUIRE(fm_default_cutoff(20.0, &c) == FM_OK);
    CHECK(c == 40);
    CHECK(fm_default_phi() == doctest::Approx(std::acos(0.5)));
    CHECK(fm_default_delta() == doctest::Approx(1e-2));
}

TEST_CASE("state handles") {
    fm_state *psi = nullptr;
    REQUIRE(fm_state_initial(FM_KIND_KERR, 4.0, 0, &psi) == FM_OK);
    size_t dim = 0;
    REQUIRE(fm_state_dim(psi, &dim) == FM_OK);
    CHECK(dim == 13 * 13);
    double n = 0.0, norm = 0.0;
    REQUIRE(fm_state_mean_photons(psi, &n) == FM_OK);
    REQUIRE(fm_state_norm(psi, &norm) == FM_OK);
    CHECK(n == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(norm == doctest::Approx(1.0));

    fm_state *evolved = nullptr;
    REQUIRE(fm_state_evolve(psi, FM_KIND_KERR, 0.1, &evolved) == FM_OK);
    double qfi_f = 0.0, qfi_v = 0.0;
    REQUIRE(fm_state_qfi(evolved, FM_QFI_FIDELITY, fm_default_phi(), fm_default_delta(), &qfi_f) == FM_OK);
    REQUIRE(fm_state_qfi(evolved, FM_QFI_VARIANCE, fm_default_phi(), 0.0, &qfi_v) == FM_OK);
    CHECK(qfi_f == doctest::Approx(qfi_v).epsilon(1e-3));

    fm_measurement_model model;
    fm_measurement_model_default(&model);
    double counting = 0.0;
    REQUIRE(fm_state_cfi(evolved, &model, fm_default_phi(), &counting) == FM_OK);
    CHECK(counting <= qfi_v * (1.0 + 1e-6));

    const double params[] = {0.2, 0.05};
    fm_state *circuit = nullptr;
    REQUIRE(fm_state_run_circuit(psi, FM_KIND_KERR, params, 2, &circuit) == FM_OK);
    CHECK(fm_state_run_circuit(psi, FM_KIND_KERR, params, 1, &circuit) == FM_ERR_INVALID_ARGUMENT);
    CHECK(fm_state_run_circuit(psi, FM_KIND_JC, params, 2, &circuit) == FM_ERR_INVALID_ARGUMENT);
    CHECK(fm_state_evolve(psi, FM_KIND_JC, 0.1, &evolved) == FM_ERR_LAYOUT_MISMATCH);

    fm_state *tight = nullptr;
    CHECK(fm_state_initial(FM_KIND_KERR, 20.0, 5, &tight) == FM_ERR_TRUNCATION);
    CHECK(tight == nullptr);

    fm_state_free(circuit);
    fm_state_free(evolved);
    fm_state_free(psi);
    fm_state_free(nullptr);
}

TEST_CASE("sweeps and minima") {
    size_t count = 0;
    REQUIRE(fm_default_time_grid(FM_KIND_JC, nullptr, 0, &count) == FM_OK);
    CHECK(count == 301);
    std::vector<double> small(3);
    CHECK(fm_default_time_grid(FM_KIND_JC, small.data(), small.size(), &count) == FM_ERR_INVALID_ARGUMENT);

    fm_sweep_options opts;
    fm_sweep_options_default(&opts);
    opts.counting = 1;
    const double times[] = {0.0, 0.5, 1.0, 1.5};
    fm_sweep *sweep = nullptr;
    REQUIRE(fm_sweep_run(FM_KIND_JC, 2.0, times, 4, &opts, &sweep) == FM_OK);
    REQUIRE(fm_sweep_size(sweep) == 4);
    fm_sweep_row row{};
    REQUIRE(fm_sweep_row_at(sweep, 2, &row) == FM_OK);
    CHECK(row.time == 1.0);
    CHECK(std::isfinite(row.inv_cfi_counting));
    CHECK(std::isnan(row.inv_cfi_homodyne));
    CHECK(fm_sweep_row_at(sweep, 4, &row) == FM_ERR_INVALID_ARGUMENT);
    fm_sweep_free(sweep);

    const double xs[] = {0.0, 1.0, 2.0, 3.0, 4.0};
    const double ys[] = {1.0, 0.0, 1.0, -1.0, 2.0};
    fm_extremum minima[1];
    size_t found = 0;
    REQUIRE(fm_find_minima(xs, ys, 5, minima, 1, &found) == FM_OK);
    CHECK(found == 2);
    CHECK(minima[0].time == doctest::Approx(1.0));
    double t = 0.0;
    CHECK(fm_time_to_tfs(FM_KIND_KERR, 4.0, &opts, 0.01, 0.05, &t) == FM_ERR_NOT_FOUND);

    const double fx[] = {1.0, 2.0, 3.0};
    const double fy[] = {3.0, 5.0, 7.0};
    fm_fit_result fit{};
    REQUIRE(fm_fit(FM_FIT_LINEAR, fx, fy, 3, &fit) == FM_OK);
    CHECK(fit.coefficient_count == 2);
    CHECK(fit.coefficients[1] == doctest::Approx(2.0));
}

TEST_CASE("optimization through the C interface") {
    fm_problem problem;
    fm_problem_default(&problem);
    problem.kind = FM_KIND_KERR;
    problem.n_mean = 2.0;
    fm_optimizer_config config;
    fm_optimizer_config_default(&config);
    config.seeds = 1;
    config.max_iters = 80;
    const size_t depths[] = {1};
    fm_opt_result *result = nullptr;
    REQUIRE(fm_optimize_preparation(&problem, depths, 1, &config, &result) == FM_OK);
    REQUIRE(fm_opt_result_size(result) == 1);
    fm_opt_record rec{};
    REQUIRE(fm_opt_result_at(result, 0, &rec) == FM_OK);
    CHECK(rec.error == nullptr);
    CHECK(rec.param_count == 2);
    CHECK(rec.inv_fisher == doctest::Approx(-1.0 / rec.objective));
    double again = 0.0;
    REQUIRE(fm_preparation_objective(&problem, rec.params, rec.param_count, &again) == FM_OK);
    CHECK(again == doctest::Approx(rec.objective).epsilon(1e-9));

    fm_measurement_model model;
    fm_measurement_model_default(&model);
    const fm_probe probe{rec.params, rec.param_count, 0.0};
    fm_opt_result *measured = nullptr;
    REQUIRE(fm_optimize_measurement(&problem, &probe, 1, &model, depths, 1, &config, &measured) == FM_OK);
    fm_opt_record m{};
    REQUIRE(fm_opt_result_at(measured, 0, &m) == FM_OK);
    CHECK(m.inv_fisher >= rec.inv_fisher * (1.0 - 1e-3));
    fm_opt_result_free(measured);
    fm_opt_result_free(result);

    CHECK(fm_optimize_preparation(&problem, nullptr, 0, &config, &result) == FM_ERR_INVALID_ARGUMENT);
    config.seeds = 0;
    CHECK(fm_optimize_preparation(&problem, depths, 1, &config, &result) == FM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("fm_minimize drives a C callback") {
    fm_optimizer_config config;
    fm_optimizer_config_default(&config);
    config.max_iters = 2000;
    int calls = 0;
    const double x0[] = {1.0, -1.0};
    double best[2] = {};
    double f = 0.0;
    size_t iters = 0;
    REQUIRE(fm_minimize(shifted_bowl, &calls, x0, 2, &config, best, &f, &iters) == FM_OK);
    CHECK(best[0] == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(f < 1e-8);
    CHECK(calls > 0);
    CHECK(fm_minimize(nullptr, &calls, x0, 2, &config, best, &f, &iters) == FM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("wigner grids") {
    fm_state *psi = nullptr;
    REQUIRE(fm_state_initial(FM_KIND_JC, 4.0, 0, &psi) == FM_OK);
    fm_wigner *w = nullptr;
    REQUIRE(fm_wigner_from_state(psi, 0, nullptr, 0, nullptr, 0, &w) == FM_OK);
    size_t nx = 0, np = 0;
    REQUIRE(fm_wigner_shape(w, &nx, &np) == FM_OK);
    CHECK(nx == 201);
    CHECK(np == 201);
    CHECK(fm_wigner_integral(w) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(fm_wigner_purity(w) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(fm_wigner_x_axis(w)[0] < 0.0);
    CHECK(fm_wigner_values(w) != nullptr);
    fm_wigner_free(w);
    CHECK(fm_wigner_from_state(psi, 2, nullptr, 0, nullptr, 0, &w) == FM_ERR_INVALID_ARGUMENT);
    fm_state_free(psi);
}
