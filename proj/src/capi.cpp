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

#include "fockmetro/fockmetro.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "fockmetro/analysis.hpp"
#include "fockmetro/error.hpp"
#include "fockmetro/optimize.hpp"
#include "fockmetro/wigner.hpp"

using namespace fockmetro;

struct fm_state {
    CompositeState state;
};

struct fm_sweep {
    std::vector<SweepRecord> records;
    std::vector<Extremum> minima;
};

struct fm_opt_result {
    std::vector<OptRecord> records;
};

struct fm_wigner {
    WignerGrid grid;
    std::vector<double> row_major;
};

namespace {

thread_local std::string last_error;

fm_status record(fm_status status, const std::string &message) {
    last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
fm_status guarded(Body body) {
    try {
        last_error.clear();
        body();
        return FM_OK;
    } catch (const Error &e) {
        return record(static_cast<fm_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc &) {
        return record(FM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return record(FM_ERR_INTERNAL, e.what());
    }
}

void not_null(const void *p, const char *name) {
    require(p != nullptr, ErrorCode::kInvalidArgument, std::string(name) + " must not be null");
}

Nonlinearity to_kind(fm_kind kind) {
    require(kind == FM_KIND_JC || kind == FM_KIND_KERR, ErrorCode::kInvalidArgument, "unknown nonlinearity");
    return kind == FM_KIND_JC ? Nonlinearity::kJC : Nonlinearity::kKerr;
}

fm_kind from_kind(Nonlinearity kind) {
    return kind == Nonlinearity::kJC ? FM_KIND_JC : FM_KIND_KERR;
}

SweepOptions to_options(const fm_sweep_options *o) {
    SweepOptions out;
    if (o == nullptr) {
        return out;
    }
    out.cutoff = o->cutoff;
    out.phi = o->phi;
    out.delta = o->delta;
    out.estimator = o->estimator == FM_QFI_VARIANCE ? QfiEstimator::kVariance : QfiEstimator::kFidelity;
    out.counting = o->counting != 0;
    out.homodyne = o->homodyne != 0;
    out.theta = o->theta;
    out.frame = o->frame == FM_FRAME_ENCODED ? QuadratureFrame::kEncoded : QuadratureFrame::kReferenceArm;
    out.workers = o->workers;
    return out;
}

MeasurementModel to_model(const fm_measurement_model *m, std::size_t cutoff) {
    not_null(m, "measurement model");
    require(m->kind == FM_MEASURE_COUNTING || m->kind == FM_MEASURE_HOMODYNE, ErrorCode::kInvalidArgument,
            "unknown measurement kind");
    MeasurementModel out = m->kind == FM_MEASURE_COUNTING
                               ? MeasurementModel::counting(m->include_emitters != 0)
                               : MeasurementModel::homodyne(m->theta, cutoff, m->include_emitters != 0);
    out.frame = m->frame == FM_FRAME_ENCODED ? QuadratureFrame::kEncoded : QuadratureFrame::kReferenceArm;
    if (m->kind == FM_MEASURE_HOMODYNE) {
        if (m->x_max > 0.0) {
            out.grid.x_max = m->x_max;
        }
        if (m->points > 0) {
            out.grid.points = m->points;
        }
    }
    return out;
}

ProblemSpec to_problem(const fm_problem *p) {
    not_null(p, "problem");
    ProblemSpec out;
    out.kind = to_kind(p->kind);
    out.n_mean = p->n_mean;
    out.cutoff = p->cutoff;
    out.phi = p->phi;
    out.delta = p->delta;
    return out;
}

OptimizerConfig to_config(const fm_optimizer_config *c) {
    not_null(c, "optimizer config");
    OptimizerConfig out;
    out.max_iters = c->max_iters;
    out.tol = c->tol;
    out.init_scale = c->init_scale;
    out.initial_step = c->initial_step;
    out.seeds = c->seeds;
    out.d_max = c->d_max;
    out.master_seed = c->master_seed;
    out.workers = c->workers;
    out.validate();
    return out;
}

AnsatzParams to_params(Nonlinearity kind, const double *params, std::size_t count) {
    require(params != nullptr || count == 0, ErrorCode::kInvalidArgument, "parameter array is null");
    return AnsatzParams::from_flat(kind, std::span<const double>(params, count));
}

ProbeSource to_probe(Nonlinearity kind, const fm_probe &p) {
    ProbeSource out;
    if (p.params != nullptr) {
        out.circuit = to_params(kind, p.params, p.count);
    } else {
        out.continuous_time = p.continuous_time;
    }
    return out;
}

std::vector<std::size_t> to_depths(const std::size_t *depths, std::size_t count) {
    require(depths != nullptr && count > 0, ErrorCode::kInvalidArgument, "depth schedule is empty");
    return {depths, depths + count};
}

}  // namespace

extern "C" {

const char *fm_version(void) {
    return "1.0.0";
}

const char *fm_last_error_message(void) {
    return last_error.c_str();
}

const char *fm_status_name(fm_status status) {
    switch (status) {
        case FM_OK:
            return "ok";
        case FM_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case FM_ERR_LAYOUT_MISMATCH:
            return "layout mismatch";
        case FM_ERR_TRUNCATION:
            return "truncation";
        case FM_ERR_NUMERICAL:
            return "numerical failure";
        case FM_ERR_NOT_FOUND:
            return "not found";
        case FM_ERR_IO:
            return "i/o failure";
        case FM_ERR_UNSUPPORTED_VERSION:
            return "unsupported version";
        case FM_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

fm_status fm_compute_bounds(double n_mean, fm_bounds *out) {
    return guarded([&] {
        not_null(out, "out");
        const Bounds b = bounds(n_mean);
        *out = {b.n_mean, b.sql_inv_fi, b.tfs_inv_fi, b.hl_inv_fi};
    });
}

fm_status fm_default_cutoff(double n_mean, size_t *out) {
    return guarded([&] {
        not_null(out, "out");
        require(n_mean >= 0.0 && std::isfinite(n_mean), ErrorCode::kInvalidArgument,
                "mean photon number must be non-negative");
        *out = default_cutoff(n_mean);
    });
}

double fm_default_phi(void) {
    return kDefaultPhi;
}

double fm_default_delta(void) {
    return kDefaultDelta;
}

fm_status fm_state_initial(fm_kind kind, double n_mean, size_t cutoff, fm_state **out) {
    return guarded([&] {
        not_null(out, "out");
        const Nonlinearity k = to_kind(kind);
        require(n_mean >= 0.0 && std::isfinite(n_mean), ErrorCode::kInvalidArgument,
                "mean photon number must be non-negative");
        *out = new fm_state{initial_state(k, n_mean, cutoff == 0 ? default_cutoff(n_mean) : cutoff)};
    });
}

fm_status fm_state_evolve(const fm_state *state, fm_kind kind, double time, fm_state **out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        *out = new fm_state{evolve_continuous(to_kind(kind), time, state->state)};
    });
}

fm_status fm_state_run_circuit(const fm_state *state, fm_kind kind, const double *params, size_t count,
                               fm_state **out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        *out = new fm_state{run_circuit(to_params(to_kind(kind), params, count), state->state)};
    });
}

fm_status fm_state_dim(const fm_state *state, size_t *out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        *out = state->state.layout().total_dim();
    });
}

fm_status fm_state_norm(const fm_state *state, double *out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        *out = state->state.norm();
    });
}

fm_status fm_state_mean_photons(const fm_state *state, double *out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        *out = mean_photon_number(state->state);
    });
}

fm_status fm_state_qfi(const fm_state *state, fm_qfi_estimator estimator, double phi, double delta, double *out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        *out = estimator == FM_QFI_VARIANCE ? qfi_variance_oracle(state->state, phi).value
                                            : qfi_fidelity(state->state, phi, delta).value;
    });
}

void fm_state_free(fm_state *state) {
    delete state;
}

void fm_measurement_model_default(fm_measurement_model *model) {
    if (model != nullptr) {
        *model = {FM_MEASURE_COUNTING, 1, 0.0, FM_FRAME_REFERENCE_ARM, 0.0, 0};
    }
}

fm_status fm_state_cfi(const fm_state *state, const fm_measurement_model *model, double phi, double *out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        const MeasurementModel m = to_model(model, state->state.layout().cutoff());
        *out = cfi(encoded_family(state->state, phi), m).value;
    });
}

void fm_sweep_options_default(fm_sweep_options *options) {
    if (options != nullptr) {
        *options = {0, kDefaultPhi, kDefaultDelta, FM_QFI_FIDELITY, 0, 0, 0.0, FM_FRAME_REFERENCE_ARM, 1};
    }
}

fm_status fm_default_time_grid(fm_kind kind, double *times, size_t capacity, size_t *count) {
    return guarded([&] {
        not_null(count, "count");
        const auto grid = default_time_grid(to_kind(kind));
        *count = grid.size();
        if (times != nullptr) {
            require(capacity >= grid.size(), ErrorCode::kInvalidArgument, "time buffer too small");
            std::copy(grid.begin(), grid.end(), times);
        }
    });
}

fm_status fm_sweep_run(fm_kind kind, double n_mean, const double *times, size_t count, const fm_sweep_options *options,
                       fm_sweep **out) {
    return guarded([&] {
        not_null(times, "times");
        not_null(out, "out");
        auto *s = new fm_sweep;
        try {
            s->records = sweep_continuous(to_kind(kind), n_mean, {times, times + count}, to_options(options));
            s->minima = find_minima(s->records);
        } catch (...) {
            delete s;
            throw;
        }
        *out = s;
    });
}

size_t fm_sweep_size(const fm_sweep *sweep) {
    return sweep == nullptr ? 0 : sweep->records.size();
}

fm_status fm_sweep_row_at(const fm_sweep *sweep, size_t index, fm_sweep_row *row) {
    return guarded([&] {
        not_null(sweep, "sweep");
        not_null(row, "row");
        require(index < sweep->records.size(), ErrorCode::kInvalidArgument, "row index out of range");
        const SweepRecord &r = sweep->records[index];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        *row = {r.time, r.inv_qfi, r.inv_cfi_counting.value_or(nan), r.inv_cfi_homodyne.value_or(nan)};
    });
}

size_t fm_sweep_minima_count(const fm_sweep *sweep) {
    return sweep == nullptr ? 0 : sweep->minima.size();
}

fm_status fm_sweep_minimum_at(const fm_sweep *sweep, size_t index, fm_extremum *out) {
    return guarded([&] {
        not_null(sweep, "sweep");
        not_null(out, "out");
        require(index < sweep->minima.size(), ErrorCode::kInvalidArgument, "minimum index out of range");
        *out = {sweep->minima[index].time, sweep->minima[index].value};
    });
}

void fm_sweep_free(fm_sweep *sweep) {
    delete sweep;
}

fm_status fm_find_minima(const double *xs, const double *ys, size_t count, fm_extremum *out, size_t capacity,
                         size_t *found) {
    return guarded([&] {
        not_null(xs, "xs");
        not_null(ys, "ys");
        not_null(found, "found");
        const auto minima = find_minima(std::vector<double>(xs, xs + count), std::vector<double>(ys, ys + count));
        *found = minima.size();
        for (std::size_t i = 0; i < minima.size() && i < capacity && out != nullptr; ++i) {
            out[i] = {minima[i].time, minima[i].value};
        }
    });
}

fm_status fm_time_to_tfs(fm_kind kind, double n_mean, const fm_sweep_options *options, double step, double max_time,
                         double *out) {
    return guarded([&] {
        not_null(out, "out");
        CrossingOptions c;
        c.sweep = to_options(options);
        c.step = step;
        c.max_time = max_time;
        *out = time_to_tfs(to_kind(kind), n_mean, c);
    });
}

fm_status fm_fit(fm_fit_model model, const double *xs, const double *ys, size_t count, fm_fit_result *out) {
    return guarded([&] {
        not_null(xs, "xs");
        not_null(ys, "ys");
        not_null(out, "out");
        require(model == FM_FIT_SQRT || model == FM_FIT_POWERLAW || model == FM_FIT_LINEAR,
                ErrorCode::kInvalidArgument, "unknown fit model");
        const FitModel m =
            model == FM_FIT_SQRT ? FitModel::kSqrt : (model == FM_FIT_POWERLAW ? FitModel::kPowerLaw : FitModel::kLinear);
        const FitResult r = fit(m, {xs, xs + count}, {ys, ys + count});
        *out = {};
        out->model = model;
        out->coefficient_count = r.coefficients.size();
        std::copy(r.coefficients.begin(), r.coefficients.end(), out->coefficients);
        out->r_squared = r.r_squared;
    });
}

fm_status fm_theta_sweep(fm_kind kind, double n_mean, double probe_time, const double *thetas, size_t count,
                         const fm_sweep_options *options, double degeneracy, double *inv_cfi, double *theta_min,
                         double *inv_cfi_min) {
    return guarded([&] {
        not_null(thetas, "thetas");
        const ThetaSweep s =
            sweep_theta(to_kind(kind), n_mean, probe_time, {thetas, thetas + count}, to_options(options), degeneracy);
        for (std::size_t i = 0; i < s.points.size() && inv_cfi != nullptr; ++i) {
            inv_cfi[i] = s.points[i].inv_cfi;
        }
        if (theta_min != nullptr) {
            *theta_min = s.theta_min;
        }
        if (inv_cfi_min != nullptr) {
            *inv_cfi_min = s.inv_cfi_min;
        }
    });
}

void fm_problem_default(fm_problem *problem) {
    if (problem != nullptr) {
        *problem = {FM_KIND_KERR, 20.0, 0, kDefaultPhi, kDefaultDelta};
    }
}

void fm_optimizer_config_default(fm_optimizer_config *config) {
    if (config != nullptr) {
        const OptimizerConfig d;
        *config = {d.max_iters, d.tol, d.init_scale, d.initial_step, d.seeds, d.d_max, d.master_seed, d.workers};
    }
}

fm_status fm_optimize_preparation(const fm_problem *problem, const size_t *depths, size_t depth_count,
                                  const fm_optimizer_config *config, fm_opt_result **out) {
    return guarded([&] {
        not_null(out, "out");
        auto records = optimize_preparation(to_problem(problem), to_depths(depths, depth_count), to_config(config));
        *out = new fm_opt_result{std::move(records)};
    });
}

fm_status fm_optimize_measurement(const fm_problem *problem, const fm_probe *probes, size_t probe_count,
                                  const fm_measurement_model *model, const size_t *depths, size_t depth_count,
                                  const fm_optimizer_config *config, fm_opt_result **out) {
    return guarded([&] {
        not_null(out, "out");
        not_null(probes, "probes");
        const ProblemSpec spec = to_problem(problem);
        std::vector<ProbeSource> sources;
        for (std::size_t i = 0; i < probe_count; ++i) {
            sources.push_back(to_probe(spec.kind, probes[i]));
        }
        auto records = optimize_measurement(spec, sources, to_model(model, spec.resolved_cutoff()),
                                            to_depths(depths, depth_count), to_config(config));
        *out = new fm_opt_result{std::move(records)};
    });
}

size_t fm_opt_result_size(const fm_opt_result *result) {
    return result == nullptr ? 0 : result->records.size();
}

fm_status fm_opt_result_at(const fm_opt_result *result, size_t index, fm_opt_record *out) {
    return guarded([&] {
        not_null(result, "result");
        not_null(out, "out");
        require(index < result->records.size(), ErrorCode::kInvalidArgument, "record index out of range");
        const OptRecord &r = result->records[index];
        *out = {};
        out->kind = from_kind(r.kind);
        out->n_mean = r.n_mean;
        out->seed = r.seed;
        out->d = r.d;
        out->params = r.best_params.data();
        out->param_count = r.best_params.size();
        out->objective = r.best_objective;
        out->inv_fisher = r.ok() ? r.inverse_fisher() : std::numeric_limits<double>::quiet_NaN();
        out->iters = r.iters_used;
        out->budget = r.budget.total;
        out->wall_time = r.wall_time;
        out->error = r.ok() ? nullptr : r.error.c_str();
    });
}

void fm_opt_result_free(fm_opt_result *result) {
    delete result;
}

fm_status fm_preparation_objective(const fm_problem *problem, const double *params, size_t count, double *out) {
    return guarded([&] {
        not_null(out, "out");
        const ProblemSpec spec = to_problem(problem);
        *out = preparation_objective(spec, to_params(spec.kind, params, count));
    });
}

fm_status fm_measurement_objective(const fm_problem *problem, const fm_probe *probe, const double *premeasure,
                                   size_t count, const fm_measurement_model *model, double *out) {
    return guarded([&] {
        not_null(out, "out");
        not_null(probe, "probe");
        const ProblemSpec spec = to_problem(problem);
        const PhaseFamily family = encoded_family(to_probe(spec.kind, *probe).build(spec), spec.phi);
        *out = measurement_objective(spec, family, to_params(spec.kind, premeasure, count),
                                     to_model(model, spec.resolved_cutoff()));
    });
}

fm_status fm_minimize(double (*objective)(const double *x, size_t n, void *user), void *user, const double *x0,
                      size_t n, const fm_optimizer_config *config, double *x_best, double *f_best, size_t *iters) {
    return guarded([&] {
        require(objective != nullptr, ErrorCode::kInvalidArgument, "objective must not be null");
        not_null(x0, "x0");
        const MinimizeResult r = minimize(
            [&](const std::vector<double> &x) { return objective(x.data(), x.size(), user); },
            std::vector<double>(x0, x0 + n), to_config(config));
        if (x_best != nullptr) {
            std::copy(r.x.begin(), r.x.end(), x_best);
        }
        if (f_best != nullptr) {
            *f_best = r.f;
        }
        if (iters != nullptr) {
            *iters = r.iters;
        }
    });
}

fm_status fm_ablation_theta(const fm_problem *problem, const double *prepared, size_t count,
                            const fm_optimizer_config *config, fm_ablation_record *out) {
    return guarded([&] {
        not_null(out, "out");
        const ProblemSpec spec = to_problem(problem);
        const AblationRecord r = ablation_theta(spec, to_params(spec.kind, prepared, count), to_config(config));
        *out = {r.d, r.inv_cfi_theta_free, r.inv_cfi_theta_zero_pqc, r.inv_cfi_theta_free_pqc, r.inv_cfi_theta_zero,
                r.inv_qfi};
    });
}

fm_status fm_wigner_from_state(const fm_state *state, size_t mode, const double *x_axis, size_t nx,
                               const double *p_axis, size_t np, fm_wigner **out) {
    return guarded([&] {
        not_null(state, "state");
        not_null(out, "out");
        const auto modes = state->state.layout().mode_indices();
        require(mode < modes.size(), ErrorCode::kInvalidArgument, "mode index out of range");
        const ReducedDensity rho = reduce_to_mode(state->state, modes[mode]);
        auto *w = new fm_wigner;
        try {
            if (x_axis == nullptr && p_axis == nullptr) {
                w->grid = wigner(rho);
            } else {
                not_null(x_axis, "x axis");
                not_null(p_axis, "p axis");
                w->grid = wigner(rho, {x_axis, x_axis + nx}, {p_axis, p_axis + np});
            }
            const auto rows = w->grid.values.rows();
            const auto cols = w->grid.values.cols();
            w->row_major.resize(static_cast<std::size_t>(rows * cols));
            for (Eigen::Index i = 0; i < rows; ++i) {
                for (Eigen::Index j = 0; j < cols; ++j) {
                    w->row_major[static_cast<std::size_t>(i * cols + j)] = w->grid.values(i, j);
                }
            }
        } catch (...) {
            delete w;
            throw;
        }
        *out = w;
    });
}

fm_status fm_wigner_shape(const fm_wigner *grid, size_t *nx, size_t *np) {
    return guarded([&] {
        not_null(grid, "grid");
        if (nx != nullptr) {
            *nx = grid->grid.x_axis.size();
        }
        if (np != nullptr) {
            *np = grid->grid.p_axis.size();
        }
    });
}

const double *fm_wigner_x_axis(const fm_wigner *grid) {
    return grid == nullptr ? nullptr : grid->grid.x_axis.data();
}

const double *fm_wigner_p_axis(const fm_wigner *grid) {
    return grid == nullptr ? nullptr : grid->grid.p_axis.data();
}

const double *fm_wigner_values(const fm_wigner *grid) {
    return grid == nullptr ? nullptr : grid->row_major.data();
}

double fm_wigner_integral(const fm_wigner *grid) {
    return grid == nullptr ? std::numeric_limits<double>::quiet_NaN() : grid->grid.integral();
}

double fm_wigner_purity(const fm_wigner *grid) {
    return grid == nullptr ? std::numeric_limits<double>::quiet_NaN() : grid->grid.purity();
}

void fm_wigner_free(fm_wigner *grid) {
    delete grid;
}

}  // extern "C"
