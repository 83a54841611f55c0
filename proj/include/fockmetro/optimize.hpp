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

/**
 * @file
 * Derivative-free minimization and the layer-growing optimization of
 * preparation and pre-measurement circuits.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fockmetro/circuits.hpp"
#include "fockmetro/metrology.hpp"

namespace fockmetro {

enum class OptimizerMethod { kNelderMead };

std::string to_string(OptimizerMethod method);
OptimizerMethod parse_optimizer_method(const std::string &text);

struct OptimizerConfig {
    /// Cap on objective evaluations per run.
    std::size_t max_iters = 1000;
    double tol = 1e-10;
    OptimizerMethod method = OptimizerMethod::kNelderMead;
    /// Initial parameters are uniform on [-init_scale, init_scale].
    double init_scale = 1e-2;
    /// Edge length of the starting simplex. Also caps a single expansion.
    /// Stalled restarts retry at 2x and 4x this length.
    double initial_step = 0.5;
    std::size_t seeds = 10;
    std::size_t d_max = 10;
    /// Top-level seed; per-run streams derive from it.
    std::uint64_t master_seed = 0;
    /// Worker threads for independent seeds (0 = hardware concurrency).
    std::size_t workers = 1;

    void validate() const;
};

struct MinimizeResult {
    std::vector<double> x;
    double f = 0.0;
    std::size_t iters = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double> &)>;

/// Nelder-Mead with adaptive coefficients. The returned value never exceeds
/// objective(x0).
MinimizeResult minimize(const Objective &objective, const std::vector<double> &x0, const OptimizerConfig &config);

/// Counter-based seed expansion (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter = 0);
std::vector<double> random_initial(std::size_t count, double scale, std::uint64_t seed);

struct OptRecord {
    Nonlinearity kind = Nonlinearity::kKerr;
    double n_mean = 0.0;
    std::size_t seed = 0;
    std::size_t d = 0;
    std::vector<double> best_params;
    /// -F_Q or -F_C.
    double best_objective = 0.0;
    std::size_t iters_used = 0;
    InteractionBudget budget;
    double wall_time = 0.0;
    /// Empty on success. Failed records carry the diagnostic and no params.
    std::string error;

    bool ok() const { return error.empty(); }
    double inverse_fisher() const { return -1.0 / best_objective; }
};

/// Problem setup shared by the preparation and measurement stages.
struct ProblemSpec {
    Nonlinearity kind = Nonlinearity::kKerr;
    double n_mean = 20.0;
    /// 0 selects default_cutoff(n_mean).
    std::size_t cutoff = 0;
    double phi = kDefaultPhi;
    double delta = kDefaultDelta;

    std::size_t resolved_cutoff() const;
    CompositeState initial() const;
};

/// -F_Q of the prepared probe (fidelity estimator).
double preparation_objective(const ProblemSpec &problem, const AnsatzParams &params);

/// Runs seeds 0..config.seeds-1 over depths 1..max(d_schedule). A seed's first
/// depth starts near zero; deeper ones warm-start from the previous optimum with
/// an appended zero layer. Records are returned for depths in d_schedule,
/// ordered by (seed, d).
std::vector<OptRecord> optimize_preparation(const ProblemSpec &problem, const std::vector<std::size_t> &d_schedule,
                                            const OptimizerConfig &config);

/// Probe to measure: a fixed preparation circuit (nullopt = continuous
/// evolution given by `continuous_time`).
struct ProbeSource {
    std::optional<AnsatzParams> circuit;
    double continuous_time = 0.0;

    CompositeState build(const ProblemSpec &problem) const;
};

/// -F_C of U_M(mu)|psi_E(phi)> under `model`.
double measurement_objective(const ProblemSpec &problem, const PhaseFamily &encoded, const AnsatzParams &premeasure,
                             const MeasurementModel &model);

/// Optimizes pre-measurement circuits with the same warm-start schedule.
/// `probes` holds either one probe (used at every depth) or one per entry of
/// d_schedule.
std::vector<OptRecord> optimize_measurement(const ProblemSpec &problem, const std::vector<ProbeSource> &probes,
                                            const MeasurementModel &model, const std::vector<std::size_t> &d_schedule,
                                            const OptimizerConfig &config);

/// -F_C without pre-measurement circuit, homodyne angle as sole parameter.
struct ThetaOnlyResult {
    double theta = 0.0;
    double inv_cfi = 0.0;
    std::size_t parameter_count = 1;
};

ThetaOnlyResult optimize_theta_only(const ProblemSpec &problem, const ProbeSource &probe, const OptimizerConfig &config,
                                    std::size_t scan_points = 64);

struct AblationRecord {
    std::size_t d = 0;
    /// (a) free angle, no pre-measurement circuit.
    double inv_cfi_theta_free = 0.0;
    /// (b) angle 0 with pre-measurement circuit.
    double inv_cfi_theta_zero_pqc = 0.0;
    /// (c) free angle with pre-measurement circuit.
    double inv_cfi_theta_free_pqc = 0.0;
    /// Angle 0, no pre-measurement circuit.
    double inv_cfi_theta_zero = 0.0;
    double inv_qfi = 0.0;
};

/// Homodyne strategy comparison for a prepared probe at depth d. Circuit runs
/// take the best over config.seeds seeds.
AblationRecord ablation_theta(const ProblemSpec &problem, const AnsatzParams &prepared, const OptimizerConfig &config);

/// Lowest objective among successful records with the given d.
std::optional<OptRecord> best_record(const std::vector<OptRecord> &records, std::size_t d);

}  // namespace fockmetro
