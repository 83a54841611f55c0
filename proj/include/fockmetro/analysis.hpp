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
 * Continuous-evolution sweeps, extremum detection, threshold crossing times,
 * curve fits and quadrature-angle scans.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockmetro/metrology.hpp"

namespace fockmetro {

enum class QfiEstimator { kFidelity, kVariance };

std::string to_string(QfiEstimator estimator);
QfiEstimator parse_qfi_estimator(const std::string &text);

struct SweepOptions {
    /// 0 selects default_cutoff(N).
    std::size_t cutoff = 0;
    double phi = kDefaultPhi;
    double delta = kDefaultDelta;
    QfiEstimator estimator = QfiEstimator::kFidelity;
    bool counting = false;
    bool homodyne = false;
    double theta = 0.0;
    QuadratureFrame frame = QuadratureFrame::kReferenceArm;
    /// Worker threads (0 = hardware concurrency).
    std::size_t workers = 1;
};

struct SweepRecord {
    Nonlinearity kind = Nonlinearity::kKerr;
    double n_mean = 0.0;
    double time = 0.0;
    double inv_qfi = 0.0;
    std::optional<double> inv_cfi_counting;
    std::optional<double> inv_cfi_homodyne;
};

/// [0, 30] step 0.1 (JC) or [0, 2 pi] step pi/200 (Kerr).
std::vector<double> default_time_grid(Nonlinearity kind);
std::vector<double> uniform_grid(double start, double stop, std::size_t points);

SweepRecord evaluate_continuous(Nonlinearity kind, double n_mean, double time, const SweepOptions &options = {});
std::vector<SweepRecord> sweep_continuous(Nonlinearity kind, double n_mean, const std::vector<double> &times,
                                          const SweepOptions &options = {});

struct Extremum {
    double time = 0.0;
    double value = 0.0;
    /// Index of the bracketed grid point.
    std::size_t index = 0;
};

/// Interior strict local minima of (xs, ys), each refined by the parabola
/// through its bracketing points.
std::vector<Extremum> find_minima(const std::vector<double> &xs, const std::vector<double> &ys);
std::vector<Extremum> find_minima(const std::vector<SweepRecord> &records);

struct CrossingOptions {
    SweepOptions sweep;
    double step = 1e-2;
    double max_time = 10.0;
    double tolerance = 1e-4;
};

/// First time where F_Q >= N(N+2)/2, bisection-refined.
double time_to_tfs(Nonlinearity kind, double n_mean, const CrossingOptions &options = {});

enum class FitModel { kSqrt, kPowerLaw, kLinear };

std::string to_string(FitModel model);

struct FitResult {
    FitModel model = FitModel::kLinear;
    /// sqrt: (alpha, beta, gamma) for alpha sqrt(x + beta) + gamma;
    /// powerlaw: (amplitude, exponent); linear: (intercept, slope).
    std::vector<double> coefficients;
    /// In log space for power laws.
    double r_squared = 0.0;

    double predict(double x) const;
};

FitResult fit(FitModel model, const std::vector<double> &xs, const std::vector<double> &ys);

struct ThetaPoint {
    double theta = 0.0;
    double inv_cfi = 0.0;
};

struct ThetaSweep {
    std::vector<ThetaPoint> points;
    double theta_min = 0.0;
    double inv_cfi_min = 0.0;
};

/// Homodyne 1/F_C per angle. theta_min is the first grid local minimum whose
/// excess over the global minimum is at most `degeneracy` times the curve's
/// peak-to-trough depth.
ThetaSweep sweep_theta(Nonlinearity kind, double n_mean, double probe_time, const std::vector<double> &thetas,
                       const SweepOptions &options = {}, double degeneracy = 0.1);

/// Continuous-evolution time minimizing the counting 1/F_C over the grid.
SweepRecord best_counting_probe(Nonlinearity kind, double n_mean, const std::vector<double> &times,
                                const SweepOptions &options = {});

}  // namespace fockmetro
