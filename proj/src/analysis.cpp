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

#include "fockmetro/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "fockmetro/error.hpp"

namespace fockmetro {

std::string to_string(QfiEstimator estimator) {
    return estimator == QfiEstimator::kFidelity ? "fidelity" : "variance";
}

QfiEstimator parse_qfi_estimator(const std::string &text) {
    if (text == "fidelity") {
        return QfiEstimator::kFidelity;
    }
    if (text == "variance") {
        return QfiEstimator::kVariance;
    }
    fail(ErrorCode::kInvalidArgument, "unknown QFI estimator '" + text + "' (expected fidelity or variance)");
}

std::string to_string(FitModel model) {
    switch (model) {
        case FitModel::kSqrt:
            return "sqrt";
        case FitModel::kPowerLaw:
            return "powerlaw";
        case FitModel::kLinear:
            return "linear";
    }
    return "?";
}

std::vector<double> uniform_grid(double start, double stop, std::size_t points) {
    require(points >= 2 && stop > start, ErrorCode::kInvalidArgument, "grid needs start < stop and 2+ points");
    std::vector<double> out(points);
    const double step = (stop - start) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = start + step * static_cast<double>(i);
    }
    out.back() = stop;
    return out;
}

std::vector<double> default_time_grid(Nonlinearity kind) {
    if (kind == Nonlinearity::kJC) {
        return uniform_grid(0.0, 30.0, 301);
    }
    return uniform_grid(0.0, 2.0 * std::numbers::pi, 401);
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto loop = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        loop();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(loop);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

double qfi_value(const CompositeState &probe, const SweepOptions &options) {
    if (options.estimator == QfiEstimator::kVariance) {
        return qfi_variance_oracle(probe, options.phi).value;
    }
    return qfi_fidelity(probe, options.phi, options.delta).value;
}

void require_increasing(const std::vector<double> &xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        require(xs[i] > xs[i - 1], ErrorCode::kInvalidArgument, "grid must be strictly increasing");
    }
}

}  // namespace

SweepRecord evaluate_continuous(Nonlinearity kind, double n_mean, double time, const SweepOptions &options) {
    const std::size_t c = options.cutoff == 0 ? default_cutoff(n_mean) : options.cutoff;
    const CompositeState probe = evolve_continuous(kind, time, initial_state(kind, n_mean, c));
    SweepRecord record{kind, n_mean, time, 1.0 / qfi_value(probe, options), std::nullopt, std::nullopt};
    if (options.counting || options.homodyne) {
        const PhaseFamily family = encoded_family(probe, options.phi);
        const bool emitters = kind == Nonlinearity::kJC;
        if (options.counting) {
            record.inv_cfi_counting = 1.0 / cfi(family, MeasurementModel::counting(emitters)).value;
        }
        if (options.homodyne) {
            MeasurementModel model = MeasurementModel::homodyne(options.theta, c, emitters);
            model.frame = options.frame;
            record.inv_cfi_homodyne = 1.0 / cfi(family, model).value;
        }
    }
    return record;
}

std::vector<SweepRecord> sweep_continuous(Nonlinearity kind, double n_mean, const std::vector<double> &times,
                                          const SweepOptions &options) {
    require(!times.empty(), ErrorCode::kInvalidArgument, "empty time grid");
    require_increasing(times);
    // Build the initial state once so a cutoff violation surfaces before any work.
    initial_state(kind, n_mean, options.cutoff == 0 ? default_cutoff(n_mean) : options.cutoff);
    std::vector<SweepRecord> out(times.size());
    parallel_for(times.size(), options.workers,
                 [&](std::size_t i) { out[i] = evaluate_continuous(kind, n_mean, times[i], options); });
    return out;
}

std::vector<Extremum> find_minima(const std::vector<double> &xs, const std::vector<double> &ys) {
    require(xs.size() == ys.size(), ErrorCode::kInvalidArgument, "xs and ys differ in length");
    std::vector<Extremum> out;
    if (xs.size() < 3) {
        return out;
    }
    require_increasing(xs);
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (!(ys[i] < ys[i - 1] && ys[i] < ys[i + 1])) {
            continue;
        }
        const double x0 = xs[i - 1], x1 = xs[i], x2 = xs[i + 1];
        const double y0 = ys[i - 1], y1 = ys[i], y2 = ys[i + 1];
        // Vertex of the interpolating parabola.
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double curvature = (d12 - d01) / (x2 - x0);
        double x = x1;
        double y = y1;
        if (curvature > 0.0) {
            x = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
            x = std::clamp(x, x0, x2);
            y = y1 + (x - x1) * (d01 + curvature * (x - x0));
        }
        out.push_back({x, y, i});
    }
    return out;
}

std::vector<Extremum> find_minima(const std::vector<SweepRecord> &records) {
    std::vector<double> xs, ys;
    for (const SweepRecord &r : records) {
        xs.push_back(r.time);
        ys.push_back(r.inv_qfi);
    }
    return find_minima(xs, ys);
}

double time_to_tfs(Nonlinearity kind, double n_mean, const CrossingOptions &options) {
    require(options.step > 0.0 && options.max_time > 0.0 && options.tolerance > 0.0, ErrorCode::kInvalidArgument,
            "crossing search needs positive step, range and tolerance");
    require(n_mean > 0.0, ErrorCode::kInvalidArgument, "no crossing for an empty probe");
    const double target = n_mean * (n_mean + 2.0) / 2.0;
    const std::size_t c = options.sweep.cutoff == 0 ? default_cutoff(n_mean) : options.sweep.cutoff;
    const CompositeState psi0 = initial_state(kind, n_mean, c);
    auto excess = [&](double t) { return qfi_value(evolve_continuous(kind, t, psi0), options.sweep) - target; };
    double lo = 0.0;
    if (excess(lo) >= 0.0) {
        return lo;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double hi = options.step; hi <= options.max_time + 1e-12; hi += options.step) {
        const double e = excess(hi);
        best = std::max(best, e);
        if (e >= 0.0) {
            while (hi - lo > options.tolerance) {
                const double mid = 0.5 * (lo + hi);
                (excess(mid) >= 0.0 ? hi : lo) = mid;
            }
            return hi;
        }
        lo = hi;
    }
    fail(ErrorCode::kNotFound, "F_Q never reaches the twin-Fock value " + std::to_string(target) + " in [0, " +
                                   std::to_string(options.max_time) + "]; closest approach F_Q/F_TFS = " +
                                   std::to_string(1.0 + best / target));
}

double FitResult::predict(double x) const {
    switch (model) {
        case FitModel::kSqrt:
            return coefficients[0] * std::sqrt(x + coefficients[1]) + coefficients[2];
        case FitModel::kPowerLaw:
            return coefficients[0] * std::pow(x, coefficients[1]);
        case FitModel::kLinear:
            return coefficients[0] + coefficients[1] * x;
    }
    return 0.0;
}

namespace {

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = 0.0;
};

LineFit fit_line(const std::vector<double> &u, const std::vector<double> &y) {
    const double n = static_cast<double>(u.size());
    double su = 0, sy = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i];
        sy += y[i];
    }
    const double mu = su / n, my = sy / n;
    double suu = 0, suy = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suy += (u[i] - mu) * (y[i] - my);
    }
    require(suu > 0.0, ErrorCode::kNumerical, "degenerate abscissae in fit");
    LineFit f;
    f.slope = suy / suu;
    f.intercept = my - f.slope * mu;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * u[i];
        f.residual += r * r;
    }
    return f;
}

double r_squared(const std::vector<double> &y, const std::vector<double> &prediction) {
    double mean = 0.0;
    for (double v : y) {
        mean += v / static_cast<double>(y.size());
    }
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_tot += (y[i] - mean) * (y[i] - mean);
        ss_res += (y[i] - prediction[i]) * (y[i] - prediction[i]);
    }
    if (ss_tot == 0.0) {
        return ss_res == 0.0 ? 1.0 : 0.0;
    }
    return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

// alpha sqrt(x + beta) + gamma: the inner problem is linear in (alpha, gamma),
// leaving a one-dimensional search over beta, then a Gauss-Newton polish.
std::vector<double> fit_sqrt(const std::vector<double> &xs, const std::vector<double> &ys) {
    const double xmin = *std::min_element(xs.begin(), xs.end());
    const double xmax = *std::max_element(xs.begin(), xs.end());
    const double span = xmax - xmin;
    auto inner = [&](double beta) {
        std::vector<double> u(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            u[i] = std::sqrt(xs[i] + beta);
        }
        return fit_line(u, ys);
    };
    const double lo = -xmin + 1e-9 * std::max(1.0, span);
    const double hi = -xmin + 1e3 * std::max(1.0, span);
    // Coarse log-spaced scan, then Brent inside the best bracket.
    const std::size_t scan = 200;
    auto at = [&](std::size_t k) {
        return lo + (hi - lo) * (std::pow(10.0, 12.0 * static_cast<double>(k) / scan) - 1.0) / (1e12 - 1.0);
    };
    std::size_t best_k = 0;
    double best_res = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= scan; ++k) {
        const double r = inner(at(k)).residual;
        if (r < best_res) {
            best_res = r;
            best_k = k;
        }
    }
    const double a = at(best_k == 0 ? 0 : best_k - 1);
    const double b = at(std::min(scan, best_k + 1));
    const auto [beta0, res0] =
        boost::math::tools::brent_find_minima([&](double beta) { return inner(beta).residual; }, a, b,
                                              std::numeric_limits<double>::digits / 2);
    (void)res0;
    const LineFit lf = inner(beta0);
    Eigen::Vector3d p(lf.slope, beta0, lf.intercept);

    const auto n = static_cast<Eigen::Index>(xs.size());
    auto residuals = [&](const Eigen::Vector3d &q, Eigen::VectorXd &r) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = xs[static_cast<std::size_t>(i)] + q[1];
            if (s <= 0.0) {
                return false;
            }
            r[i] = ys[static_cast<std::size_t>(i)] - (q[0] * std::sqrt(s) + q[2]);
        }
        return true;
    };
    Eigen::VectorXd r(n), trial_r(n);
    residuals(p, r);
    for (int iter = 0; iter < 50; ++iter) {
        Eigen::MatrixXd jac(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = std::sqrt(xs[static_cast<std::size_t>(i)] + p[1]);
            jac(i, 0) = s;
            jac(i, 1) = p[0] / (2.0 * s);
            jac(i, 2) = 1.0;
        }
        const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(r);
        double t = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half, t *= 0.5) {
            const Eigen::Vector3d trial = p + t * step;
            if (residuals(trial, trial_r) && trial_r.squaredNorm() <= r.squaredNorm()) {
                p = trial;
                r = trial_r;
                accepted = true;
                break;
            }
        }
        if (!accepted || (t * step).norm() <= 1e-14 * (1.0 + p.norm())) {
            break;
        }
    }
    return {p[0], p[1], p[2]};
}

}  // namespace

FitResult fit(FitModel model, const std::vector<double> &xs, const std::vector<double> &ys) {
    require(xs.size() == ys.size(), ErrorCode::kInvalidArgument, "xs and ys differ in length");
    const std::size_t needed = model == FitModel::kSqrt ? 3 : 2;
    require(xs.size() >= needed, ErrorCode::kInvalidArgument,
            "need at least " + std::to_string(needed) + " points for a " + to_string(model) + " fit");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(std::isfinite(xs[i]) && std::isfinite(ys[i]), ErrorCode::kInvalidArgument, "non-finite fit data");
    }
    FitResult out;
    out.model = model;
    std::vector<double> prediction(xs.size());
    switch (model) {
        case FitModel::kLinear: {
            const LineFit f = fit_line(xs, ys);
            out.coefficients = {f.intercept, f.slope};
            for (std::size_t i = 0; i < xs.size(); ++i) {
                prediction[i] = out.predict(xs[i]);
            }
            out.r_squared = r_squared(ys, prediction);
            break;
        }
        case FitModel::kPowerLaw: {
            std::vector<double> lx(xs.size()), ly(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                require(xs[i] > 0.0 && ys[i] > 0.0, ErrorCode::kInvalidArgument, "power-law fit needs positive data");
                lx[i] = std::log(xs[i]);
                ly[i] = std::log(ys[i]);
            }
            const LineFit f = fit_line(lx, ly);
            out.coefficients = {std::exp(f.intercept), f.slope};
            for (std::size_t i = 0; i < xs.size(); ++i) {
                prediction[i] = f.intercept + f.slope * lx[i];
            }
            out.r_squared = r_squared(ly, prediction);
            break;
        }
        case FitModel::kSqrt: {
            out.coefficients = fit_sqrt(xs, ys);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                prediction[i] = out.predict(xs[i]);
            }
            out.r_squared = r_squared(ys, prediction);
            break;
        }
    }
    return out;
}

ThetaSweep sweep_theta(Nonlinearity kind, double n_mean, double probe_time, const std::vector<double> &thetas,
                       const SweepOptions &options, double degeneracy) {
    require(!thetas.empty(), ErrorCode::kInvalidArgument, "empty angle grid");
    require(degeneracy >= 0.0, ErrorCode::kInvalidArgument, "degeneracy must be non-negative");
    require_increasing(thetas);
    const std::size_t c = options.cutoff == 0 ? default_cutoff(n_mean) : options.cutoff;
    const CompositeState probe = evolve_continuous(kind, probe_time, initial_state(kind, n_mean, c));
    const PhaseFamily family = encoded_family(probe, options.phi);
    ThetaSweep out;
    out.points.resize(thetas.size());
    parallel_for(thetas.size(), options.workers, [&](std::size_t i) {
        MeasurementModel model = MeasurementModel::homodyne(thetas[i], c, kind == Nonlinearity::kJC);
        model.frame = options.frame;
        out.points[i] = {thetas[i], 1.0 / cfi(family, model).value};
    });
    double global = std::numeric_limits<double>::infinity();
    double peak = -std::numeric_limits<double>::infinity();
    for (const ThetaPoint &p : out.points) {
        global = std::min(global, p.inv_cfi);
        peak = std::max(peak, p.inv_cfi);
    }
    const double slack = degeneracy * (peak - global);
    const std::size_t n = out.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = out.points[i].inv_cfi;
        const bool left = i == 0 || v <= out.points[i - 1].inv_cfi;
        const bool right = i + 1 == n || v <= out.points[i + 1].inv_cfi;
        if (left && right && v <= global + slack) {
            out.theta_min = out.points[i].theta;
            out.inv_cfi_min = v;
            break;
        }
    }
    return out;
}

SweepRecord best_counting_probe(Nonlinearity kind, double n_mean, const std::vector<double> &times,
                                const SweepOptions &options) {
    SweepOptions o = options;
    o.counting = true;
    const auto records = sweep_continuous(kind, n_mean, times, o);
    return *std::min_element(records.begin(), records.end(), [](const SweepRecord &a, const SweepRecord &b) {
        return *a.inv_cfi_counting < *b.inv_cfi_counting;
    });
}

}  // namespace fockmetro
