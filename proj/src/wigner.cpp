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

#include "fockmetro/wigner.hpp"

#include <cmath>
#include <numbers>

#include "fockmetro/error.hpp"

namespace fockmetro {

namespace {

std::vector<double> trapezoid(const std::vector<double> &axis) {
    std::vector<double> w(axis.size(), 0.0);
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
        const double h = 0.5 * (axis[i + 1] - axis[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

double weighted_sum(const WignerGrid &g, bool squared) {
    const auto wx = trapezoid(g.x_axis);
    const auto wp = trapezoid(g.p_axis);
    double s = 0.0;
    for (std::size_t i = 0; i < wp.size(); ++i) {
        for (std::size_t j = 0; j < wx.size(); ++j) {
            const double v = g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            s += wp[i] * wx[j] * (squared ? v * v : v);
        }
    }
    return s;
}

void require_axis(const std::vector<double> &axis, const char *name) {
    require(axis.size() >= 2, ErrorCode::kInvalidArgument, std::string(name) + " needs at least two points");
    for (std::size_t i = 1; i < axis.size(); ++i) {
        require(axis[i] > axis[i - 1], ErrorCode::kInvalidArgument, std::string(name) + " must be increasing");
    }
}

}  // namespace

double WignerGrid::integral() const {
    return weighted_sum(*this, false);
}

double WignerGrid::purity() const {
    return 2.0 * std::numbers::pi * weighted_sum(*this, true);
}

std::vector<double> default_wigner_axis(std::size_t dim) {
    const double h = std::max(9.0, std::ceil(std::sqrt(2.0 * static_cast<double>(dim))));
    std::vector<double> axis(201);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        axis[i] = -h + 2.0 * h * static_cast<double>(i) / 200.0;
    }
    return axis;
}

WignerGrid wigner(const ReducedDensity &rho, const std::vector<double> &x_axis, const std::vector<double> &p_axis) {
    require_axis(x_axis, "x axis");
    require_axis(p_axis, "p axis");
    const auto c = static_cast<Eigen::Index>(rho.dim);
    require(rho.matrix.rows() == c && rho.matrix.cols() == c && c >= 1, ErrorCode::kInvalidArgument,
            "density matrix shape does not match its dimension");
    require((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, ErrorCode::kInvalidArgument,
            "density matrix is not Hermitian");

    WignerGrid g{x_axis, p_axis,
                 Eigen::MatrixXd(static_cast<Eigen::Index>(p_axis.size()), static_cast<Eigen::Index>(x_axis.size()))};
    // ell(n, k) = sqrt(n!/(n+k)!) u^(k/2) e^(-u/2) L_n^k(u) with u = 2 r^2, so
    // the |n+k><n| kernel is (-1)^n ell(n, k) e^(-i k angle(x + i p)) / pi.
    Eigen::MatrixXd ell(c, c);
    std::vector<double> log_fact(static_cast<std::size_t>(c) + 1, 0.0);
    for (std::size_t k = 1; k < log_fact.size(); ++k) {
        log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));
    }
    double residue = 0.0;
    for (std::size_t i = 0; i < p_axis.size(); ++i) {
        for (std::size_t j = 0; j < x_axis.size(); ++j) {
            const double x = x_axis[j], p = p_axis[i];
            const double u = 2.0 * (x * x + p * p);
            const double angle = std::atan2(p, x);
            for (Eigen::Index k = 0; k < c; ++k) {
                const double dk = static_cast<double>(k);
                const double l0 = u > 0.0 ? std::exp(0.5 * dk * std::log(u) - 0.5 * log_fact[k] - 0.5 * u)
                                          : (k == 0 ? 1.0 : 0.0);
                ell(0, k) = l0;
                if (k + 1 < c) {
                    ell(1, k) = l0 * (1.0 + dk - u) / std::sqrt(dk + 1.0);
                }
                for (Eigen::Index n = 1; n + 1 + k < c; ++n) {
                    const double dn = static_cast<double>(n);
                    ell(n + 1, k) = ((2.0 * dn + 1.0 + dk - u) * ell(n, k) - std::sqrt(dn * (dn + dk)) * ell(n - 1, k)) /
                                    std::sqrt((dn + 1.0) * (dn + 1.0 + dk));
                }
            }
            Complex total = 0.0;
            for (Eigen::Index k = 0; k < c; ++k) {
                Complex lower = 0.0;
                Complex upper = 0.0;
                for (Eigen::Index n = 0; n + k < c; ++n) {
                    const double s = (n % 2 == 0 ? 1.0 : -1.0) * ell(n, k);
                    lower += s * rho.matrix(n + k, n);
                    upper += s * rho.matrix(n, n + k);
                }
                if (k == 0) {
                    total += lower;
                } else {
                    const Complex phase = std::polar(1.0, -static_cast<double>(k) * angle);
                    total += lower * phase + upper * std::conj(phase);
                }
            }
            residue = std::max(residue, std::abs(total.imag()));
            g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = total.real() / std::numbers::pi;
        }
    }
    require(residue <= 1e-10, ErrorCode::kNumerical, "Wigner kernel sum has an imaginary residue");
    const double deficit = std::abs(1.0 - g.integral() / rho.trace());
    require(deficit <= kWignerMaxDeficit, ErrorCode::kTruncation,
            "Wigner grid does not cover the state (normalization deficit " + std::to_string(deficit) + ")");
    return g;
}

WignerGrid wigner(const ReducedDensity &rho) {
    const auto axis = default_wigner_axis(rho.dim);
    return wigner(rho, axis, axis);
}

}  // namespace fockmetro
