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
 * Single-mode Wigner functions from Fock-basis density matrices, with
 * x = (a + a^dagger)/sqrt(2) and hbar = 1, so a coherent amplitude alpha peaks
 * at (sqrt(2) Re alpha, sqrt(2) Im alpha).
 */

#pragma once

#include <vector>

#include "fockmetro/hilbert.hpp"

namespace fockmetro {

struct WignerGrid {
    std::vector<double> x_axis;
    std::vector<double> p_axis;
    /// values(i, j) = W(x_axis[j], p_axis[i]).
    Eigen::MatrixXd values;

    /// Trapezoid integral of W.
    double integral() const;
    /// 2 pi times the trapezoid integral of W^2.
    double purity() const;
    double min() const { return values.minCoeff(); }
    double max() const { return values.maxCoeff(); }
};

/// Largest tolerated normalization deficit before the grid counts as too small.
inline constexpr double kWignerMaxDeficit = 1e-2;

/// Symmetric 201-point axis over [-h, h], h = max(9, ceil(sqrt(2 dim))).
std::vector<double> default_wigner_axis(std::size_t dim);

WignerGrid wigner(const ReducedDensity &rho, const std::vector<double> &x_axis, const std::vector<double> &p_axis);
WignerGrid wigner(const ReducedDensity &rho);

}  // namespace fockmetro
