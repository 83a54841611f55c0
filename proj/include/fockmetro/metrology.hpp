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
 * Quantum and classical Fisher information for the interferometric phase,
 * photon-counting and homodyne outcome models, and reference precision bounds.
 */

#pragma once

#include <cstddef>
#include <vector>

#include "fockmetro/encoding.hpp"

namespace fockmetro {

inline constexpr double kDefaultDelta = 1e-2;
/// Outcomes below this probability (or density) are skipped in the CFI sum.
inline constexpr double kProbabilityFloor = 1e-12;

enum class MeasurementKind { kCounting, kHomodyne };

std::string to_string(MeasurementKind kind);
MeasurementKind parse_measurement(const std::string &text);

/// Symmetric quadrature grid [-x_max, x_max] with an odd number of points.
struct QuadratureGrid {
    double x_max = 0.0;
    std::size_t points = 0;

    /// 801 points over sqrt(2 cutoff) + 4.
    static QuadratureGrid defaults(std::size_t cutoff);
    std::vector<double> axis() const;
    /// Trapezoid weights matching axis().
    std::vector<double> weights() const;
    void validate(std::size_t cutoff) const;
};

/// Reference for the homodyne angle. kReferenceArm locks the local oscillator
/// to the unshifted arm: the quadrature actually measured on the symmetric
/// encoded state has angle theta - phi0/2 at operating point phi0. kEncoded
/// measures theta directly.
enum class QuadratureFrame { kReferenceArm, kEncoded };

std::string to_string(QuadratureFrame frame);
QuadratureFrame parse_quadrature_frame(const std::string &text);

struct MeasurementModel {
    MeasurementKind kind = MeasurementKind::kCounting;
    /// Join emitter sigma_z outcomes to the photonic ones (JC registers).
    bool include_emitters = false;
    double theta = 0.0;
    QuadratureFrame frame = QuadratureFrame::kReferenceArm;
    QuadratureGrid grid;

    /// Quadrature angle applied to the encoded state at operating point phi.
    double measured_angle(double phi) const;

    static MeasurementModel counting(bool include_emitters);
    static MeasurementModel homodyne(double theta, std::size_t cutoff, bool include_emitters);
};

struct FisherResult {
    enum class Kind { kQuantum, kClassical };

    double value = 0.0;
    Kind kind = Kind::kQuantum;
    double delta_used = 0.0;
    double phi = 0.0;

    double inverse() const { return 1.0 / value; }
};

/// Inverse Fisher information of the standard quantum limit, twin Fock states
/// and the Heisenberg limit at mean photon number N.
struct Bounds {
    double n_mean = 0.0;
    double sql_inv_fi = 0.0;
    double tfs_inv_fi = 0.0;
    double hl_inv_fi = 0.0;
};

Bounds bounds(double n_mean);

/// 8 (1 - |<psi_E(phi)|psi_E(phi + delta)>|) / delta^2.
FisherResult qfi_fidelity(const CompositeState &probe, double phi = kDefaultPhi, double delta = kDefaultDelta);

/// 4 Var(G) with G = (n2 - n1)/2 evaluated after the first beam splitter.
FisherResult qfi_variance_oracle(const CompositeState &probe, double phi = kDefaultPhi);

/// A state |psi(phi)> together with its phi-derivative. Any phi-independent
/// unitary acts on both members alike.
struct PhaseFamily {
    CompositeState state;
    CompositeState derivative;
    double phi = 0.0;
};

PhaseFamily encoded_family(const CompositeState &probe, double phi = kDefaultPhi);
PhaseFamily transform(const PhaseFamily &family, const std::vector<LocalGate> &gates);

/// Photon-counting outcome probabilities.
struct CountingTable {
    /// Outcome axes: (z1, z2, N1, N2) with emitters, (N1, N2) otherwise.
    std::vector<std::size_t> shape;
    /// Row-major over `shape`.
    std::vector<double> probabilities;

    double total() const;
};

CountingTable counting_probabilities(const CompositeState &state, bool include_emitters);

/// Joint homodyne density on the quadrature grid.
struct HomodyneTable {
    std::vector<double> axis;
    std::vector<double> weights;
    /// Emitter outcome configurations (4 with emitters, 1 otherwise).
    std::size_t emitter_outcomes = 1;
    /// density[(z * P + i1) * P + i2] for grid points i1 (mode 1) and i2 (mode 2).
    std::vector<double> density;
    /// Trapezoid integral of the density (summed over emitter outcomes).
    double integral = 0.0;
};

/// `theta` is the angle applied to `state` as given (no frame shift).
HomodyneTable homodyne_probabilities(const CompositeState &state, double theta, const QuadratureGrid &grid,
                                     bool include_emitters);

/// Harmonic-oscillator eigenfunctions psi_n(x_p), rows n < cutoff, columns grid points.
Eigen::MatrixXd oscillator_wavefunctions(std::size_t cutoff, const std::vector<double> &axis);

/// Classical Fisher information sum_l (dP_l)^2 / P_l with analytic dP.
FisherResult cfi(const PhaseFamily &family, const MeasurementModel &model);

}  // namespace fockmetro
