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
 * Truncated composite Hilbert spaces built from two-level emitters and
 * bosonic modes.
 *
 * Index convention: amplitudes are stored row-major over the factor indices,
 * the leftmost factor varying slowest. The Jaynes-Cummings register is
 * (emitter1, emitter2, mode1, mode2) and the Kerr register is (mode1, mode2).
 * For an emitter factor index 0 is the ground state |g> and 1 is |e>.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fockmetro {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Which nonlinearity a register is built for.
enum class Nonlinearity { kJC, kKerr };

std::string to_string(Nonlinearity kind);
Nonlinearity parse_nonlinearity(const std::string &text);

enum class FactorKind { kQubit, kMode };

struct Factor {
    FactorKind kind;
    std::size_t dim;

    bool operator==(const Factor &) const = default;
};

class SubsystemLayout {
  public:
    explicit SubsystemLayout(std::vector<Factor> factors);

    static SubsystemLayout jc(std::size_t cutoff);
    static SubsystemLayout kerr(std::size_t cutoff);
    static SubsystemLayout for_kind(Nonlinearity kind, std::size_t cutoff);

    const std::vector<Factor> &factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }
    std::size_t dim(std::size_t factor) const { return factors_.at(factor).dim; }
    std::size_t total_dim() const { return total_dim_; }
    /// Distance in the flat amplitude vector between consecutive values of one factor index.
    std::size_t stride(std::size_t factor) const { return strides_.at(factor); }

    std::vector<std::size_t> mode_indices() const;
    std::vector<std::size_t> emitter_indices() const;
    bool has_emitters() const { return !emitter_indices().empty(); }
    /// Shared dimension of the mode factors. Throws if the modes disagree.
    std::size_t cutoff() const;

    bool operator==(const SubsystemLayout &other) const { return factors_ == other.factors_; }

  private:
    std::vector<Factor> factors_;
    std::vector<std::size_t> strides_;
    std::size_t total_dim_ = 1;
};

/// A pure state over a layout. Unitary pipelines keep it normalized; the
/// phase-derivative vectors used for classical Fisher information reuse the
/// type without the unit-norm guarantee.
class CompositeState {
  public:
    CompositeState(SubsystemLayout layout, Vector amplitudes);

    const SubsystemLayout &layout() const { return layout_; }
    const Vector &amplitudes() const { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }

  private:
    SubsystemLayout layout_;
    Vector amplitudes_;
};

struct CoherentAmplitudes {
    Vector amplitudes;
    /// Probability weight lost to truncation before renormalization.
    double tail = 0.0;
};

/// Largest truncation tail a coherent state may lose before it is rejected.
inline constexpr double kMaxCoherentTail = 1e-6;

/// Truncated coherent state, renormalized. Throws kTruncation when the tail
/// beyond the cutoff exceeds kMaxCoherentTail.
CoherentAmplitudes coherent_state(Complex alpha, std::size_t cutoff);

/// Poisson weight at or above `cutoff` for mean photon number `mean`.
double poisson_tail(double mean, std::size_t cutoff);

/// Per-mode cutoff for total mean photon number N: 2N, raised if needed so
/// that each |alpha|^2 = N/2 coherent input passes the truncation guard.
std::size_t default_cutoff(double total_mean_photons);

Vector fock_state(std::size_t n, std::size_t dim);
Vector emitter_ground();
Vector emitter_excited();

CompositeState product_state(const SubsystemLayout &layout, std::span<const Vector> factor_vectors);

/// |g,g,alpha,alpha> (JC) or |alpha,alpha> (Kerr) with |alpha|^2 = N/2, alpha real.
CompositeState initial_state(Nonlinearity kind, double total_mean_photons, std::size_t cutoff);

/// <a|b>, conjugating a.
Complex inner_product(const CompositeState &a, const CompositeState &b);

/// Expectation of n_1 + n_2 + ... over all mode factors.
double mean_photon_number(const CompositeState &state);
/// Expectation of the number of excited emitters.
double mean_excitations(const CompositeState &state);

/// Single-factor reduced density matrix.
struct ReducedDensity {
    std::size_t dim = 0;
    Matrix matrix;

    double trace() const { return matrix.trace().real(); }
    double purity() const { return (matrix * matrix).trace().real(); }
};

/// Density operator over a (sub)layout, used for multi-step partial traces.
struct DensityOperator {
    SubsystemLayout layout;
    Matrix matrix;
};

DensityOperator density(const CompositeState &state);
/// Traces out one factor; the remaining factors keep their relative order.
DensityOperator trace_out(const DensityOperator &rho, std::size_t factor);

/// Partial trace of |psi><psi| over every factor except `factor`, which must be a mode.
ReducedDensity reduce_to_mode(const CompositeState &state, std::size_t factor);

}  // namespace fockmetro
