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
 * Local gates and unitary evolution under the emitter/mode Hamiltonians.
 *
 * A LocalGate acts on a subset of layout factors and is never expanded to the
 * full register. Propagators of the excitation-exchange and tunneling
 * generators come from one cached eigendecomposition per cutoff; each call only
 * rescales eigenphases.
 */

#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fockmetro/hilbert.hpp"

namespace fockmetro {

enum class GateKind { kJC, kKerr, kTunnel, kDetune, kBeamSplitter, kPhaseDiff, kDiagonalOperator };

std::string to_string(GateKind kind);

/// Real symmetric generator split into its connected blocks, each
/// eigendecomposed: H = sum_b V_b diag(lambda_b) V_b^T.
struct SpectralGenerator {
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };
    struct Block {
        std::vector<std::size_t> indices;
        Eigen::MatrixXd basis;
        Eigen::VectorXd eigenvalues;
    };

    std::size_t dim = 0;
    std::vector<Block> blocks;

    /// Builds from the upper or lower triangle entries (mirrored automatically).
    static SpectralGenerator from_entries(std::size_t dim, const std::vector<Entry> &entries);

    /// Dense generator, for tests.
    Eigen::MatrixXd dense() const;
};

/// sigma^dagger a + sigma a^dagger on (emitter, mode), local index = emitter * cutoff + n.
std::shared_ptr<const SpectralGenerator> jc_generator(std::size_t cutoff);
/// a2^dagger a1 + a1^dagger a2 on (mode1, mode2), local index = n1 * cutoff + n2.
std::shared_ptr<const SpectralGenerator> tunnel_generator(std::size_t cutoff);

class LocalGate {
  public:
    /// Diagonal action; `unitary` is false for generator multiplications.
    static LocalGate diagonal(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets,
                              Vector entries, bool unitary = true);
    /// exp(-i t H) for a cached generator H.
    static LocalGate spectral(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets,
                              std::shared_ptr<const SpectralGenerator> generator, double t);
    static LocalGate identity(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets);

    GateKind kind() const { return kind_; }
    const std::vector<std::size_t> &targets() const { return targets_; }
    const std::vector<std::size_t> &target_dims() const { return target_dims_; }
    std::size_t local_dim() const { return local_dim_; }
    bool is_unitary() const { return unitary_; }
    bool is_identity() const { return std::holds_alternative<Identity>(action_); }

    /// Dense matrix over the target space (row-major over targets in order).
    Matrix matrix() const;
    LocalGate adjoint() const;

    /// Applies to a raw amplitude vector laid out per `layout`.
    void apply_in_place(const SubsystemLayout &layout, Vector &amplitudes) const;

  private:
    struct Identity {};
    struct Diagonal {
        Vector entries;
    };
    struct Spectral {
        std::shared_ptr<const SpectralGenerator> generator;
        std::vector<Vector> phases;
    };

    LocalGate(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets);

    GateKind kind_;
    std::vector<std::size_t> targets_;
    std::vector<std::size_t> target_dims_;
    std::size_t local_dim_ = 1;
    bool unitary_ = true;
    std::variant<Identity, Diagonal, Spectral> action_;
};

/// exp(-i g (sigma^dagger a + sigma a^dagger)) on emitter/mode pair `pair` (0 or 1).
LocalGate jc_gate(const SubsystemLayout &layout, double g_tilde, std::size_t pair);
/// exp(-i K n^2) on mode `mode` (0 or 1).
LocalGate kerr_gate(const SubsystemLayout &layout, double k_tilde, std::size_t mode);
/// exp(-i J (a2^dagger a1 + a1^dagger a2)) on both modes.
LocalGate tunnel_gate(const SubsystemLayout &layout, double j_tilde);
/// exp(-i Delta sigma^dagger sigma) on emitter `emitter` (0 or 1).
LocalGate detune_gate(const SubsystemLayout &layout, double delta_tilde, std::size_t emitter);

/// Applies a gate, checking layout compatibility and (for unitary gates) norm preservation.
CompositeState apply(const LocalGate &gate, const CompositeState &state);
CompositeState apply_all(const std::vector<LocalGate> &gates, const CompositeState &state);

/// Continuous evolution for adimensional time g~ (JC) or K~ (Kerr); both
/// pairs or both modes evolve under independent local gates.
CompositeState evolve_continuous(Nonlinearity kind, double time, const CompositeState &psi0);

}  // namespace fockmetro
