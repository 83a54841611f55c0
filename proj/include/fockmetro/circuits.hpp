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
 * Layered programmable circuits. Every layer applies, in order: tunneling,
 * emitter detuning (JC only, one shared value for both emitters), and the
 * nonlinearity on both pairs or both modes.
 *
 * Flat parameter order: (J1, D1, g1, J2, D2, g2, ...) for JC and
 * (J1, K1, J2, K2, ...) for Kerr.
 */

#pragma once

#include <span>
#include <vector>

#include "fockmetro/dynamics.hpp"

namespace fockmetro {

struct AnsatzLayer {
    double tunnel = 0.0;
    /// Ignored by the Kerr ansatz.
    double detune = 0.0;
    /// g~ (JC) or K~ (Kerr).
    double nonlinear = 0.0;

    bool operator==(const AnsatzLayer &) const = default;
};

class AnsatzParams {
  public:
    AnsatzParams(Nonlinearity kind, std::vector<AnsatzLayer> layers);

    static AnsatzParams zeros(Nonlinearity kind, std::size_t depth);
    static AnsatzParams from_flat(Nonlinearity kind, std::span<const double> values);
    static std::size_t params_per_layer(Nonlinearity kind) { return kind == Nonlinearity::kJC ? 3 : 2; }

    Nonlinearity kind() const { return kind_; }
    std::size_t depth() const { return layers_.size(); }
    std::size_t parameter_count() const { return depth() * params_per_layer(kind_); }
    const std::vector<AnsatzLayer> &layers() const { return layers_; }

    std::vector<double> flat() const;
    /// Same circuit followed by an all-zero (identity) layer.
    AnsatzParams with_zero_layer() const;

    bool operator==(const AnsatzParams &) const = default;

  private:
    Nonlinearity kind_;
    std::vector<AnsatzLayer> layers_;
};

enum class CircuitRole { kPrepare, kPremeasure };

/// Gates in application order.
std::vector<LocalGate> build_circuit(const AnsatzParams &params, const SubsystemLayout &layout,
                                     CircuitRole role = CircuitRole::kPrepare);
/// Reversed, adjoint gate list.
std::vector<LocalGate> inverse_circuit(const std::vector<LocalGate> &gates);

CompositeState run_circuit(const AnsatzParams &params, const CompositeState &state);

/// Total nonlinear interaction time sum_j |g~_j| or sum_j |K~_j|.
struct InteractionBudget {
    double total = 0.0;
};

InteractionBudget interaction_budget(const AnsatzParams &params);

}  // namespace fockmetro
