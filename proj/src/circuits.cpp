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

#include "fockmetro/circuits.hpp"

#include <cmath>

#include "fockmetro/error.hpp"

namespace fockmetro {

AnsatzParams::AnsatzParams(Nonlinearity kind, std::vector<AnsatzLayer> layers)
    : kind_(kind), layers_(std::move(layers)) {
    require(!layers_.empty(), ErrorCode::kInvalidArgument, "ansatz needs at least one layer");
    if (kind_ == Nonlinearity::kKerr) {
        for (const AnsatzLayer &l : layers_) {
            require(l.detune == 0.0, ErrorCode::kInvalidArgument, "Kerr layers have no detuning parameter");
        }
    }
}

AnsatzParams AnsatzParams::zeros(Nonlinearity kind, std::size_t depth) {
    return AnsatzParams(kind, std::vector<AnsatzLayer>(depth));
}

AnsatzParams AnsatzParams::from_flat(Nonlinearity kind, std::span<const double> values) {
    const std::size_t per = params_per_layer(kind);
    require(!values.empty() && values.size() % per == 0, ErrorCode::kInvalidArgument,
            "flat parameter vector length must be a positive multiple of " + std::to_string(per));
    std::vector<AnsatzLayer> layers;
    for (std::size_t j = 0; j < values.size(); j += per) {
        if (kind == Nonlinearity::kJC) {
            layers.push_back({values[j], values[j + 1], values[j + 2]});
        } else {
            layers.push_back({values[j], 0.0, values[j + 1]});
        }
    }
    return AnsatzParams(kind, std::move(layers));
}

std::vector<double> AnsatzParams::flat() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const AnsatzLayer &l : layers_) {
        out.push_back(l.tunnel);
        if (kind_ == Nonlinearity::kJC) {
            out.push_back(l.detune);
        }
        out.push_back(l.nonlinear);
    }
    return out;
}

AnsatzParams AnsatzParams::with_zero_layer() const {
    auto layers = layers_;
    layers.emplace_back();
    return AnsatzParams(kind_, std::move(layers));
}

std::vector<LocalGate> build_circuit(const AnsatzParams &params, const SubsystemLayout &layout, CircuitRole) {
    const bool jc = params.kind() == Nonlinearity::kJC;
    require(layout.has_emitters() == jc && layout.mode_indices().size() == 2, ErrorCode::kLayoutMismatch,
            "layout does not match the " + to_string(params.kind()) + " ansatz");
    std::vector<LocalGate> gates;
    gates.reserve(params.depth() * (jc ? 5 : 3));
    for (const AnsatzLayer &layer : params.layers()) {
        gates.push_back(tunnel_gate(layout, layer.tunnel));
        if (jc) {
            gates.push_back(detune_gate(layout, layer.detune, 0));
            gates.push_back(detune_gate(layout, layer.detune, 1));
            gates.push_back(jc_gate(layout, layer.nonlinear, 0));
            gates.push_back(jc_gate(layout, layer.nonlinear, 1));
        } else {
            gates.push_back(kerr_gate(layout, layer.nonlinear, 0));
            gates.push_back(kerr_gate(layout, layer.nonlinear, 1));
        }
    }
    return gates;
}

std::vector<LocalGate> inverse_circuit(const std::vector<LocalGate> &gates) {
    std::vector<LocalGate> out;
    out.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        out.push_back(it->adjoint());
    }
    return out;
}

CompositeState run_circuit(const AnsatzParams &params, const CompositeState &state) {
    return apply_all(build_circuit(params, state.layout()), state);
}

InteractionBudget interaction_budget(const AnsatzParams &params) {
    InteractionBudget budget;
    for (const AnsatzLayer &l : params.layers()) {
        budget.total += std::abs(l.nonlinear);
    }
    return budget;
}

}  // namespace fockmetro
