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

#include "fockmetro/encoding.hpp"

#include <cmath>

#include "fockmetro/error.hpp"

namespace fockmetro {

namespace {

std::vector<std::size_t> both_modes(const SubsystemLayout &layout) {
    auto modes = layout.mode_indices();
    require(modes.size() == 2, ErrorCode::kLayoutMismatch, "phase encoding needs exactly two modes");
    return modes;
}

// (n2 - n1) / 2 over the local (mode1, mode2) space.
Vector half_number_difference(std::size_t cutoff) {
    Vector g(static_cast<Eigen::Index>(cutoff * cutoff));
    for (std::size_t n1 = 0; n1 < cutoff; ++n1) {
        for (std::size_t n2 = 0; n2 < cutoff; ++n2) {
            g[static_cast<Eigen::Index>(n1 * cutoff + n2)] = 0.5 * (static_cast<double>(n2) - static_cast<double>(n1));
        }
    }
    return g;
}

}  // namespace

LocalGate beam_splitter_gate(const SubsystemLayout &layout) {
    const auto modes = both_modes(layout);
    return LocalGate::spectral(GateKind::kBeamSplitter, layout, modes, tunnel_generator(layout.cutoff()),
                               std::numbers::pi / 4.0);
}

LocalGate phase_diff_gate(const SubsystemLayout &layout, double phi) {
    const auto modes = both_modes(layout);
    if (phi == 0.0) {
        return LocalGate::identity(GateKind::kPhaseDiff, layout, modes);
    }
    const Vector g = half_number_difference(layout.cutoff());
    Vector phases(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        phases[i] = std::polar(1.0, -phi * g[i].real());
    }
    return LocalGate::diagonal(GateKind::kPhaseDiff, layout, modes, std::move(phases));
}

LocalGate phase_generator(const SubsystemLayout &layout) {
    const auto modes = both_modes(layout);
    return LocalGate::diagonal(GateKind::kDiagonalOperator, layout, modes, half_number_difference(layout.cutoff()),
                               false);
}

CompositeState encode(const CompositeState &state, double phi) {
    const SubsystemLayout &layout = state.layout();
    const LocalGate bs = beam_splitter_gate(layout);
    Vector amps = state.amplitudes();
    bs.apply_in_place(layout, amps);
    phase_diff_gate(layout, phi).apply_in_place(layout, amps);
    bs.apply_in_place(layout, amps);
    return CompositeState(layout, std::move(amps));
}

CompositeState encode_derivative(const CompositeState &state, double phi) {
    const SubsystemLayout &layout = state.layout();
    const LocalGate bs = beam_splitter_gate(layout);
    Vector amps = state.amplitudes();
    bs.apply_in_place(layout, amps);
    phase_diff_gate(layout, phi).apply_in_place(layout, amps);
    phase_generator(layout).apply_in_place(layout, amps);
    amps *= Complex(0.0, -1.0);
    bs.apply_in_place(layout, amps);
    return CompositeState(layout, std::move(amps));
}

}  // namespace fockmetro
