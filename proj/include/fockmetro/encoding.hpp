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
 * Mach-Zehnder phase encoding: beam splitter, phase difference, beam splitter.
 * Emitter factors are spectators.
 */

#pragma once

#include <numbers>

#include "fockmetro/dynamics.hpp"

namespace fockmetro {

/// Phase at which the estimation is simulated unless overridden.
inline constexpr double kDefaultPhi = std::numbers::pi / 3.0;

/// exp(-i pi/4 (a2^dagger a1 + a1^dagger a2)).
LocalGate beam_splitter_gate(const SubsystemLayout &layout);
/// exp(-i phi/2 (n2 - n1)).
LocalGate phase_diff_gate(const SubsystemLayout &layout, double phi);
/// Multiplication by (n2 - n1) / 2; not unitary.
LocalGate phase_generator(const SubsystemLayout &layout);

/// U_BS U_PD(phi) U_BS |state>.
CompositeState encode(const CompositeState &state, double phi);
/// Exact phi-derivative of encode(state, phi); unnormalized.
CompositeState encode_derivative(const CompositeState &state, double phi);

}  // namespace fockmetro
