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

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fockmetro/dynamics.hpp"
#include "fockmetro/error.hpp"

using namespace fockmetro;

namespace {

constexpr double kPi = std::numbers::pi;

CompositeState basis_state(const SubsystemLayout &layout, const std::vector<std::size_t> &levels) {
    std::vector<Vector> factors;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        factors.push_back(fock_state(levels[k], layout.dim(k)));
    }
    return product_state(layout, factors);
}

Complex amplitude(const CompositeState &bra, const CompositeState &ket) { return inner_product(bra, ket); }

}  // namespace

TEST_CASE("excitation exchange rotates |e,n> into |g,n+1> at rate sqrt(n+1)") {
    const std::size_t c = 8;
    const SubsystemLayout layout = SubsystemLayout::jc(c);
    for (std::size_t n : {0u, 1u, 3u, 6u}) {
        for (double g : {0.2, 0.9, 2.3}) {
            const CompositeState start = basis_state(layout, {1, 0, n, 0});
            const CompositeState out = apply(jc_gate(layout, g, 0), start);
            const double rate = std::sqrt(static_cast<double>(n + 1));
            CHECK(std::abs(amplitude(basis_state(layout, {0, 0, n + 1, 0}), out)) ==
                  doctest::Approx(std::abs(std::sin(g * rate))).epsilon(1e-10));
            CHECK(std::abs(amplitude(start, out)) == doctest::Approx(std::abs(std::cos(g * rate))).epsilon(1e-10));
        }
    }
}

TEST_CASE("the second pair acts only on the second emitter and mode") {
    const SubsystemLayout layout = SubsystemLayout::jc(5);
    const CompositeState start = basis_state(layout, {1, 1, 0, 0});
    const CompositeState out = apply(jc_gate(layout, kPi / 2.0, 1), start);
    CHECK(std::abs(amplitude(basis_state(layout, {1, 0, 0, 1}), out)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exchange dynamics conserve the excitation number") {
    const CompositeState psi0 = initial_state(Nonlinearity::kJC, 4.0, default_cutoff(4.0));
    const double before = mean_photon_number(psi0) + mean_excitations(psi0);
    for (double t : {0.3, 1.7, 5.0}) {
        const CompositeState psi = evolve_continuous(Nonlinearity::kJC, t, psi0);
        CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
        // Truncation only removes states above the cutoff; the test state keeps them negligible.
        CHECK(mean_photon_number(psi) + mean_excitations(psi) == doctest::Approx(before).epsilon(1e-6));
    }
}

TEST_CASE("Kerr phases are quadratic in the photon number") {
    const std::size_t c = 6;
    const SubsystemLayout layout = SubsystemLayout::kerr(c);
    const double k = 0.37;
    const Matrix u = kerr_gate(layout, k, 1).matrix();
    REQUIRE(u.rows() == static_cast<Eigen::Index>(c));
    for (std::size_t n = 0; n < c; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        CHECK(std::abs(u(i, i) - std::polar(1.0, -k * static_cast<double>(n * n))) < 1e-14);
    }
}

TEST_CASE("Kerr evolution revives the coherent state at 2 pi and flips it at pi") {
    const std::size_t c = 20;
    const CompositeState psi0 = initial_state(Nonlinearity::kKerr, 4.0, c);
    const CompositeState full = evolve_continuous(Nonlinearity::kKerr, 2.0 * kPi, psi0);
    CHECK(std::abs(inner_product(psi0, full)) == doctest::Approx(1.0).epsilon(1e-12));

    // e^{-i pi n^2} = (-1)^n, so each mode maps to its negated coherent state.
    const CompositeState half = evolve_continuous(Nonlinearity::kKerr, kPi, psi0);
    const auto minus = coherent_state(-std::sqrt(2.0), c).amplitudes;
    const CompositeState flipped = product_state(psi0.layout(), std::vector<Vector>{minus, minus});
    CHECK(std::abs(inner_product(flipped, half)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tunneling moves a photon between modes with cos/sin amplitudes") {
    const SubsystemLayout layout = SubsystemLayout::kerr(4);
    for (double j : {0.1, 0.8, 2.0}) {
        const CompositeState out = apply(tunnel_gate(layout, j), basis_state(layout, {1, 0}));
        CHECK(std::abs(amplitude(basis_state(layout, {1, 0}), out)) == doctest::Approx(std::abs(std::cos(j))).epsilon(1e-12));
        CHECK(std::abs(amplitude(basis_state(layout, {0, 1}), out)) == doctest::Approx(std::abs(std::sin(j))).epsilon(1e-12));
    }
}

TEST_CASE("detuning phases the excited emitter only") {
    const SubsystemLayout layout = SubsystemLayout::jc(3);
    const Matrix u = detune_gate(layout, 0.4, 0).matrix();
    REQUIRE(u.rows() == 2);
    CHECK(std::abs(u(0, 0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(u(1, 1) - std::polar(1.0, -0.4)) < 1e-15);
    CHECK(std::abs(u(0, 1)) < 1e-15);
}

TEST_CASE("zero parameters give identity gates") {
    const SubsystemLayout jc = SubsystemLayout::jc(10);
    const SubsystemLayout kerr = SubsystemLayout::kerr(8);
    CHECK(jc_gate(jc, 0.0, 0).is_identity());
    CHECK(detune_gate(jc, 0.0, 1).is_identity());
    CHECK(kerr_gate(kerr, 0.0, 0).is_identity());
    CHECK(tunnel_gate(kerr, 0.0).is_identity());
    const CompositeState psi = initial_state(Nonlinearity::kJC, 2.0, 10);
    CHECK((apply(tunnel_gate(jc, 0.0), psi).amplitudes() - psi.amplitudes()).norm() == 0.0);
}

TEST_CASE("gate adjoints invert the gate") {
    const SubsystemLayout layout = SubsystemLayout::jc(12);
    const CompositeState psi = initial_state(Nonlinearity::kJC, 3.0, 12);
    for (const LocalGate &g : {jc_gate(layout, 0.7, 1), tunnel_gate(layout, 1.3), detune_gate(layout, 2.1, 0)}) {
        const CompositeState back = apply(g.adjoint(), apply(g, psi));
        CHECK((back.amplitudes() - psi.amplitudes()).norm() < 1e-12);
        const Matrix u = g.matrix();
        CHECK((u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("spectral generators reproduce their dense matrix") {
    const std::size_t c = 5;
    const auto jc = jc_generator(c);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2 * c, 2 * c);
    for (std::size_t n = 0; n + 1 < c; ++n) {
        // sigma^dagger a connects |g, n+1> to |e, n>.
        const auto e = static_cast<Eigen::Index>(c + n);
        const auto g = static_cast<Eigen::Index>(n + 1);
        expected(e, g) = expected(g, e) = std::sqrt(static_cast<double>(n + 1));
    }
    CHECK((jc->dense() - expected).cwiseAbs().maxCoeff() < 1e-12);

    const auto tunnel = tunnel_generator(c);
    const Eigen::MatrixXd t = tunnel->dense();
    CHECK((t - t.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    // a2^dagger a1 |1,0> = |0,1>.
    CHECK(t(static_cast<Eigen::Index>(1), static_cast<Eigen::Index>(c)) == doctest::Approx(1.0));
    CHECK(jc_generator(c).get() == jc.get());
}

TEST_CASE("gates on a mismatched layout are rejected") {
    const LocalGate g = tunnel_gate(SubsystemLayout::kerr(9), 0.3);
    const CompositeState psi = initial_state(Nonlinearity::kKerr, 1.0, 10);
    bool thrown = false;
    try {
        apply(g, psi);
    } catch (const Error &e) {
        thrown = e.code() == ErrorCode::kLayoutMismatch;
    }
    CHECK(thrown);
}

TEST_CASE("gate reference values") {
    const SubsystemLayout jc = SubsystemLayout::jc(4);
    const CompositeState out = apply(jc_gate(jc, kPi / 2.0, 0), basis_state(jc, {1, 0, 0, 0}));
    CHECK(std::abs(inner_product(basis_state(jc, {0, 0, 1, 0}), out)) == doctest::Approx(1.0).epsilon(1e-10));

    const Matrix full_turn = detune_gate(jc, 2.0 * kPi, 1).matrix();
    CHECK((full_turn - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix kerr_turn = kerr_gate(SubsystemLayout::kerr(10), 2.0 * kPi, 0).matrix();
    CHECK((kerr_turn - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-10);

    const CompositeState psi0 = initial_state(Nonlinearity::kJC, 2.0, 10);
    CHECK(evolve_continuous(Nonlinearity::kJC, 0.0, psi0).amplitudes() == psi0.amplitudes());
}

TEST_CASE("gates on disjoint factors commute") {
    const SubsystemLayout layout = SubsystemLayout::kerr(13);
    const CompositeState psi = evolve_continuous(Nonlinearity::kKerr, 0.3, initial_state(Nonlinearity::kKerr, 4.0, 13));
    const LocalGate a = kerr_gate(layout, 0.7, 0);
    const LocalGate b = kerr_gate(layout, -1.1, 1);
    CHECK((apply(b, apply(a, psi)).amplitudes() - apply(a, apply(b, psi)).amplitudes()).norm() < 1e-12);
}
