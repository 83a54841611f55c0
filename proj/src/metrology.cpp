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

#include "fockmetro/metrology.hpp"

#include <cmath>
#include <numbers>

#include "fockmetro/error.hpp"

namespace fockmetro {

std::string to_string(MeasurementKind kind) { return kind == MeasurementKind::kCounting ? "counting" : "homodyne"; }

MeasurementKind parse_measurement(const std::string &text) {
    if (text == "counting") {
        return MeasurementKind::kCounting;
    }
    if (text == "homodyne") {
        return MeasurementKind::kHomodyne;
    }
    fail(ErrorCode::kInvalidArgument, "unknown measurement '" + text + "' (expected counting or homodyne)");
}

QuadratureGrid QuadratureGrid::defaults(std::size_t cutoff) {
    return {std::sqrt(2.0 * static_cast<double>(cutoff)) + 4.0, 801};
}

std::vector<double> QuadratureGrid::axis() const {
    std::vector<double> xs(points);
    const double step = 2.0 * x_max / static_cast<double>(points - 1);
    const auto half = static_cast<std::ptrdiff_t>(points / 2);
    for (std::size_t i = 0; i < points; ++i) {
        xs[i] = step * static_cast<double>(static_cast<std::ptrdiff_t>(i) - half);
    }
    return xs;
}

std::vector<double> QuadratureGrid::weights() const {
    const double step = 2.0 * x_max / static_cast<double>(points - 1);
    std::vector<double> w(points, step);
    w.front() = w.back() = 0.5 * step;
    return w;
}

void QuadratureGrid::validate(std::size_t cutoff) const {
    require(points >= 201 && points % 2 == 1, ErrorCode::kInvalidArgument,
            "quadrature grid needs an odd number of points, at least 201");
    require(x_max >= std::sqrt(2.0 * static_cast<double>(cutoff)) + 3.0, ErrorCode::kInvalidArgument,
            "quadrature grid half-width must be at least sqrt(2 cutoff) + 3");
}

MeasurementModel MeasurementModel::counting(bool include_emitters) {
    MeasurementModel m;
    m.kind = MeasurementKind::kCounting;
    m.include_emitters = include_emitters;
    return m;
}

MeasurementModel MeasurementModel::homodyne(double theta, std::size_t cutoff, bool include_emitters) {
    MeasurementModel m;
    m.kind = MeasurementKind::kHomodyne;
    m.include_emitters = include_emitters;
    m.theta = theta;
    m.grid = QuadratureGrid::defaults(cutoff);
    return m;
}

std::string to_string(QuadratureFrame frame) {
    return frame == QuadratureFrame::kReferenceArm ? "reference-arm" : "encoded";
}

QuadratureFrame parse_quadrature_frame(const std::string &text) {
    if (text == "reference-arm") {
        return QuadratureFrame::kReferenceArm;
    }
    if (text == "encoded") {
        return QuadratureFrame::kEncoded;
    }
    fail(ErrorCode::kInvalidArgument, "unknown quadrature frame '" + text + "' (expected reference-arm or encoded)");
}

double MeasurementModel::measured_angle(double phi) const {
    return frame == QuadratureFrame::kReferenceArm ? theta - 0.5 * phi : theta;
}

Bounds bounds(double n_mean) {
    require(n_mean > 0.0 && std::isfinite(n_mean), ErrorCode::kInvalidArgument, "mean photon number must be positive");
    return {n_mean, 1.0 / n_mean, 2.0 / (n_mean * (n_mean + 2.0)), 1.0 / (n_mean * n_mean)};
}

namespace {

void require_unit_norm(const CompositeState &state, const char *what) {
    require(std::abs(state.norm() - 1.0) <= 1e-9, ErrorCode::kInvalidArgument, std::string(what) + " is not normalized");
}

// Number of photons in each mode for every flat index.
struct ModeDigits {
    std::vector<std::size_t> n1;
    std::vector<std::size_t> n2;
};

ModeDigits mode_digits(const SubsystemLayout &layout) {
    const auto modes = layout.mode_indices();
    require(modes.size() == 2, ErrorCode::kLayoutMismatch, "expected exactly two modes");
    ModeDigits out;
    out.n1.resize(layout.total_dim());
    out.n2.resize(layout.total_dim());
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        out.n1[i] = (i / layout.stride(modes[0])) % layout.dim(modes[0]);
        out.n2[i] = (i / layout.stride(modes[1])) % layout.dim(modes[1]);
    }
    return out;
}

// The homodyne and marginal-counting paths rely on (mode1, mode2) being the
// two fastest factors, which holds for both registers.
std::size_t emitter_blocks(const SubsystemLayout &layout) {
    const auto modes = layout.mode_indices();
    require(modes.size() == 2 && modes[1] == layout.size() - 1 && modes[0] == layout.size() - 2,
            ErrorCode::kLayoutMismatch, "modes must be the two innermost factors");
    const std::size_t c = layout.cutoff();
    return layout.total_dim() / (c * c);
}

}  // namespace

FisherResult qfi_fidelity(const CompositeState &probe, double phi, double delta) {
    require(delta > 0.0, ErrorCode::kInvalidArgument, "delta must be positive");
    require_unit_norm(probe, "probe");
    const CompositeState a = encode(probe, phi);
    const CompositeState b = encode(probe, phi + delta);
    const double fidelity = std::abs(inner_product(a, b));
    double value = 8.0 * (1.0 - fidelity) / (delta * delta);
    if (value < 0.0) {
        require(value >= -1e-9, ErrorCode::kNumerical, "fidelity exceeded one");
        value = 0.0;
    }
    return {value, FisherResult::Kind::kQuantum, delta, phi};
}

FisherResult qfi_variance_oracle(const CompositeState &probe, double phi) {
    require_unit_norm(probe, "probe");
    const CompositeState after_bs = apply(beam_splitter_gate(probe.layout()), probe);
    const ModeDigits digits = mode_digits(probe.layout());
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < digits.n1.size(); ++i) {
        const double p = std::norm(after_bs.amplitudes()[static_cast<Eigen::Index>(i)]);
        const double g = 0.5 * (static_cast<double>(digits.n2[i]) - static_cast<double>(digits.n1[i]));
        mean += p * g;
        second += p * g * g;
    }
    return {std::max(0.0, 4.0 * (second - mean * mean)), FisherResult::Kind::kQuantum, 0.0, phi};
}

PhaseFamily encoded_family(const CompositeState &probe, double phi) {
    return {encode(probe, phi), encode_derivative(probe, phi), phi};
}

PhaseFamily transform(const PhaseFamily &family, const std::vector<LocalGate> &gates) {
    return {apply_all(gates, family.state), apply_all(gates, family.derivative), family.phi};
}

double CountingTable::total() const {
    double s = 0.0;
    for (double p : probabilities) {
        s += p;
    }
    return s;
}

CountingTable counting_probabilities(const CompositeState &state, bool include_emitters) {
    const SubsystemLayout &layout = state.layout();
    const Vector &amps = state.amplitudes();
    CountingTable table;
    if (include_emitters || !layout.has_emitters()) {
        for (const Factor &f : layout.factors()) {
            table.shape.push_back(f.dim);
        }
        table.probabilities.resize(layout.total_dim());
        for (std::size_t i = 0; i < layout.total_dim(); ++i) {
            table.probabilities[i] = std::norm(amps[static_cast<Eigen::Index>(i)]);
        }
        return table;
    }
    const std::size_t blocks = emitter_blocks(layout);
    const std::size_t c = layout.cutoff();
    table.shape = {c, c};
    table.probabilities.assign(c * c, 0.0);
    for (std::size_t z = 0; z < blocks; ++z) {
        for (std::size_t k = 0; k < c * c; ++k) {
            table.probabilities[k] += std::norm(amps[static_cast<Eigen::Index>(z * c * c + k)]);
        }
    }
    return table;
}

Eigen::MatrixXd oscillator_wavefunctions(std::size_t cutoff, const std::vector<double> &axis) {
    const auto c = static_cast<Eigen::Index>(cutoff);
    const auto p = static_cast<Eigen::Index>(axis.size());
    Eigen::MatrixXd psi(c, p);
    const double norm0 = std::pow(std::numbers::pi, -0.25);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double x = axis[static_cast<std::size_t>(j)];
        psi(0, j) = norm0 * std::exp(-0.5 * x * x);
        if (c > 1) {
            psi(1, j) = std::sqrt(2.0) * x * psi(0, j);
        }
        for (Eigen::Index n = 1; n + 1 < c; ++n) {
            const double nd = static_cast<double>(n);
            psi(n + 1, j) = std::sqrt(2.0 / (nd + 1.0)) * x * psi(n, j) - std::sqrt(nd / (nd + 1.0)) * psi(n - 1, j);
        }
    }
    return psi;
}

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-thread buffers for quadrature transforms. Reusing them keeps repeated
// evaluations inside an optimizer off the allocator.
struct QuadratureWorkspace {
    std::size_t cutoff = 0;
    std::vector<double> axis;
    Eigen::MatrixXd wavefunctions;
    Eigen::MatrixXd wavefunctions_t;
    Eigen::MatrixXd re_fock;
    Eigen::MatrixXd im_fock;
    Eigen::MatrixXd half;

    void prepare(std::size_t c, const std::vector<double> &grid_axis) {
        if (c != cutoff || grid_axis != axis) {
            cutoff = c;
            axis = grid_axis;
            wavefunctions = oscillator_wavefunctions(c, axis);
            wavefunctions_t = wavefunctions.transpose();
        }
    }
};

QuadratureWorkspace &workspace() {
    thread_local QuadratureWorkspace ws;
    return ws;
}

// Amplitudes <x1, x2|_theta psi> for one emitter configuration; rows are mode-1 grid points.
void quadrature_amplitudes(const Vector &amps, std::size_t offset, std::size_t c, double theta,
                           QuadratureWorkspace &ws, Eigen::MatrixXd &re, Eigen::MatrixXd &im) {
    const auto cc = static_cast<Eigen::Index>(c);
    Eigen::Map<const RowMajorMatrix> block(amps.data() + offset, cc, cc);
    ws.re_fock.resize(cc, cc);
    ws.im_fock.resize(cc, cc);
    for (Eigen::Index n1 = 0; n1 < cc; ++n1) {
        for (Eigen::Index n2 = 0; n2 < cc; ++n2) {
            const Complex v = block(n1, n2) * std::polar(1.0, theta * static_cast<double>(n1 + n2));
            ws.re_fock(n1, n2) = v.real();
            ws.im_fock(n1, n2) = v.imag();
        }
    }
    ws.half.noalias() = ws.re_fock * ws.wavefunctions;
    re.noalias() = ws.wavefunctions_t * ws.half;
    ws.half.noalias() = ws.im_fock * ws.wavefunctions;
    im.noalias() = ws.wavefunctions_t * ws.half;
}

}  // namespace

HomodyneTable homodyne_probabilities(const CompositeState &state, double theta, const QuadratureGrid &grid,
                                     bool include_emitters) {
    const SubsystemLayout &layout = state.layout();
    const std::size_t c = layout.cutoff();
    grid.validate(c);
    const std::size_t blocks = emitter_blocks(layout);
    HomodyneTable table;
    table.axis = grid.axis();
    table.weights = grid.weights();
    const std::size_t p = grid.points;
    table.emitter_outcomes = include_emitters ? blocks : 1;
    table.density.assign(table.emitter_outcomes * p * p, 0.0);
    QuadratureWorkspace &ws = workspace();
    ws.prepare(c, table.axis);
    Eigen::MatrixXd re;
    Eigen::MatrixXd im;
    for (std::size_t z = 0; z < blocks; ++z) {
        quadrature_amplitudes(state.amplitudes(), z * c * c, c, theta, ws, re, im);
        const std::size_t out = include_emitters ? z : 0;
        for (std::size_t i1 = 0; i1 < p; ++i1) {
            for (std::size_t i2 = 0; i2 < p; ++i2) {
                const auto r = static_cast<Eigen::Index>(i1);
                const auto s = static_cast<Eigen::Index>(i2);
                table.density[(out * p + i1) * p + i2] += re(r, s) * re(r, s) + im(r, s) * im(r, s);
            }
        }
    }
    double integral = 0.0;
    for (std::size_t z = 0; z < table.emitter_outcomes; ++z) {
        for (std::size_t i1 = 0; i1 < p; ++i1) {
            for (std::size_t i2 = 0; i2 < p; ++i2) {
                integral += table.weights[i1] * table.weights[i2] * table.density[(z * p + i1) * p + i2];
            }
        }
    }
    table.integral = integral;
    const double norm2 = state.amplitudes().squaredNorm();
    require(norm2 - integral <= 1e-4 * norm2, ErrorCode::kInvalidArgument,
            "quadrature grid too small: normalization deficit " + std::to_string(norm2 - integral));
    return table;
}

namespace {

FisherResult counting_cfi(const PhaseFamily &family, const MeasurementModel &model) {
    const SubsystemLayout &layout = family.state.layout();
    const Vector &a = family.state.amplitudes();
    const Vector &d = family.derivative.amplitudes();
    std::vector<double> prob;
    std::vector<double> dprob;
    if (model.include_emitters || !layout.has_emitters()) {
        prob.resize(layout.total_dim());
        dprob.resize(layout.total_dim());
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            prob[static_cast<std::size_t>(i)] = std::norm(a[i]);
            dprob[static_cast<std::size_t>(i)] = 2.0 * (std::conj(a[i]) * d[i]).real();
        }
    } else {
        const std::size_t blocks = emitter_blocks(layout);
        const std::size_t cc = layout.cutoff() * layout.cutoff();
        prob.assign(cc, 0.0);
        dprob.assign(cc, 0.0);
        for (std::size_t z = 0; z < blocks; ++z) {
            for (std::size_t k = 0; k < cc; ++k) {
                const auto i = static_cast<Eigen::Index>(z * cc + k);
                prob[k] += std::norm(a[i]);
                dprob[k] += 2.0 * (std::conj(a[i]) * d[i]).real();
            }
        }
    }
    double total = 0.0;
    double fisher = 0.0;
    for (std::size_t k = 0; k < prob.size(); ++k) {
        total += prob[k];
        if (prob[k] >= kProbabilityFloor) {
            fisher += dprob[k] * dprob[k] / prob[k];
        }
    }
    require(std::abs(total - 1.0) <= 1e-6, ErrorCode::kInvalidArgument, "outcome probabilities are not normalized");
    return {fisher, FisherResult::Kind::kClassical, 0.0, family.phi};
}

FisherResult homodyne_cfi(const PhaseFamily &family, const MeasurementModel &model) {
    const SubsystemLayout &layout = family.state.layout();
    const std::size_t c = layout.cutoff();
    model.grid.validate(c);
    const std::size_t blocks = emitter_blocks(layout);
    const std::vector<double> axis = model.grid.axis();
    const std::vector<double> w = model.grid.weights();
    const std::size_t p = model.grid.points;
    QuadratureWorkspace &ws = workspace();
    ws.prepare(c, axis);
    thread_local Eigen::MatrixXd a_re, a_im, d_re, d_im, prob, dprob;
    const double angle = model.measured_angle(family.phi);
    const std::size_t outcomes = model.include_emitters ? blocks : 1;
    prob.setZero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    dprob.setZero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    double fisher = 0.0;
    double total = 0.0;
    const auto accumulate = [&]() {
        for (std::size_t i1 = 0; i1 < p; ++i1) {
            for (std::size_t i2 = 0; i2 < p; ++i2) {
                const auto r = static_cast<Eigen::Index>(i1);
                const auto s = static_cast<Eigen::Index>(i2);
                const double weight = w[i1] * w[i2];
                total += weight * prob(r, s);
                if (prob(r, s) >= kProbabilityFloor) {
                    fisher += weight * dprob(r, s) * dprob(r, s) / prob(r, s);
                }
            }
        }
    };
    for (std::size_t z = 0; z < blocks; ++z) {
        quadrature_amplitudes(family.state.amplitudes(), z * c * c, c, angle, ws, a_re, a_im);
        quadrature_amplitudes(family.derivative.amplitudes(), z * c * c, c, angle, ws, d_re, d_im);
        prob.array() += a_re.array().square() + a_im.array().square();
        dprob.array() += 2.0 * (a_re.array() * d_re.array() + a_im.array() * d_im.array());
        if (outcomes > 1) {
            accumulate();
            prob.setZero();
            dprob.setZero();
        }
    }
    if (outcomes == 1) {
        accumulate();
    }
    require(1.0 - total <= 1e-4, ErrorCode::kInvalidArgument,
            "quadrature grid too small: normalization deficit " + std::to_string(1.0 - total));
    return {fisher, FisherResult::Kind::kClassical, 0.0, family.phi};
}

}  // namespace

FisherResult cfi(const PhaseFamily &family, const MeasurementModel &model) {
    require_unit_norm(family.state, "measured state");
    require(family.state.layout() == family.derivative.layout(), ErrorCode::kLayoutMismatch,
            "state and derivative layouts differ");
    if (model.kind == MeasurementKind::kCounting) {
        return counting_cfi(family, model);
    }
    return homodyne_cfi(family, model);
}

}  // namespace fockmetro
