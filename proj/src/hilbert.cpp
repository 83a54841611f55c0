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

#include "fockmetro/hilbert.hpp"

#include <cmath>

#include "fockmetro/error.hpp"

namespace fockmetro {

std::string to_string(Nonlinearity kind) { return kind == Nonlinearity::kJC ? "jc" : "kerr"; }

Nonlinearity parse_nonlinearity(const std::string &text) {
    if (text == "jc") {
        return Nonlinearity::kJC;
    }
    if (text == "kerr") {
        return Nonlinearity::kKerr;
    }
    fail(ErrorCode::kInvalidArgument, "unknown nonlinearity '" + text + "' (expected jc or kerr)");
}

SubsystemLayout::SubsystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
    require(!factors_.empty(), ErrorCode::kInvalidArgument, "layout needs at least one factor");
    for (const Factor &f : factors_) {
        if (f.kind == FactorKind::kQubit) {
            require(f.dim == 2, ErrorCode::kInvalidArgument, "qubit factors must have dimension 2");
        } else {
            require(f.dim >= 2, ErrorCode::kInvalidArgument, "mode cutoff must be at least 2");
        }
        total_dim_ *= f.dim;
    }
    strides_.assign(factors_.size(), 1);
    for (std::size_t k = factors_.size() - 1; k > 0; --k) {
        strides_[k - 1] = strides_[k] * factors_[k].dim;
    }
}

SubsystemLayout SubsystemLayout::jc(std::size_t cutoff) {
    return SubsystemLayout({{FactorKind::kQubit, 2},
                            {FactorKind::kQubit, 2},
                            {FactorKind::kMode, cutoff},
                            {FactorKind::kMode, cutoff}});
}

SubsystemLayout SubsystemLayout::kerr(std::size_t cutoff) {
    return SubsystemLayout({{FactorKind::kMode, cutoff}, {FactorKind::kMode, cutoff}});
}

SubsystemLayout SubsystemLayout::for_kind(Nonlinearity kind, std::size_t cutoff) {
    return kind == Nonlinearity::kJC ? jc(cutoff) : kerr(cutoff);
}

std::vector<std::size_t> SubsystemLayout::mode_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (factors_[k].kind == FactorKind::kMode) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<std::size_t> SubsystemLayout::emitter_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (factors_[k].kind == FactorKind::kQubit) {
            out.push_back(k);
        }
    }
    return out;
}

std::size_t SubsystemLayout::cutoff() const {
    const auto modes = mode_indices();
    require(!modes.empty(), ErrorCode::kLayoutMismatch, "layout has no mode factors");
    for (std::size_t m : modes) {
        require(factors_[m].dim == factors_[modes[0]].dim, ErrorCode::kLayoutMismatch,
                "mode factors have different cutoffs");
    }
    return factors_[modes[0]].dim;
}

CompositeState::CompositeState(SubsystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    require(static_cast<std::size_t>(amplitudes_.size()) == layout_.total_dim(), ErrorCode::kLayoutMismatch,
            "amplitude vector length does not match layout dimension");
}

CoherentAmplitudes coherent_state(Complex alpha, std::size_t cutoff) {
    require(cutoff >= 2, ErrorCode::kInvalidArgument, "cutoff must be at least 2");
    CoherentAmplitudes out;
    out.amplitudes.resize(static_cast<Eigen::Index>(cutoff));
    Complex c = std::exp(-0.5 * std::norm(alpha));
    double kept = 0.0;
    for (std::size_t n = 0; n < cutoff; ++n) {
        if (n > 0) {
            c *= alpha / std::sqrt(static_cast<double>(n));
        }
        out.amplitudes[static_cast<Eigen::Index>(n)] = c;
        kept += std::norm(c);
    }
    out.tail = std::max(0.0, 1.0 - kept);
    if (out.tail > kMaxCoherentTail) {
        fail(ErrorCode::kTruncation, "cutoff " + std::to_string(cutoff) + " too small for |alpha|^2 = " +
                                         std::to_string(std::norm(alpha)) + " (tail " + std::to_string(out.tail) +
                                         ")");
    }
    out.amplitudes /= out.amplitudes.norm();
    return out;
}

double poisson_tail(double mean, std::size_t cutoff) {
    if (mean <= 0.0) {
        return 0.0;
    }
    // Sum upward from the cutoff in log space; terms decay geometrically past the mean.
    double total = 0.0;
    for (std::size_t n = cutoff; n < cutoff + 2000; ++n) {
        const double log_term = -mean + static_cast<double>(n) * std::log(mean) - std::lgamma(static_cast<double>(n) + 1);
        const double term = std::exp(log_term);
        total += term;
        if (static_cast<double>(n) > mean && term < 1e-18 * std::max(total, 1e-300)) {
            break;
        }
    }
    return total;
}

std::size_t default_cutoff(double total_mean_photons) {
    require(total_mean_photons >= 0.0 && std::isfinite(total_mean_photons), ErrorCode::kInvalidArgument,
            "mean photon number must be finite and non-negative");
    auto cutoff = static_cast<std::size_t>(std::ceil(2.0 * total_mean_photons));
    cutoff = std::max<std::size_t>(cutoff, 2);
    // Leave a small margin below the guard so renormalization round-off never trips it.
    while (poisson_tail(0.5 * total_mean_photons, cutoff) > 0.5 * kMaxCoherentTail) {
        ++cutoff;
    }
    return cutoff;
}

Vector fock_state(std::size_t n, std::size_t dim) {
    require(n < dim, ErrorCode::kInvalidArgument, "Fock index beyond cutoff");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(n)] = 1.0;
    return v;
}

Vector emitter_ground() { return fock_state(0, 2); }
Vector emitter_excited() { return fock_state(1, 2); }

CompositeState product_state(const SubsystemLayout &layout, std::span<const Vector> factor_vectors) {
    require(factor_vectors.size() == layout.size(), ErrorCode::kLayoutMismatch,
            "need exactly one vector per layout factor");
    Vector amps = Vector::Ones(1);
    for (std::size_t k = 0; k < layout.size(); ++k) {
        const Vector &v = factor_vectors[k];
        require(static_cast<std::size_t>(v.size()) == layout.dim(k), ErrorCode::kLayoutMismatch,
                "factor vector " + std::to_string(k) + " has the wrong dimension");
        require(std::abs(v.norm() - 1.0) < 1e-9, ErrorCode::kInvalidArgument,
                "factor vector " + std::to_string(k) + " is not normalized");
        Vector next(amps.size() * v.size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            next.segment(i * v.size(), v.size()) = amps[i] * v;
        }
        amps = std::move(next);
    }
    return CompositeState(layout, std::move(amps));
}

CompositeState initial_state(Nonlinearity kind, double total_mean_photons, std::size_t cutoff) {
    const SubsystemLayout layout = SubsystemLayout::for_kind(kind, cutoff);
    const Vector coherent = coherent_state(std::sqrt(0.5 * total_mean_photons), cutoff).amplitudes;
    std::vector<Vector> factors;
    for (const Factor &f : layout.factors()) {
        factors.push_back(f.kind == FactorKind::kQubit ? emitter_ground() : coherent);
    }
    return product_state(layout, factors);
}

Complex inner_product(const CompositeState &a, const CompositeState &b) {
    require(a.layout() == b.layout(), ErrorCode::kLayoutMismatch, "inner product of states with different layouts");
    return a.amplitudes().dot(b.amplitudes());
}

namespace {

// Expectation of the per-factor index value summed over the selected factors.
double mean_index(const CompositeState &state, FactorKind kind) {
    const SubsystemLayout &layout = state.layout();
    const Vector &amps = state.amplitudes();
    double total = 0.0;
    for (std::size_t k = 0; k < layout.size(); ++k) {
        if (layout.factors()[k].kind != kind) {
            continue;
        }
        const std::size_t stride = layout.stride(k);
        const std::size_t dim = layout.dim(k);
        for (std::size_t i = 0; i < layout.total_dim(); ++i) {
            const std::size_t digit = (i / stride) % dim;
            total += static_cast<double>(digit) * std::norm(amps[static_cast<Eigen::Index>(i)]);
        }
    }
    return total;
}

}  // namespace

double mean_photon_number(const CompositeState &state) { return mean_index(state, FactorKind::kMode); }

double mean_excitations(const CompositeState &state) { return mean_index(state, FactorKind::kQubit); }

DensityOperator density(const CompositeState &state) {
    return {state.layout(), state.amplitudes() * state.amplitudes().adjoint()};
}

DensityOperator trace_out(const DensityOperator &rho, std::size_t factor) {
    const SubsystemLayout &layout = rho.layout;
    require(factor < layout.size(), ErrorCode::kInvalidArgument, "factor index out of range");
    require(layout.size() > 1, ErrorCode::kInvalidArgument, "cannot trace out the last factor");
    std::vector<Factor> kept;
    for (std::size_t k = 0; k < layout.size(); ++k) {
        if (k != factor) {
            kept.push_back(layout.factors()[k]);
        }
    }
    SubsystemLayout reduced(kept);
    const std::size_t inner = layout.stride(factor);
    const std::size_t dim = layout.dim(factor);
    const std::size_t outer = layout.total_dim() / (inner * dim);
    const auto rdim = static_cast<Eigen::Index>(reduced.total_dim());
    Matrix out = Matrix::Zero(rdim, rdim);
    for (std::size_t o1 = 0; o1 < outer; ++o1) {
        for (std::size_t i1 = 0; i1 < inner; ++i1) {
            const auto r1 = static_cast<Eigen::Index>(o1 * inner + i1);
            for (std::size_t o2 = 0; o2 < outer; ++o2) {
                for (std::size_t i2 = 0; i2 < inner; ++i2) {
                    const auto r2 = static_cast<Eigen::Index>(o2 * inner + i2);
                    Complex sum = 0.0;
                    for (std::size_t k = 0; k < dim; ++k) {
                        sum += rho.matrix(static_cast<Eigen::Index>((o1 * dim + k) * inner + i1),
                                          static_cast<Eigen::Index>((o2 * dim + k) * inner + i2));
                    }
                    out(r1, r2) = sum;
                }
            }
        }
    }
    return {std::move(reduced), std::move(out)};
}

ReducedDensity reduce_to_mode(const CompositeState &state, std::size_t factor) {
    const SubsystemLayout &layout = state.layout();
    require(factor < layout.size(), ErrorCode::kInvalidArgument, "factor index out of range");
    require(layout.factors()[factor].kind == FactorKind::kMode, ErrorCode::kInvalidArgument,
            "factor " + std::to_string(factor) + " is not a mode");
    const std::size_t inner = layout.stride(factor);
    const std::size_t dim = layout.dim(factor);
    const std::size_t outer = layout.total_dim() / (inner * dim);
    // Columns of m enumerate the traced-out configurations.
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(outer * inner));
    const Vector &amps = state.amplitudes();
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t i = 0; i < inner; ++i) {
                m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(o * inner + i)) =
                    amps[static_cast<Eigen::Index>((o * dim + k) * inner + i)];
            }
        }
    }
    ReducedDensity out;
    out.dim = dim;
    out.matrix = m * m.adjoint();
    const double tr = out.trace();
    require(tr > 0.0, ErrorCode::kNumerical, "zero state has no reduced density");
    out.matrix /= tr;
    return out;
}

}  // namespace fockmetro
