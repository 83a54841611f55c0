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

#include "fockmetro/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "fockmetro/error.hpp"

namespace fockmetro {

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::kJC:
            return "jc";
        case GateKind::kKerr:
            return "kerr";
        case GateKind::kTunnel:
            return "tunnel";
        case GateKind::kDetune:
            return "detune";
        case GateKind::kBeamSplitter:
            return "bs";
        case GateKind::kPhaseDiff:
            return "phase_diff";
        case GateKind::kDiagonalOperator:
            return "diagonal_operator";
    }
    return "unknown";
}

namespace {

std::size_t find_root(std::vector<std::size_t> &parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

SpectralGenerator SpectralGenerator::from_entries(std::size_t dim, const std::vector<Entry> &entries) {
    std::vector<std::size_t> parent(dim);
    std::iota(parent.begin(), parent.end(), 0);
    for (const Entry &e : entries) {
        require(e.row < dim && e.col < dim, ErrorCode::kInvalidArgument, "generator entry out of range");
        if (e.value != 0.0) {
            parent[find_root(parent, e.row)] = find_root(parent, e.col);
        }
    }
    // Group indices by component, ordered by their smallest member.
    std::map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < dim; ++i) {
        components[find_root(parent, i)].push_back(i);
    }
    std::vector<std::size_t> position(dim);
    std::vector<std::size_t> owner(dim);
    SpectralGenerator out;
    out.dim = dim;
    std::vector<std::vector<std::size_t>> groups;
    for (auto &[root, members] : components) {
        groups.push_back(std::move(members));
    }
    std::sort(groups.begin(), groups.end(), [](const auto &a, const auto &b) { return a.front() < b.front(); });
    std::vector<Eigen::MatrixXd> local(groups.size());
    for (std::size_t b = 0; b < groups.size(); ++b) {
        for (std::size_t k = 0; k < groups[b].size(); ++k) {
            position[groups[b][k]] = k;
            owner[groups[b][k]] = b;
        }
        const auto m = static_cast<Eigen::Index>(groups[b].size());
        local[b] = Eigen::MatrixXd::Zero(m, m);
    }
    for (const Entry &e : entries) {
        const std::size_t b = owner[e.row];
        if (e.value == 0.0 && owner[e.col] != b) {
            continue;
        }
        const auto r = static_cast<Eigen::Index>(position[e.row]);
        const auto c = static_cast<Eigen::Index>(position[e.col]);
        local[b](r, c) = e.value;
        local[b](c, r) = e.value;
    }
    for (std::size_t b = 0; b < groups.size(); ++b) {
        Block block;
        block.indices = std::move(groups[b]);
        if (local[b].rows() == 1) {
            block.basis = Eigen::MatrixXd::Ones(1, 1);
            block.eigenvalues = Eigen::VectorXd::Constant(1, local[b](0, 0));
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(local[b]);
            require(solver.info() == Eigen::Success, ErrorCode::kNumerical, "generator eigendecomposition failed");
            block.basis = solver.eigenvectors();
            block.eigenvalues = solver.eigenvalues();
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

Eigen::MatrixXd SpectralGenerator::dense() const {
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (const Block &b : blocks) {
        const Eigen::MatrixXd local = b.basis * b.eigenvalues.asDiagonal() * b.basis.transpose();
        for (std::size_t r = 0; r < b.indices.size(); ++r) {
            for (std::size_t c = 0; c < b.indices.size(); ++c) {
                h(static_cast<Eigen::Index>(b.indices[r]), static_cast<Eigen::Index>(b.indices[c])) =
                    local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return h;
}

namespace {

enum class GeneratorKind { kJC, kTunnel };

std::shared_ptr<const SpectralGenerator> build_generator(GeneratorKind kind, std::size_t cutoff) {
    std::vector<SpectralGenerator::Entry> entries;
    if (kind == GeneratorKind::kJC) {
        // <e, n-1| sigma^dagger a |g, n> = sqrt(n)
        for (std::size_t n = 1; n < cutoff; ++n) {
            entries.push_back({n, cutoff + n - 1, std::sqrt(static_cast<double>(n))});
        }
        return std::make_shared<const SpectralGenerator>(SpectralGenerator::from_entries(2 * cutoff, entries));
    }
    // <n1-1, n2+1| a2^dagger a1 |n1, n2> = sqrt(n1 (n2 + 1))
    for (std::size_t n1 = 1; n1 < cutoff; ++n1) {
        for (std::size_t n2 = 0; n2 + 1 < cutoff; ++n2) {
            entries.push_back({n1 * cutoff + n2, (n1 - 1) * cutoff + n2 + 1,
                               std::sqrt(static_cast<double>(n1) * static_cast<double>(n2 + 1))});
        }
    }
    return std::make_shared<const SpectralGenerator>(SpectralGenerator::from_entries(cutoff * cutoff, entries));
}

std::shared_ptr<const SpectralGenerator> cached_generator(GeneratorKind kind, std::size_t cutoff) {
    static std::mutex mutex;
    static std::map<std::pair<GeneratorKind, std::size_t>, std::shared_ptr<const SpectralGenerator>> cache;
    const auto key = std::make_pair(kind, cutoff);
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    // Built outside the lock; a concurrent builder produces an identical value and the first insert wins.
    auto built = build_generator(kind, cutoff);
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(key, std::move(built)).first->second;
}

}  // namespace

std::shared_ptr<const SpectralGenerator> jc_generator(std::size_t cutoff) {
    require(cutoff >= 2, ErrorCode::kInvalidArgument, "cutoff must be at least 2");
    return cached_generator(GeneratorKind::kJC, cutoff);
}

std::shared_ptr<const SpectralGenerator> tunnel_generator(std::size_t cutoff) {
    require(cutoff >= 2, ErrorCode::kInvalidArgument, "cutoff must be at least 2");
    return cached_generator(GeneratorKind::kTunnel, cutoff);
}

LocalGate::LocalGate(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets)
    : kind_(kind), targets_(std::move(targets)) {
    require(!targets_.empty(), ErrorCode::kInvalidArgument, "gate needs at least one target");
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        require(targets_[i] < layout.size(), ErrorCode::kLayoutMismatch, "gate target out of layout range");
        for (std::size_t j = 0; j < i; ++j) {
            require(targets_[i] != targets_[j], ErrorCode::kInvalidArgument, "gate targets must be distinct");
        }
        target_dims_.push_back(layout.dim(targets_[i]));
        local_dim_ *= target_dims_.back();
    }
}

LocalGate LocalGate::diagonal(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets,
                              Vector entries, bool unitary) {
    LocalGate gate(kind, layout, std::move(targets));
    require(static_cast<std::size_t>(entries.size()) == gate.local_dim_, ErrorCode::kLayoutMismatch,
            "diagonal length does not match target dimension");
    gate.unitary_ = unitary;
    gate.action_ = Diagonal{std::move(entries)};
    return gate;
}

LocalGate LocalGate::spectral(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets,
                              std::shared_ptr<const SpectralGenerator> generator, double t) {
    LocalGate gate(kind, layout, std::move(targets));
    require(generator && generator->dim == gate.local_dim_, ErrorCode::kLayoutMismatch,
            "generator dimension does not match target dimension");
    if (t == 0.0) {
        gate.action_ = Identity{};
        return gate;
    }
    Spectral action;
    action.phases.reserve(generator->blocks.size());
    for (const auto &block : generator->blocks) {
        Vector phases(block.eigenvalues.size());
        for (Eigen::Index k = 0; k < phases.size(); ++k) {
            phases[k] = std::polar(1.0, -t * block.eigenvalues[k]);
        }
        action.phases.push_back(std::move(phases));
    }
    action.generator = std::move(generator);
    gate.action_ = std::move(action);
    return gate;
}

LocalGate LocalGate::identity(GateKind kind, const SubsystemLayout &layout, std::vector<std::size_t> targets) {
    LocalGate gate(kind, layout, std::move(targets));
    gate.action_ = Identity{};
    return gate;
}

Matrix LocalGate::matrix() const {
    const auto n = static_cast<Eigen::Index>(local_dim_);
    Matrix u = Matrix::Identity(n, n);
    if (const auto *d = std::get_if<Diagonal>(&action_)) {
        u = d->entries.asDiagonal();
    } else if (const auto *s = std::get_if<Spectral>(&action_)) {
        u.setZero();
        for (std::size_t b = 0; b < s->generator->blocks.size(); ++b) {
            const auto &block = s->generator->blocks[b];
            const Matrix basis = block.basis.cast<Complex>();
            const Matrix local = basis * s->phases[b].asDiagonal() * basis.transpose();
            for (std::size_t r = 0; r < block.indices.size(); ++r) {
                for (std::size_t c = 0; c < block.indices.size(); ++c) {
                    u(static_cast<Eigen::Index>(block.indices[r]), static_cast<Eigen::Index>(block.indices[c])) =
                        local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                }
            }
        }
    }
    return u;
}

LocalGate LocalGate::adjoint() const {
    LocalGate out = *this;
    if (auto *d = std::get_if<Diagonal>(&out.action_)) {
        d->entries = d->entries.conjugate();
    } else if (auto *s = std::get_if<Spectral>(&out.action_)) {
        for (auto &p : s->phases) {
            p = p.conjugate();
        }
    }
    return out;
}

void LocalGate::apply_in_place(const SubsystemLayout &layout, Vector &amplitudes) const {
    require(static_cast<std::size_t>(amplitudes.size()) == layout.total_dim(), ErrorCode::kLayoutMismatch,
            "amplitude vector does not match layout");
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        require(targets_[i] < layout.size() && layout.dim(targets_[i]) == target_dims_[i],
                ErrorCode::kLayoutMismatch, "gate targets do not match state layout");
    }
    if (is_identity()) {
        return;
    }
    // Offsets of every local configuration and every spectator configuration.
    std::vector<std::size_t> local_offsets(local_dim_, 0);
    for (std::size_t l = 0; l < local_dim_; ++l) {
        std::size_t rem = l;
        std::size_t offset = 0;
        for (std::size_t i = targets_.size(); i-- > 0;) {
            offset += (rem % target_dims_[i]) * layout.stride(targets_[i]);
            rem /= target_dims_[i];
        }
        local_offsets[l] = offset;
    }
    std::vector<std::size_t> spectators;
    for (std::size_t k = 0; k < layout.size(); ++k) {
        if (std::find(targets_.begin(), targets_.end(), k) == targets_.end()) {
            spectators.push_back(k);
        }
    }
    const std::size_t rest_dim = layout.total_dim() / local_dim_;
    std::vector<std::size_t> rest_offsets(rest_dim, 0);
    for (std::size_t r = 0; r < rest_dim; ++r) {
        std::size_t rem = r;
        std::size_t offset = 0;
        for (std::size_t i = spectators.size(); i-- > 0;) {
            const std::size_t dim = layout.dim(spectators[i]);
            offset += (rem % dim) * layout.stride(spectators[i]);
            rem /= dim;
        }
        rest_offsets[r] = offset;
    }

    const double norm_before = unitary_ ? amplitudes.squaredNorm() : 0.0;
    if (const auto *d = std::get_if<Diagonal>(&action_)) {
        for (std::size_t base : rest_offsets) {
            for (std::size_t l = 0; l < local_dim_; ++l) {
                amplitudes[static_cast<Eigen::Index>(base + local_offsets[l])] *= d->entries[static_cast<Eigen::Index>(l)];
            }
        }
    } else {
        const auto &s = std::get<Spectral>(action_);
        Eigen::Index max_block = 1;
        for (const auto &block : s.generator->blocks) {
            max_block = std::max(max_block, static_cast<Eigen::Index>(block.indices.size()));
        }
        Vector gathered(max_block);
        Vector rotated(max_block);
        for (std::size_t base : rest_offsets) {
            for (std::size_t b = 0; b < s.generator->blocks.size(); ++b) {
                const auto &block = s.generator->blocks[b];
                const auto m = static_cast<Eigen::Index>(block.indices.size());
                if (m == 1) {
                    amplitudes[static_cast<Eigen::Index>(base + local_offsets[block.indices[0]])] *= s.phases[b][0];
                    continue;
                }
                for (Eigen::Index k = 0; k < m; ++k) {
                    gathered[k] = amplitudes[static_cast<Eigen::Index>(base + local_offsets[block.indices[k]])];
                }
                rotated.head(m).noalias() = block.basis.transpose() * gathered.head(m);
                rotated.head(m).array() *= s.phases[b].array();
                gathered.head(m).noalias() = block.basis * rotated.head(m);
                for (Eigen::Index k = 0; k < m; ++k) {
                    amplitudes[static_cast<Eigen::Index>(base + local_offsets[block.indices[k]])] = gathered[k];
                }
            }
        }
    }
    if (unitary_) {
        const double norm_after = amplitudes.squaredNorm();
        require(std::abs(norm_after - norm_before) <= 1e-9 * std::max(1.0, norm_before), ErrorCode::kNumerical,
                "gate " + to_string(kind_) + " did not preserve the norm");
    }
}

LocalGate jc_gate(const SubsystemLayout &layout, double g_tilde, std::size_t pair) {
    const auto emitters = layout.emitter_indices();
    const auto modes = layout.mode_indices();
    require(pair < emitters.size() && pair < modes.size(), ErrorCode::kLayoutMismatch,
            "layout has no emitter/mode pair " + std::to_string(pair));
    return LocalGate::spectral(GateKind::kJC, layout, {emitters[pair], modes[pair]}, jc_generator(layout.cutoff()),
                               g_tilde);
}

LocalGate kerr_gate(const SubsystemLayout &layout, double k_tilde, std::size_t mode) {
    const auto modes = layout.mode_indices();
    require(mode < modes.size(), ErrorCode::kLayoutMismatch, "layout has no mode " + std::to_string(mode));
    if (k_tilde == 0.0) {
        return LocalGate::identity(GateKind::kKerr, layout, {modes[mode]});
    }
    const std::size_t cutoff = layout.dim(modes[mode]);
    Vector phases(static_cast<Eigen::Index>(cutoff));
    for (std::size_t n = 0; n < cutoff; ++n) {
        const double n2 = static_cast<double>(n * n);
        phases[static_cast<Eigen::Index>(n)] = std::polar(1.0, -k_tilde * n2);
    }
    return LocalGate::diagonal(GateKind::kKerr, layout, {modes[mode]}, std::move(phases));
}

LocalGate tunnel_gate(const SubsystemLayout &layout, double j_tilde) {
    const auto modes = layout.mode_indices();
    require(modes.size() == 2, ErrorCode::kLayoutMismatch, "tunneling needs exactly two modes");
    return LocalGate::spectral(GateKind::kTunnel, layout, {modes[0], modes[1]}, tunnel_generator(layout.cutoff()),
                               j_tilde);
}

LocalGate detune_gate(const SubsystemLayout &layout, double delta_tilde, std::size_t emitter) {
    const auto emitters = layout.emitter_indices();
    require(emitter < emitters.size(), ErrorCode::kLayoutMismatch, "layout has no emitter " + std::to_string(emitter));
    if (delta_tilde == 0.0) {
        return LocalGate::identity(GateKind::kDetune, layout, {emitters[emitter]});
    }
    Vector phases(2);
    phases << 1.0, std::polar(1.0, -delta_tilde);
    return LocalGate::diagonal(GateKind::kDetune, layout, {emitters[emitter]}, std::move(phases));
}

CompositeState apply(const LocalGate &gate, const CompositeState &state) {
    Vector amps = state.amplitudes();
    gate.apply_in_place(state.layout(), amps);
    return CompositeState(state.layout(), std::move(amps));
}

CompositeState apply_all(const std::vector<LocalGate> &gates, const CompositeState &state) {
    Vector amps = state.amplitudes();
    for (const LocalGate &gate : gates) {
        gate.apply_in_place(state.layout(), amps);
    }
    return CompositeState(state.layout(), std::move(amps));
}

CompositeState evolve_continuous(Nonlinearity kind, double time, const CompositeState &psi0) {
    const SubsystemLayout &layout = psi0.layout();
    require(layout == SubsystemLayout::for_kind(kind, layout.cutoff()), ErrorCode::kLayoutMismatch,
            "state layout does not match the " + to_string(kind) + " register");
    std::vector<LocalGate> gates;
    for (std::size_t i = 0; i < 2; ++i) {
        gates.push_back(kind == Nonlinearity::kJC ? jc_gate(layout, time, i) : kerr_gate(layout, time, i));
    }
    return apply_all(gates, psi0);
}

}  // namespace fockmetro
