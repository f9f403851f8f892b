// Copyright 2026 The wgs-lab Authors
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

#include "wgs/exact_state.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "wgs/error.hpp"

namespace wgs {
namespace {

std::size_t checked_dim(int d, int n, std::size_t cap) {
    std::size_t dim = 1;
    for (int i = 0; i < n; ++i) {
        if (dim > cap / static_cast<std::size_t>(d)) {
            throw ResourceError("state of " + std::to_string(n) + " qudits with d=" + std::to_string(d) +
                                " exceeds the amplitude cap " + std::to_string(cap));
        }
        dim *= d;
    }
    return dim;
}

void check_slots(std::span<const int> slots, int n) {
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (slots[k] < 0 || slots[k] >= n) throw DomainError("qudit slot out of range");
        if (k > 0 && slots[k] <= slots[k - 1]) throw DomainError("qudit slots must be strictly increasing");
    }
}

// Amplitudes as a d^{|A|} x d^{|B|} matrix, rows indexed by the digits of
// part A (first slot most significant), columns by those of part B.
Eigen::MatrixXcd reshape(const ExactState& state, std::span<const int> part_a) {
    const int n = state.n_qudits();
    const int d = state.local_dim();
    std::vector<char> in_a(n, 0);
    for (int k : part_a) in_a[k] = 1;
    std::size_t rows = 1;
    for (std::size_t k = 0; k < part_a.size(); ++k) rows *= d;
    const std::size_t cols = static_cast<std::size_t>(state.amplitudes.size()) / rows;
    Eigen::MatrixXcd m(rows, cols);
    std::vector<int> digits(n, 0);
    for (Eigen::Index eta = 0; eta < state.amplitudes.size(); ++eta) {
        std::size_t row = 0, col = 0;
        for (int k = 0; k < n; ++k) {
            if (in_a[k]) {
                row = row * d + digits[k];
            } else {
                col = col * d + digits[k];
            }
        }
        m(row, col) = state.amplitudes[eta];
        for (int k = n - 1; k >= 0; --k) {
            if (++digits[k] < d) break;
            digits[k] = 0;
        }
    }
    return m;
}

}  // namespace

Bipartition Bipartition::from_mask(int n_qudits, unsigned long long mask) {
    Bipartition cut;
    cut.part_a.push_back(0);
    for (int k = 1; k < n_qudits; ++k) {
        if ((mask >> (k - 1)) & 1ULL) {
            cut.part_a.push_back(k);
        } else {
            cut.part_b.push_back(k);
        }
    }
    cut.validate(n_qudits);
    return cut;
}

void Bipartition::validate(int n_qudits) const {
    if (part_a.empty() || part_b.empty()) throw DomainError("both sides of a bipartition must be non-empty");
    std::vector<int> all(part_a);
    all.insert(all.end(), part_b.begin(), part_b.end());
    std::sort(all.begin(), all.end());
    for (int k = 0; k < n_qudits; ++k) {
        if (static_cast<int>(all.size()) != n_qudits || all[k] != k) {
            throw DomainError("bipartition must cover every qudit exactly once");
        }
    }
    if (!std::is_sorted(part_a.begin(), part_a.end()) || !std::is_sorted(part_b.begin(), part_b.end())) {
        throw DomainError("bipartition parts must be sorted");
    }
}

ExactState build_state(const PhaseModel& model, std::size_t max_entries) {
    std::vector<int> all(model.chain.n_sites);
    for (int i = 0; i < model.chain.n_sites; ++i) all[i] = i;
    return build_state(model, all, max_entries);
}

ExactState build_state(const PhaseModel& model, std::span<const int> positions, std::size_t max_entries) {
    model.validate();
    const int d = model.chain.local_dim;
    const int n = static_cast<int>(positions.size());
    if (n < 1) throw DomainError("state needs at least one qudit");
    check_slots(positions, model.chain.n_sites);
    const std::size_t dim = checked_dim(d, n, max_entries);

    Eigen::MatrixXd phases = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) phases(i, j) = phase(model, positions[i], positions[j]);
    }

    ExactState state{model.chain, model.time, std::vector<int>(positions.begin(), positions.end()),
                     Eigen::VectorXcd(dim)};
    const double norm = std::pow(static_cast<double>(d), -0.5 * n);
    std::vector<int> digits(n, 0);
    for (std::size_t eta = 0; eta < dim; ++eta) {
        double theta = 0.0;
        for (int i = 0; i < n; ++i) {
            if (digits[i] == 0) continue;
            for (int j = i + 1; j < n; ++j) theta += digits[i] * digits[j] * phases(i, j);
        }
        state.amplitudes[eta] = std::polar(norm, theta);
        for (int k = n - 1; k >= 0; --k) {
            if (++digits[k] < d) break;
            digits[k] = 0;
        }
    }
    return state;
}

SubsystemRdm partial_trace(const ExactState& state, std::span<const int> slots) {
    const int n = state.n_qudits();
    if (slots.empty()) throw DomainError("partial trace needs a non-empty subsystem");
    check_slots(slots, n);
    if (static_cast<int>(slots.size()) > default_max_block(state.local_dim())) {
        throw ResourceError("subsystem exceeds the reduced-state block cap");
    }
    Eigen::MatrixXcd m = reshape(state, slots);
    SubsystemRdm out;
    out.local_dim = state.local_dim();
    for (int k : slots) out.sites.push_back(state.positions[k]);
    out.matrix.resize(m.rows(), m.rows());
    // Explicit sum over the traced-out configurations.
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = a; b < m.rows(); ++b) {
            Complex acc = 0.0;
            for (Eigen::Index e = 0; e < m.cols(); ++e) acc += m(a, e) * std::conj(m(b, e));
            out.matrix(a, b) = acc;
            out.matrix(b, a) = std::conj(acc);
        }
    }
    return out;
}

Spectrum schmidt_spectrum(const ExactState& state, const Bipartition& cut) {
    cut.validate(state.n_qudits());
    Eigen::MatrixXcd m = reshape(state, cut.part_a);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD of the reshaped amplitude tensor failed");
    const auto& sv = svd.singularValues();
    Spectrum out;
    out.eigenvalues.reserve(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) out.eigenvalues.push_back(sv[i] * sv[i]);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
    return out;
}

int max_exact_ggm_sites(int local_dim) {
    switch (local_dim) {
        case 2: return 12;
        case 3: return 11;
        case 4: return 7;
        case 5: return 6;
        default: return 5;
    }
}

double exact_ggm(const ExactState& state) {
    const int n = state.n_qudits();
    if (n > max_exact_ggm_sites(state.local_dim())) {
        throw ResourceError("exact GGM over all bipartitions is capped at N=" +
                            std::to_string(max_exact_ggm_sites(state.local_dim())) +
                            " for d=" + std::to_string(state.local_dim()));
    }
    if (n < 2) return 0.0;
    double best = 0.0;
    const unsigned long long count = (1ULL << (n - 1)) - 1;  // excludes A = everything
    for (unsigned long long mask = 0; mask < count; ++mask) {
        Bipartition cut = Bipartition::from_mask(n, mask);
        const auto& small = cut.part_a.size() <= cut.part_b.size() ? cut.part_a : cut.part_b;
        Eigen::MatrixXcd m = reshape(state, small);
        Eigen::MatrixXcd gram = m * m.adjoint();
        best = std::max(best, largest_eigenvalue(gram));
    }
    return std::clamp(1.0 - best, 0.0, 1.0);
}

MeasurementReduction measure_reduce(const ExactState& state, int slot, int outcome) {
    const int n = state.n_qudits();
    const int d = state.local_dim();
    if (slot < 0 || slot >= n) throw DomainError("measured qudit out of range");
    if (outcome < 0 || outcome >= d) throw DomainError("measurement outcome out of [0, d-1]");
    if (n < 2) throw DomainError("measurement reduction needs at least two qudits");

    MeasurementReduction out;
    out.measured_slot = slot;
    out.outcome = outcome;
    out.residual.chain = state.chain;
    out.residual.time = state.time;
    for (int k = 0; k < n; ++k) {
        if (k != slot) out.residual.positions.push_back(state.positions[k]);
    }

    const std::size_t rest = static_cast<std::size_t>(state.amplitudes.size()) / d;
    out.residual.amplitudes.resize(rest);
    // stride of the measured digit in eta
    std::size_t stride = 1;
    for (int k = n - 1; k > slot; --k) stride *= d;
    double prob = 0.0;
    for (std::size_t zeta = 0; zeta < rest; ++zeta) {
        std::size_t high = zeta / stride;
        std::size_t low = zeta % stride;
        std::size_t eta = (high * d + outcome) * stride + low;
        Complex amp = state.amplitudes[eta];
        out.residual.amplitudes[zeta] = amp;
        prob += std::norm(amp);
    }
    if (std::abs(prob - 1.0 / d) > 1e-12) {
        throw NumericalError("measurement outcome probability " + std::to_string(prob) + " differs from 1/d");
    }
    out.probability = prob;
    out.residual.amplitudes /= std::sqrt(prob);

    PhaseModel model{state.chain, state.time};
    for (int k = 0; k < n; ++k) {
        if (k == slot) continue;
        double phi = phase(model, state.positions[k], state.positions[slot]);
        std::vector<Complex> diag(d);
        for (int mu = 0; mu < d; ++mu) diag[mu] = std::polar(1.0, mu * outcome * phi);
        out.local_phases.push_back(std::move(diag));
    }
    return out;
}

ExactState MeasurementReduction::without_local_phases() const {
    ExactState out = residual;
    const int n = out.n_qudits();
    const int d = out.local_dim();
    std::vector<int> digits(n, 0);
    for (Eigen::Index eta = 0; eta < out.amplitudes.size(); ++eta) {
        Complex factor = 1.0;
        for (int k = 0; k < n; ++k) factor *= std::conj(local_phases[k][digits[k]]);
        out.amplitudes[eta] *= factor;
        for (int k = n - 1; k >= 0; --k) {
            if (++digits[k] < d) break;
            digits[k] = 0;
        }
    }
    return out;
}

ExactState canonical_global_phase(const ExactState& state) {
    ExactState out = state;
    for (Eigen::Index i = 0; i < out.amplitudes.size(); ++i) {
        double mag = std::abs(out.amplitudes[i]);
        if (mag > 1e-14) {
            out.amplitudes *= std::conj(out.amplitudes[i]) / mag;
            break;
        }
    }
    return out;
}

}  // namespace wgs
