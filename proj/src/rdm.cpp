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

#include "wgs/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wgs/error.hpp"

namespace wgs {
namespace {

std::size_t ipow(std::size_t base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

// (1/d) sum_{p=0}^{d-1} z^p for |z| = 1.
Complex phase_average(Complex z, int d) {
    Complex sum = 1.0;
    Complex zp = 1.0;
    for (int p = 1; p < d; ++p) {
        zp *= z;
        sum += zp;
    }
    return sum / static_cast<double>(d);
}

std::vector<int> digits_of(std::size_t index, int d, int width) {
    std::vector<int> out(width);
    for (int k = width - 1; k >= 0; --k) {
        out[k] = static_cast<int>(index % d);
        index /= d;
    }
    return out;
}

}  // namespace

int default_max_block(int local_dim) {
    switch (local_dim) {
        case 2: return 12;
        case 3: return 7;
        case 4: return 6;
        case 5: return 5;
        default: break;
    }
    int sites = 0;
    std::size_t dim = 1;
    while (dim * local_dim <= 4096) {
        dim *= local_dim;
        ++sites;
    }
    return std::max(sites, 1);
}

SubsystemSpec::SubsystemSpec(const ChainSpec& chain, std::vector<int> sites, int max_sites)
    : chain_(chain), sites_(std::move(sites)) {
    chain_.validate();
    if (sites_.empty()) throw DomainError("subsystem must contain at least one site");
    for (std::size_t k = 0; k < sites_.size(); ++k) {
        if (sites_[k] < 0 || sites_[k] >= chain_.n_sites) {
            throw DomainError("subsystem site " + std::to_string(sites_[k]) + " out of range");
        }
        if (k > 0 && sites_[k] <= sites_[k - 1]) throw DomainError("subsystem sites must be strictly increasing");
    }
    int cap = max_sites > 0 ? max_sites : default_max_block(chain_.local_dim);
    if (size() > cap) {
        throw ResourceError("subsystem of " + std::to_string(size()) + " sites exceeds cap " +
                            std::to_string(cap) + " for d=" + std::to_string(chain_.local_dim));
    }
    dim_ = ipow(static_cast<std::size_t>(chain_.local_dim), size());
}

std::vector<int> SubsystemSpec::complement() const {
    std::vector<int> out;
    out.reserve(chain_.n_sites - sites_.size());
    for (int l = 0, k = 0; l < chain_.n_sites; ++l) {
        if (k < size() && sites_[k] == l) {
            ++k;
            continue;
        }
        out.push_back(l);
    }
    return out;
}

double Spectrum::sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }

Complex rdm_entry(const PhaseModel& model, const SubsystemSpec& block, std::span<const int> a,
                  std::span<const int> b) {
    const int d = model.chain.local_dim;
    const auto& sites = block.sites();
    const int s = block.size();
    if (static_cast<int>(a.size()) != s || static_cast<int>(b.size()) != s) {
        throw DomainError("multi-index length does not match the subsystem size");
    }
    for (int k = 0; k < s; ++k) {
        if (a[k] < 0 || a[k] >= d || b[k] < 0 || b[k] >= d) throw DomainError("multi-index digit out of [0, d-1]");
    }
    double intra = 0.0;
    for (int k = 0; k < s; ++k) {
        for (int q = k + 1; q < s; ++q) {
            intra += (a[k] * a[q] - b[k] * b[q]) * phase(model, sites[k], sites[q]);
        }
    }
    Complex value = std::polar(1.0, intra) / std::pow(static_cast<double>(d), s);
    for (int l : block.complement()) {
        double x = 0.0;
        for (int k = 0; k < s; ++k) x += (a[k] - b[k]) * phase(model, sites[k], l);
        Complex f = 0.0;
        for (int p = 0; p < d; ++p) f += std::polar(1.0, p * x);
        value *= f / static_cast<double>(d);
    }
    return value;
}

EnvironmentTable::EnvironmentTable(const PhaseModel& model, std::span<const int> sites,
                                   std::span<const int> environment)
    : block_size_(static_cast<int>(sites.size())), local_dim_(model.chain.local_dim) {
    const int d = local_dim_;
    const int s = block_size_;
    const int radix = 2 * d - 1;
    const std::size_t total = ipow(radix, s);
    values_.assign(total, Complex(1.0, 0.0));

    // Half the table suffices: F(-delta) = conj(F(delta)) and index(-delta)
    // mirrors index(delta) around the center.
    const std::size_t half = total / 2 + 1;
    std::vector<Complex> z(total);
    std::vector<Complex> powers(radix);
    for (int l : environment) {
        bool coupled = false;
        // z[delta] = exp(i sum_k delta_k phi_kl), built one digit at a time.
        std::size_t filled = 1;
        z[0] = 1.0;
        for (int k = 0; k < s; ++k) {
            double phi = phase(model, sites[k], l);
            if (phi != 0.0) coupled = true;
            Complex w = std::polar(1.0, phi);
            Complex winv = std::conj(w);
            powers[d - 1] = 1.0;
            for (int m = 1; m < d; ++m) {
                powers[d - 1 + m] = powers[d - 2 + m] * w;
                powers[d - 1 - m] = powers[d - m] * winv;
            }
            for (std::size_t j = filled; j-- > 0;) {
                Complex base = z[j];
                for (int m = 0; m < radix; ++m) z[j * radix + m] = base * powers[m];
            }
            filled *= radix;
        }
        if (!coupled) continue;
        for (std::size_t idx = 0; idx < half; ++idx) values_[idx] *= phase_average(z[idx], d);
    }
    for (std::size_t idx = half; idx < total; ++idx) values_[idx] = std::conj(values_[total - 1 - idx]);
    values_[center()] = 1.0;

    const std::size_t dim = ipow(d, s);
    offsets_.resize(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        std::size_t off = 0;
        std::size_t rem = a;
        std::size_t weight = 1;
        for (int k = s - 1; k >= 0; --k) {
            off += (rem % d) * weight;
            rem /= d;
            weight *= radix;
        }
        offsets_[a] = off;
    }
}

double EnvironmentTable::purity() const {
    const int d = local_dim_;
    const int radix = 2 * d - 1;
    double total = 0.0;
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        double mult = 1.0;
        std::size_t rem = idx;
        for (int k = 0; k < block_size_; ++k) {
            int delta = static_cast<int>(rem % radix) - (d - 1);
            rem /= radix;
            mult *= d - std::abs(delta);
        }
        total += mult * std::norm(values_[idx]);
    }
    return total / std::pow(static_cast<double>(d), 2 * block_size_);
}

Eigen::MatrixXcd EnvironmentTable::environment_matrix() const {
    const std::size_t dim = offsets_.size();
    const double norm = 1.0 / static_cast<double>(dim);
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t a = 0; a < dim; ++a) {
        m(a, a) = norm;
        for (std::size_t b = a + 1; b < dim; ++b) {
            Complex v = values_[offsets_[a] - offsets_[b] + center()] * norm;
            m(a, b) = v;
            m(b, a) = std::conj(v);
        }
    }
    return m;
}

SubsystemRdm build_rdm(const PhaseModel& model, const SubsystemSpec& block) {
    model.validate();
    if (block.chain().n_sites != model.chain.n_sites || block.chain().local_dim != model.chain.local_dim) {
        throw DomainError("subsystem was declared for a different chain");
    }
    const int d = model.chain.local_dim;
    const int s = block.size();
    const auto& sites = block.sites();
    const std::vector<int> env = block.complement();
    EnvironmentTable table(model, sites, env);

    const std::size_t dim = block.dim();
    std::vector<Complex> intra(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        auto digits = digits_of(a, d, s);
        double theta = 0.0;
        for (int k = 0; k < s; ++k) {
            if (digits[k] == 0) continue;
            for (int q = k + 1; q < s; ++q) theta += digits[k] * digits[q] * phase(model, sites[k], sites[q]);
        }
        intra[a] = std::polar(1.0, theta);
    }

    const double norm = 1.0 / static_cast<double>(dim);
    SubsystemRdm out{d, sites, Eigen::MatrixXcd(dim, dim)};
    auto& m = out.matrix;
    for (std::size_t a = 0; a < dim; ++a) {
        m(a, a) = norm;
        for (std::size_t b = a + 1; b < dim; ++b) {
            Complex v = intra[a] * std::conj(intra[b]) * table.at(table.offset(a) - table.offset(b) + table.center()) *
                        norm;
            m(a, b) = v;
            m(b, a) = std::conj(v);
        }
    }
    return out;
}

Spectrum spectrum(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Hermitian eigensolver failed on a " << hermitian.rows() << "x" << hermitian.cols()
           << " matrix (max |entry| = " << hermitian.cwiseAbs().maxCoeff()
           << ", Hermiticity defect = " << (hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() << ")";
        throw NumericalError(os.str());
    }
    const auto& ev = solver.eigenvalues();
    Spectrum out;
    out.eigenvalues.resize(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double v = ev[i];
        if (v < -1e-10) {
            std::ostringstream os;
            os << "density matrix is not positive semidefinite: eigenvalue " << v;
            throw NumericalError(os.str());
        }
        out.eigenvalues[ev.size() - 1 - i] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

Spectrum spectrum(const SubsystemRdm& rdm) { return spectrum(rdm.matrix); }

double largest_eigenvalue(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
    return solver.eigenvalues()[hermitian.rows() - 1];
}

double entropy(const Spectrum& spec) {
    double s = 0.0;
    for (double lambda : spec.eigenvalues) {
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

}  // namespace wgs
