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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wgs/chain.hpp"

namespace wgs {

using Complex = std::complex<double>;

/// Largest block the engine will build by default: 12, 7, 6, 5 sites for
/// d = 2, 3, 4, 5 and the largest L with d^L <= 4096 beyond that.
int default_max_block(int local_dim);

/// An ordered set of distinct sites A of a chain.
class SubsystemSpec {
   public:
    /// `max_sites` <= 0 selects default_max_block(d). Throws DomainError for
    /// unsorted, duplicate or out-of-range sites and ResourceError when
    /// |A| exceeds the cap.
    SubsystemSpec(const ChainSpec& chain, std::vector<int> sites, int max_sites = 0);

    const ChainSpec& chain() const { return chain_; }
    const std::vector<int>& sites() const { return sites_; }
    int size() const { return static_cast<int>(sites_.size()); }
    /// d^{|A|}
    std::size_t dim() const { return dim_; }
    std::vector<int> complement() const;

   private:
    ChainSpec chain_;
    std::vector<int> sites_;
    std::size_t dim_ = 1;
};

/// Reduced state of a subsystem. Rows and columns use the multi-index
/// a = sum_k a_k d^{|A|-1-k} (first listed site most significant).
struct SubsystemRdm {
    int local_dim = 2;
    std::vector<int> sites;
    Eigen::MatrixXcd matrix;

    std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Eigenvalues of a density matrix, sorted non-increasing.
struct Spectrum {
    std::vector<double> eigenvalues;

    double largest() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
    double sum() const;
};

/// One matrix element of rho_A, evaluated straight from the closed form:
/// intra-block pair phases times one averaged phase factor per outside site.
/// `a` and `b` hold one digit in [0, d-1] per site of A.
Complex rdm_entry(const PhaseModel& model, const SubsystemSpec& block, std::span<const int> a,
                  std::span<const int> b);

/// Full reduced density matrix of `block` without building the global state.
SubsystemRdm build_rdm(const PhaseModel& model, const SubsystemSpec& block);

/// Hermitian eigendecomposition. Eigenvalues below -1e-10 raise
/// NumericalError; small negative round-off is clamped to zero.
Spectrum spectrum(const SubsystemRdm& rdm);
Spectrum spectrum(const Eigen::MatrixXcd& hermitian);

/// Largest eigenvalue of a Hermitian matrix.
double largest_eigenvalue(const Eigen::MatrixXcd& hermitian);

/// Von Neumann entropy in bits, with 0 log 0 = 0.
double entropy(const Spectrum& spec);

/// Product of the outside-site phase averages indexed by the difference
/// vector delta = a - b, delta_k in [-(d-1), d-1].
///
/// Every entry of rho_A depends on its outside sites only through a - b, so
/// the (2d-1)^{|A|} distinct products are computed once and the d^{2|A|}
/// matrix entries are filled by lookup.
class EnvironmentTable {
   public:
    EnvironmentTable(const PhaseModel& model, std::span<const int> sites, std::span<const int> environment);

    int block_size() const { return block_size_; }
    int local_dim() const { return local_dim_; }
    std::size_t size() const { return values_.size(); }
    Complex at(std::size_t delta_index) const { return values_[delta_index]; }

    /// Offset of multi-index a in the difference index; the entry for (a, b)
    /// sits at offset(a) - offset(b) + center().
    std::size_t offset(std::size_t multi_index) const { return offsets_[multi_index]; }
    std::size_t center() const { return (values_.size() - 1) / 2; }

    /// Tr(rho_A^2), computed from the table alone.
    double purity() const;

    /// rho_A with the intra-block phases stripped. It is unitarily
    /// equivalent to rho_A, so it has the same spectrum.
    Eigen::MatrixXcd environment_matrix() const;

   private:
    int block_size_ = 0;
    int local_dim_ = 2;
    std::vector<Complex> values_;
    std::vector<std::size_t> offsets_;
};

}  // namespace wgs
