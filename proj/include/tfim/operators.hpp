// Copyright 2026 The tfim-datasets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tfim/lattice.hpp"
#include "tfim/state_vector.hpp"

namespace tfim {

enum class PauliAxis { X, Z };

struct PauliFactor {
  std::size_t site = 0;
  PauliAxis axis = PauliAxis::Z;

  friend bool operator==(const PauliFactor &, const PauliFactor &) = default;
};

/// coefficient * (product of single-site Paulis on distinct sites).
class PauliTerm {
public:
  PauliTerm(double coefficient, std::vector<PauliFactor> factors)
      : coefficient_(coefficient), factors_(std::move(factors)) {
    if (factors_.empty())
      throw std::invalid_argument("PauliTerm: at least one factor required");
    for (std::size_t k = 1; k < factors_.size(); ++k)
      if (factors_[k].site <= factors_[k - 1].site)
        throw std::invalid_argument("PauliTerm: sites must be strictly increasing");
  }

  static PauliTerm z(std::size_t i, double c = 1.0) { return {c, {{i, PauliAxis::Z}}}; }
  static PauliTerm x(std::size_t i, double c = 1.0) { return {c, {{i, PauliAxis::X}}}; }
  static PauliTerm zz(std::size_t i, std::size_t j, double c = 1.0) {
    if (i > j)
      std::swap(i, j);
    return {c, {{i, PauliAxis::Z}, {j, PauliAxis::Z}}};
  }

  [[nodiscard]] double coefficient() const noexcept { return coefficient_; }
  [[nodiscard]] const std::vector<PauliFactor> &factors() const noexcept { return factors_; }
  [[nodiscard]] std::size_t max_site() const noexcept { return factors_.back().site; }

  /// Flip mask (X factors) and sign mask (Z factors) for an n_sites register.
  [[nodiscard]] std::pair<std::uint64_t, std::uint64_t> masks(std::size_t n_sites) const {
    std::uint64_t x = 0, z = 0;
    for (const auto &f : factors_)
      (f.axis == PauliAxis::X ? x : z) |= site_mask(n_sites, f.site);
    return {x, z};
  }

  friend bool operator==(const PauliTerm &, const PauliTerm &) = default;

private:
  double coefficient_;
  std::vector<PauliFactor> factors_;
};

enum class BondMode {
  /// ZZ coefficient is -J * multiplicity.
  Honored,
  /// Every unique bond counts once.
  Dedup,
};

inline std::string_view to_string(BondMode m) { return m == BondMode::Honored ? "honored" : "dedup"; }

inline BondMode parse_bond_mode(std::string_view s) {
  if (s == "honored")
    return BondMode::Honored;
  if (s == "dedup")
    return BondMode::Dedup;
  throw std::invalid_argument("unknown bond mode '" + std::string(s) + "'");
}

/// H = -J sum_<ij> m_ij Z_i Z_j - h sum_i X_i on a periodic lattice.
///
/// The term list is the symbolic form; the masks and the cached ZZ diagonal
/// back the matrix-free kernel. Immutable once built, so one instance can be
/// shared by any number of worker threads.
class HamiltonianSpec {
public:
  HamiltonianSpec(Lattice lattice, double coupling_J, double field_h,
                  BondMode mode = BondMode::Honored)
      : lattice_(std::move(lattice)), J_(coupling_J), h_(field_h), mode_(mode) {
    const std::size_t n = lattice_.n_sites();
    if (n > kMaxSites)
      throw std::invalid_argument("HamiltonianSpec: lattice too large");
    for (const auto &b : lattice_.bonds()) {
      const double m = mode_ == BondMode::Honored ? b.multiplicity : 1;
      terms_.push_back(PauliTerm::zz(b.first, b.second, -J_ * m));
      zz_.push_back({site_mask(n, b.first) | site_mask(n, b.second), -J_ * m});
    }
    for (std::size_t i = 0; i < n; ++i) {
      terms_.push_back(PauliTerm::x(i, -h_));
      x_masks_.push_back(site_mask(n, i));
    }

    auto diag = std::make_shared<std::vector<double>>(std::size_t{1} << n);
    for (std::uint64_t k = 0; k < diag->size(); ++k) {
      double d = 0.0;
      for (const auto &[mask, c] : zz_)
        d += (std::popcount(k & mask) & 1) ? -c : c;
      (*diag)[k] = d;
    }
    diagonal_ = std::move(diag);
  }

  [[nodiscard]] const Lattice &lattice() const noexcept { return lattice_; }
  [[nodiscard]] std::size_t n_sites() const noexcept { return lattice_.n_sites(); }
  [[nodiscard]] double coupling_J() const noexcept { return J_; }
  [[nodiscard]] double field_h() const noexcept { return h_; }
  [[nodiscard]] BondMode bond_mode() const noexcept { return mode_; }
  [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept { return terms_; }

  /// Diagonal (ZZ) part of H in the computational basis.
  [[nodiscard]] std::span<const double> zz_diagonal() const noexcept { return *diagonal_; }
  [[nodiscard]] std::span<const std::uint64_t> x_masks() const noexcept { return x_masks_; }

  /// Sum of squared term coefficients, i.e. Tr(H^2) / 2^N.
  [[nodiscard]] double coefficient_norm2() const noexcept {
    double s = 0.0;
    for (const auto &t : terms_)
      s += t.coefficient() * t.coefficient();
    return s;
  }

private:
  struct ZZMask {
    std::uint64_t mask;
    double coefficient;
  };

  Lattice lattice_;
  double J_;
  double h_;
  BondMode mode_;
  std::vector<PauliTerm> terms_;
  std::vector<ZZMask> zz_;
  std::vector<std::uint64_t> x_masks_;
  std::shared_ptr<const std::vector<double>> diagonal_;
};

// ---------------------------------------------------------------------------
// Matrix-free kernels
// ---------------------------------------------------------------------------

/// out = H in, without materialising H. O(2^N (bonds + N)).
inline void apply_hamiltonian(std::span<const cplx> in, std::span<cplx> out,
                              const HamiltonianSpec &spec) {
  const std::size_t dim = std::size_t{1} << spec.n_sites();
  if (in.size() != dim || out.size() != dim)
    throw std::invalid_argument("apply_hamiltonian: dimension mismatch");
  if (in.data() == out.data())
    throw std::invalid_argument("apply_hamiltonian: in-place application not supported");
  const auto diag = spec.zz_diagonal();
  const auto xm = spec.x_masks();
  const double mh = -spec.field_h();
  for (std::size_t k = 0; k < dim; ++k) {
    cplx flip = 0.0;
    for (const auto m : xm)
      flip += in[k ^ m];
    out[k] = diag[k] * in[k] + mh * flip;
  }
}

inline StateVector apply_hamiltonian(const StateVector &state, const HamiltonianSpec &spec) {
  if (state.n_sites() != spec.n_sites())
    throw std::invalid_argument("apply_hamiltonian: state has " + std::to_string(state.n_sites()) +
                                " sites, Hamiltonian has " + std::to_string(spec.n_sites()));
  StateVector out(state.n_sites());
  apply_hamiltonian(state.amplitudes(), out.amplitudes(), spec);
  return out;
}

/// out = term |in>. Z factors flip the sign where their bit is set, X factors flip the bit.
inline void apply_pauli_string(std::span<const cplx> in, std::span<cplx> out,
                               std::size_t n_sites, const PauliTerm &term) {
  const std::size_t dim = std::size_t{1} << n_sites;
  if (in.size() != dim || out.size() != dim)
    throw std::invalid_argument("apply_pauli_string: dimension mismatch");
  if (term.max_site() >= n_sites)
    throw std::out_of_range("apply_pauli_string: site " + std::to_string(term.max_site()) +
                            " out of range for " + std::to_string(n_sites) + " sites");
  const auto [xm, zm] = term.masks(n_sites);
  const double c = term.coefficient();
  for (std::size_t k = 0; k < dim; ++k)
    out[k ^ xm] = ((std::popcount(k & zm) & 1) ? -c : c) * in[k];
}

inline StateVector apply_pauli_string(const StateVector &state, const PauliTerm &term) {
  StateVector out(state.n_sites());
  apply_pauli_string(state.amplitudes(), out.amplitudes(), state.n_sites(), term);
  return out;
}

// ---------------------------------------------------------------------------
// Dense construction (small systems; used as an oracle)
// ---------------------------------------------------------------------------

using DenseOperator = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense matrices are refused beyond this many sites.
inline constexpr std::size_t kDenseMaxSites = 14;

namespace detail {

inline void check_dense(std::size_t n_sites) {
  if (n_sites < 1 || n_sites > kDenseMaxSites)
    throw std::invalid_argument("dense operator: n_sites must be in [1, " +
                                std::to_string(kDenseMaxSites) + "], got " +
                                std::to_string(n_sites));
}

inline DenseOperator kron(const DenseOperator &a, const DenseOperator &b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DenseOperator single_site(PauliAxis axis) {
  DenseOperator m(2, 2);
  if (axis == PauliAxis::X)
    m << 0.0, 1.0, 1.0, 0.0;
  else
    m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

} // namespace detail

/// Kronecker product over all sites: the term's Pauli on its sites, identity elsewhere,
/// scaled by the coefficient. Site 0 is the leftmost factor.
inline DenseOperator pauli_string_dense(std::size_t n_sites, const PauliTerm &term) {
  detail::check_dense(n_sites);
  if (term.max_site() >= n_sites)
    throw std::out_of_range("pauli_string_dense: site out of range");
  DenseOperator out = DenseOperator::Identity(1, 1) * cplx(term.coefficient());
  auto f = term.factors().begin();
  for (std::size_t s = 0; s < n_sites; ++s) {
    if (f != term.factors().end() && f->site == s) {
      out = detail::kron(out, detail::single_site(f->axis));
      ++f;
    } else {
      out = detail::kron(out, DenseOperator::Identity(2, 2));
    }
  }
  return out;
}

/// I^(site) (x) sigma (x) I^(n_sites - site - 1).
inline DenseOperator extended_pauli(std::size_t n_sites, std::size_t site, PauliAxis axis) {
  detail::check_dense(n_sites);
  if (site >= n_sites)
    throw std::out_of_range("extended_pauli: site " + std::to_string(site) + " out of range for " +
                            std::to_string(n_sites) + " sites");
  return pauli_string_dense(n_sites, PauliTerm(1.0, {{site, axis}}));
}

inline DenseOperator build_hamiltonian_dense(const HamiltonianSpec &spec) {
  const std::size_t n = spec.n_sites();
  detail::check_dense(n);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  DenseOperator h = DenseOperator::Zero(dim, dim);
  for (const auto &t : spec.terms())
    h += pauli_string_dense(n, t);
  return h;
}

} // namespace tfim
