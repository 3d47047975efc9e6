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

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "tfim/operators.hpp"
#include "tfim/state_vector.hpp"

namespace tfim {

/// Independent, reproducible random stream keyed by (master seed, stream id).
/// The same key always yields the same draws, whatever thread consumes it.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Stream id for sample `sample_index` of field value `h_index`.
  static constexpr std::uint64_t id_for(std::uint64_t h_index, std::uint64_t sample_index) {
    return (h_index << 32) | (sample_index & 0xffffffffULL);
  }

  [[nodiscard]] std::mt19937_64 engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
  }
};

enum class StateMode {
  /// Uniform on the unit sphere of the full Hilbert space.
  Haar,
  /// Tensor product of independent Haar-random single-spin states.
  ProductRandom,
};

inline std::string_view to_string(StateMode m) { return m == StateMode::Haar ? "haar" : "product-random"; }

inline StateMode parse_state_mode(std::string_view s) {
  if (s == "haar")
    return StateMode::Haar;
  if (s == "product-random")
    return StateMode::ProductRandom;
  throw std::invalid_argument("unknown state mode '" + std::string(s) + "'");
}

/// Fills `amps` with i.i.d. complex standard normals and normalises.
inline void fill_haar(std::span<cplx> amps, std::mt19937_64 &rng) {
  boost::random::normal_distribution<double> normal;
  double n2 = 0.0;
  for (auto &a : amps) {
    const double re = normal(rng);
    const double im = normal(rng);
    a = {re, im};
    n2 += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (auto &a : amps)
    a *= inv;
}

/// Haar-random pure state on n_sites spins drawn from `stream`.
inline StateVector random_state(std::size_t n_sites, const RngStream &stream,
                                StateMode mode = StateMode::Haar) {
  StateVector psi(n_sites);
  auto rng = stream.engine();
  if (mode == StateMode::Haar) {
    fill_haar(psi.amplitudes(), rng);
    return psi;
  }
  // Product state: build the Kronecker product site by site, site 0 leading.
  auto amps = psi.amplitudes();
  std::size_t len = 1;
  amps[0] = 1.0;
  for (std::size_t s = 0; s < n_sites; ++s) {
    std::array<cplx, 2> spin{};
    fill_haar(spin, rng);
    for (std::size_t k = len; k-- > 0;) {
      const cplx a = amps[k];
      amps[2 * k] = a * spin[0];
      amps[2 * k + 1] = a * spin[1];
    }
    len *= 2;
  }
  return psi;
}

namespace detail {

inline double checked_real(cplx v, std::string_view what) {
  if (std::abs(v.imag()) > 1e-8)
    throw std::logic_error(std::string(what) + ": imaginary residue " + std::to_string(v.imag()) +
                           " exceeds 1e-8");
  return v.real();
}

inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    acc += std::conj(a[k]) * b[k];
  return acc;
}

} // namespace detail

/// Re <psi|H|psi> through the matrix-free kernel. `workspace` must hold 2^N amplitudes.
inline double expectation_energy(const StateVector &psi, const HamiltonianSpec &spec,
                                 std::span<cplx> workspace) {
  if (psi.n_sites() != spec.n_sites())
    throw std::invalid_argument("expectation_energy: dimension mismatch");
  apply_hamiltonian(psi.amplitudes(), workspace, spec);
  return detail::checked_real(detail::inner(psi.amplitudes(), workspace), "expectation_energy");
}

inline double expectation_energy(const StateVector &psi, const HamiltonianSpec &spec) {
  std::vector<cplx> work(psi.dimension());
  return expectation_energy(psi, spec, work);
}

/// <psi|P|psi> for a Pauli string, scaled by its coefficient.
inline double expectation_pauli(const StateVector &psi, const PauliTerm &term) {
  const auto [xm, zm] = term.masks(psi.n_sites());
  if (term.max_site() >= psi.n_sites())
    throw std::out_of_range("expectation_pauli: site out of range");
  const auto a = psi.amplitudes();
  cplx acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    // <k^x| P |k> = (-1)^{|k & z|}
    const cplx v = std::conj(a[k ^ xm]) * a[k];
    acc += (std::popcount(k & zm) & 1) ? -v : v;
  }
  return term.coefficient() * detail::checked_real(acc, "expectation_pauli");
}

struct Magnetization {
  double mean = 0.0;
  std::vector<double> site_z;
};

/// (1/N) sum_i <Z_i>, together with the per-site values.
inline Magnetization magnetization(const StateVector &psi) {
  const std::size_t n = psi.n_sites();
  Magnetization m{0.0, std::vector<double>(n, 0.0)};
  const auto a = psi.amplitudes();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double p = std::norm(a[k]);
    for (std::size_t i = 0; i < n; ++i)
      m.site_z[i] += (k & site_mask(n, i)) ? -p : p;
  }
  for (double z : m.site_z)
    m.mean += z;
  m.mean /= static_cast<double>(n);
  return m;
}

/// Every Z-string expectation at once: on return out[mask] = <prod_{i in mask} Z_i>,
/// with bits laid out as in `site_mask`. Walsh-Hadamard transform of the Born
/// probabilities, O(N 2^N).
inline void z_string_expectations(const StateVector &psi, std::span<double> out) {
  const auto a = psi.amplitudes();
  if (out.size() != a.size())
    throw std::invalid_argument("z_string_expectations: workspace size mismatch");
  for (std::size_t k = 0; k < a.size(); ++k)
    out[k] = std::norm(a[k]);
  for (std::size_t half = 1; half < out.size(); half <<= 1) {
    for (std::size_t base = 0; base < out.size(); base += 2 * half) {
      for (std::size_t k = base; k < base + half; ++k) {
        const double u = out[k], v = out[k + half];
        out[k] = u + v;
        out[k + half] = u - v;
      }
    }
  }
}

} // namespace tfim
