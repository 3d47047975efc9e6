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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <cblas.h>
#include <lapacke.h>

#include "tfim/state_vector.hpp"

namespace tfim {

/// Eigenvalues of the reduced density matrix, descending.
struct SchmidtSpectrum {
  std::vector<double> values;
};

/// Amplitudes viewed as a 2^|A| x 2^|B| matrix: row = bits of sites [0, split),
/// column = bits of the remaining sites. Row-major storage makes this a plain view.
using BipartiteView =
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

inline BipartiteView bipartite_view(const StateVector &psi, std::size_t split_site) {
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << split_site);
  const auto cols = static_cast<Eigen::Index>(std::size_t{1} << (psi.n_sites() - split_site));
  return {psi.amplitudes().data(), rows, cols};
}

/// Schmidt coefficients squared for the cut between sites [0, split_site) and the rest.
///
/// These are the squared singular values of the reshaped amplitude matrix M. They
/// are obtained as the eigenvalues of the Gram matrix on the smaller side
/// (M M^H or M^H M, at most 2^(N/2) square), so the 2^N x 2^N density matrix is
/// never formed. Round-off is clamped into [0, 1].
inline SchmidtSpectrum schmidt_spectrum(const StateVector &psi, std::size_t split_site) {
  if (split_site < 1 || split_site >= psi.n_sites())
    throw std::out_of_range("schmidt_spectrum: split " + std::to_string(split_site) +
                            " outside [1, " + std::to_string(psi.n_sites() - 1) + "]");
  if (std::abs(psi.squared_norm() - 1.0) > 1e-8)
    throw std::invalid_argument("schmidt_spectrum: state is not normalised");

  const auto d_a = static_cast<blasint>(std::size_t{1} << split_site);
  const auto d_b = static_cast<blasint>(std::size_t{1} << (psi.n_sites() - split_site));
  const bool rows_smaller = d_a <= d_b;
  const blasint n = rows_smaller ? d_a : d_b;
  const blasint k = rows_smaller ? d_b : d_a;

  std::vector<cplx> gram(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  cblas_zherk(CblasRowMajor, CblasLower, rows_smaller ? CblasNoTrans : CblasConjTrans, n, k, 1.0,
              psi.amplitudes().data(), d_b, 0.0, gram.data(), n);

  SchmidtSpectrum out;
  out.values.resize(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'L', n,
                     reinterpret_cast<lapack_complex_double *>(gram.data()), n, out.values.data());
  if (info != 0)
    throw std::runtime_error("schmidt_spectrum: zheevd failed with info " + std::to_string(info));
  for (auto &l : out.values)
    l = std::clamp(l, 0.0, 1.0);
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

/// Eigenvalues below this are treated as exact zeros (0 log 0 = 0).
inline constexpr double kSpectrumFloor = 1e-12;

/// -sum lambda ln lambda, in nats.
inline double von_neumann_entropy(const SchmidtSpectrum &spectrum) {
  double s = 0.0;
  for (double l : spectrum.values)
    if (l >= kSpectrumFloor)
      s -= l * std::log(l);
  return std::max(s, 0.0);
}

enum class EntropyUnit { Nats, Bits };

inline double convert_entropy(double nats, EntropyUnit unit) {
  return unit == EntropyUnit::Nats ? nats : nats / std::numbers::ln2;
}

/// Entropy of the first N/2 sites (row-major prefix) against the rest.
inline double half_split_entropy(const StateVector &psi) {
  if (psi.n_sites() % 2 != 0)
    throw std::invalid_argument("half_split_entropy: odd number of sites (" +
                                std::to_string(psi.n_sites()) + ")");
  return von_neumann_entropy(schmidt_spectrum(psi, psi.n_sites() / 2));
}

/// Mean entanglement entropy of a Haar-random state of dimension d_a * d_b,
/// exact finite-size form: sum_{k=d_b+1}^{d_a d_b} 1/k - (d_a - 1) / (2 d_b), d_a <= d_b.
inline double page_mean_entropy(std::size_t d_a, std::size_t d_b) {
  if (d_a > d_b)
    std::swap(d_a, d_b);
  double s = 0.0;
  for (std::size_t k = d_a * d_b; k > d_b; --k)
    s += 1.0 / static_cast<double>(k);
  return s - static_cast<double>(d_a - 1) / (2.0 * static_cast<double>(d_b));
}

/// Large-dimension approximation ln d_a - d_a / (2 d_b), d_a <= d_b.
inline double page_mean_entropy_asymptotic(std::size_t d_a, std::size_t d_b) {
  if (d_a > d_b)
    std::swap(d_a, d_b);
  return std::log(static_cast<double>(d_a)) -
         static_cast<double>(d_a) / (2.0 * static_cast<double>(d_b));
}

} // namespace tfim
