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

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tfim {

using cplx = std::complex<double>;

/// Largest register the simulator will allocate (2^26 amplitudes = 1 GiB).
inline constexpr std::size_t kMaxSites = 26;

/// Bit mask selecting `site` in a basis index. Site 0 is the most significant
/// bit; a clear bit is spin-up (Z = +1).
constexpr std::uint64_t site_mask(std::size_t n_sites, std::size_t site) noexcept {
  return std::uint64_t{1} << (n_sites - 1 - site);
}

/// Dense amplitude vector over 2^n_sites basis states. Sampled and constructed
/// states are unit-norm; the result of applying an operator generally is not.
class StateVector {
public:
  StateVector() = default;

  /// |0...0> (all spins up).
  explicit StateVector(std::size_t n_sites) : n_sites_(checked(n_sites)), amps_(dim(n_sites)) {
    amps_[0] = 1.0;
  }

  StateVector(std::size_t n_sites, std::vector<cplx> amplitudes)
      : n_sites_(checked(n_sites)), amps_(std::move(amplitudes)) {
    if (amps_.size() != dim(n_sites_))
      throw std::invalid_argument("StateVector: expected " + std::to_string(dim(n_sites_)) +
                                  " amplitudes, got " + std::to_string(amps_.size()));
  }

  /// Computational basis state; bit pattern follows `site_mask`.
  static StateVector basis(std::size_t n_sites, std::uint64_t index) {
    StateVector s(n_sites);
    if (index >= s.dimension())
      throw std::out_of_range("StateVector::basis: index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  /// Normalises `amplitudes` on the way in.
  static StateVector normalized(std::size_t n_sites, std::vector<cplx> amplitudes) {
    StateVector s(n_sites, std::move(amplitudes));
    s.normalize();
    return s;
  }

  [[nodiscard]] std::size_t n_sites() const noexcept { return n_sites_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return amps_.size(); }
  [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amps_; }
  [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amps_; }
  [[nodiscard]] const cplx &operator[](std::size_t i) const { return amps_[i]; }
  [[nodiscard]] cplx &operator[](std::size_t i) { return amps_[i]; }

  [[nodiscard]] double squared_norm() const noexcept {
    double acc = 0.0;
    for (const auto &a : amps_)
      acc += std::norm(a);
    return acc;
  }

  void normalize() {
    const double n2 = squared_norm();
    if (!(n2 > 0.0) || !std::isfinite(n2))
      throw std::domain_error("StateVector::normalize: zero or non-finite norm");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto &a : amps_)
      a *= inv;
  }

  friend bool operator==(const StateVector &, const StateVector &) = default;

private:
  static std::size_t dim(std::size_t n) { return std::size_t{1} << n; }
  static std::size_t checked(std::size_t n) {
    if (n < 1 || n > kMaxSites)
      throw std::invalid_argument("StateVector: n_sites must be in [1, " +
                                  std::to_string(kMaxSites) + "], got " + std::to_string(n));
    return n;
  }

  std::size_t n_sites_ = 0;
  std::vector<cplx> amps_;
};

} // namespace tfim
