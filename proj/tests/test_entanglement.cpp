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
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "tfim/analysis.hpp"
#include "tfim/entanglement.hpp"
#include "tfim/states.hpp"

using namespace tfim;

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::vector<cplx> amps(const StateVector &s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

StateVector ghz(std::size_t n) {
  std::vector<cplx> a(std::size_t{1} << n);
  a.front() = a.back() = 1.0 / std::sqrt(2.0);
  return StateVector(n, a);
}

/// Same state with the two blocks swapped: sites [split, N) move to the front.
StateVector swap_blocks(const StateVector &psi, std::size_t split) {
  const std::size_t n = psi.n_sites(), nb = n - split;
  std::vector<cplx> out(psi.dimension());
  for (std::size_t a = 0; a < (std::size_t{1} << split); ++a)
    for (std::size_t b = 0; b < (std::size_t{1} << nb); ++b)
      out[(b << split) | a] = psi[(a << nb) | b];
  return StateVector(n, out);
}

/// Applies a 2x2 unitary to one site.
StateVector rotate_site(const StateVector &psi, std::size_t site, const cplx u[2][2]) {
  const auto m = site_mask(psi.n_sites(), site);
  StateVector out = psi;
  for (std::size_t k = 0; k < psi.dimension(); ++k) {
    if (k & m)
      continue;
    const cplx a0 = psi[k], a1 = psi[k | m];
    out[k] = u[0][0] * a0 + u[0][1] * a1;
    out[k | m] = u[1][0] * a0 + u[1][1] * a1;
  }
  return out;
}

} // namespace

TEST(SchmidtSpectrum, ProductState) {
  const auto s = schmidt_spectrum(StateVector(4), 2);
  ASSERT_FALSE(s.values.empty());
  EXPECT_NEAR(s.values[0], 1.0, 1e-12);
  for (std::size_t k = 1; k < s.values.size(); ++k)
    EXPECT_NEAR(s.values[k], 0.0, 1e-12);
}

TEST(SchmidtSpectrum, BellPairTimesProduct) {
  // (|00> + |11>)/sqrt2 on sites 0,1, sites 2,3 up.
  std::vector<cplx> a(16);
  a[0b0000] = a[0b1100] = 1.0 / std::sqrt(2.0);
  const auto s = schmidt_spectrum(StateVector(4, a), 1);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0], 0.5, 1e-12);
  EXPECT_NEAR(s.values[1], 0.5, 1e-12);
}

TEST(SchmidtSpectrum, MatchesBruteForcePartialTrace) {
  std::uint64_t stream = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t split = 1; split < n; ++split) {
      for (int k = 0; k < 5; ++k) {
        const auto psi = random_state(n, {17, stream++});
        const auto got = schmidt_spectrum(psi, split).values;
        const auto want = oracle::reduced_spectrum(amps(psi), n, split);
        // Oracle has 2^split values; the Gram route keeps the smaller side.
        double sum = 0.0;
        for (std::size_t i = 0; i < want.size(); ++i) {
          const double g = i < got.size() ? got[i] : 0.0;
          EXPECT_NEAR(g, want[i], 1e-10) << "n=" << n << " split=" << split;
        }
        for (double v : got) {
          EXPECT_GE(v, 0.0);
          EXPECT_LE(v, 1.0 + 1e-12);
          sum += v;
        }
        EXPECT_NEAR(sum, 1.0, 1e-10);
        EXPECT_LE(got.size(), std::size_t{1} << std::min(split, n - split));
      }
    }
  }
}

TEST(SchmidtSpectrum, Errors) {
  EXPECT_THROW(schmidt_spectrum(StateVector(4), 0), std::out_of_range);
  EXPECT_THROW(schmidt_spectrum(StateVector(4), 4), std::out_of_range);
  EXPECT_THROW(schmidt_spectrum(StateVector(2, {1.0, 1.0, 0.0, 0.0}), 1), std::invalid_argument);
}

TEST(VonNeumannEntropy, Examples) {
  EXPECT_DOUBLE_EQ(von_neumann_entropy({{1.0}}), 0.0);
  EXPECT_NEAR(von_neumann_entropy({{0.5, 0.5}}), kLn2, 1e-15);
  for (std::size_t n : {2u, 4u, 8u}) {
    const std::size_t m = std::size_t{1} << (n / 2);
    SchmidtSpectrum uniform{std::vector<double>(m, 1.0 / static_cast<double>(m))};
    EXPECT_NEAR(von_neumann_entropy(uniform), static_cast<double>(n / 2) * kLn2, 1e-12);
  }
  // Below the floor counts as an exact zero.
  EXPECT_DOUBLE_EQ(von_neumann_entropy({{1.0, 1e-13}}), 0.0);
  EXPECT_NEAR(convert_entropy(kLn2, EntropyUnit::Bits), 1.0, 1e-15);
}

TEST(HalfSplitEntropy, Examples) {
  EXPECT_NEAR(half_split_entropy(ghz(4)), kLn2, 1e-10);
  for (std::size_t n : {2u, 4u, 6u, 8u}) {
    EXPECT_NEAR(half_split_entropy(StateVector(n)), 0.0, 1e-10);
    EXPECT_NEAR(half_split_entropy(random_state(n, {1, n}, StateMode::ProductRandom)), 0.0, 1e-10);
  }
  EXPECT_THROW(half_split_entropy(StateVector(3)), std::invalid_argument);
}

TEST(Entanglement, SymmetricUnderSwappingSubsystems) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 2 + s % 5;
    const std::size_t split = 1 + s % (n - 1);
    const auto psi = random_state(n, {4, s});
    const double sa = von_neumann_entropy(schmidt_spectrum(psi, split));
    const double sb = von_neumann_entropy(schmidt_spectrum(swap_blocks(psi, split), n - split));
    EXPECT_NEAR(sa, sb, 1e-10);
    EXPECT_GE(sa, 0.0);
    EXPECT_LE(sa, static_cast<double>(std::min(split, n - split)) * kLn2 + 1e-10);
  }
}

TEST(Entanglement, InvariantUnderLocalUnitariesOnA) {
  const double t = 0.73, p = 1.9;
  const cplx u[2][2] = {{std::cos(t), -std::sin(t) * std::polar(1.0, -p)},
                        {std::sin(t) * std::polar(1.0, p), std::cos(t)}};
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto psi = random_state(4, {6, s});
    const auto rotated = rotate_site(rotate_site(psi, 0, u), 1, u);
    EXPECT_NEAR(half_split_entropy(psi), half_split_entropy(rotated), 1e-10);
    std::vector<cplx> phased = amps(psi);
    for (auto &a : phased)
      a *= std::polar(1.0, 2.1);
    EXPECT_NEAR(half_split_entropy(psi), half_split_entropy(StateVector(4, phased)), 1e-12);
  }
}

TEST(PageLaw, ExactFiniteSizeValues) {
  // Exact rationals H_{mn} - H_n - (m-1)/(2n), evaluated with Python fractions.
  EXPECT_NEAR(page_mean_entropy(4, 4), 0.9223956598956599, 1e-14);
  EXPECT_NEAR(page_mean_entropy(16, 16), 2.274865969588287, 1e-13);
  EXPECT_NEAR(page_mean_entropy(256, 256), 5.045186345418506, 1e-12);
  EXPECT_NEAR(page_mean_entropy_asymptotic(4, 4), 0.886294361119890, 1e-14);
  EXPECT_NEAR(page_mean_entropy(2, 1), page_mean_entropy(1, 2), 0.0);
}

// Monte Carlo through both the production path and the brute-force partial
// trace; per-sample agreement plus the ensemble mean against the exact Page
// value. The asymptotic ln d_A - d_A/(2 d_B) = 0.886294 sits 4% below the exact
// N = 4 mean and is not used as the target here.
TEST(PageLaw, HaarMeanEntropyFourSites) {
  RunningStats fast, brute;
  for (std::uint64_t s = 0; s < 5000; ++s) {
    const auto psi = random_state(4, {2024, s});
    const double a = half_split_entropy(psi);
    fast.push(a);
    if (s < 1000) {
      const double b = oracle::entropy(oracle::reduced_spectrum(amps(psi), 4, 2));
      EXPECT_NEAR(a, b, 1e-10);
      brute.push(b);
    }
  }
  EXPECT_NEAR(fast.mean(), page_mean_entropy(4, 4), 0.02 * page_mean_entropy(4, 4));
  EXPECT_LT(std::abs(fast.mean() - page_mean_entropy(4, 4)), 4.0 * fast.standard_error());
  EXPECT_NEAR(brute.mean(), page_mean_entropy(4, 4), 0.02 * page_mean_entropy(4, 4));
}

TEST(PageLaw, HaarMeanEntropyEightSites) {
  RunningStats s8;
  for (std::uint64_t s = 0; s < 2000; ++s)
    s8.push(half_split_entropy(random_state(8, {77, s})));
  EXPECT_NEAR(s8.mean(), page_mean_entropy(16, 16), 0.02 * page_mean_entropy(16, 16));
  EXPECT_NEAR(s8.mean(), page_mean_entropy_asymptotic(16, 16), 0.02 * 2.272589);
}
