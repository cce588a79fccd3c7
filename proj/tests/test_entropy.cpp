#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "adaspec/entropy.hpp"
#include "adaspec/errors.hpp"
#include "oracles.hpp"

using namespace adaspec;

namespace {

SpectrogramTile tile_from(std::initializer_list<double> values, Eigen::Index rows,
                          Eigen::Index cols) {
  SpectrogramTile t;
  t.values.resize(rows, cols);
  Eigen::Index i = 0;
  for (double v : values) t.values(i / cols, i % cols) = v, ++i;
  t.lattice = {1, cols};
  t.area_element = 1.0;
  return t;
}

ProbabilityDensity density(std::initializer_list<double> p) {
  ProbabilityDensity d;
  d.p = Eigen::ArrayXd(static_cast<Eigen::Index>(p.size()));
  Eigen::Index i = 0;
  for (double v : p) d.p[i++] = v;
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("entropy");

TEST_CASE("normalize_region basics") {
  const SpectrogramTile one = tile_from({3.5}, 1, 1);
  const ProbabilityDensity d1 = normalize_region(one, full_region(one));
  REQUIRE(d1.p.size() == 1);
  CHECK(d1.p[0] == 1.0);

  const SpectrogramTile four = tile_from({2.0, 2.0, 2.0, 2.0}, 2, 2);
  const ProbabilityDensity d4 = normalize_region(four, full_region(four));
  CHECK((d4.p == 0.25).all());

  const SpectrogramTile zero = tile_from({0.0, 0.0}, 1, 2);
  CHECK_THROWS_AS(normalize_region(zero, full_region(zero)), ZeroEnergyRegion);

  CHECK_THROWS_AS(normalize_region(four, RegionRect{0, 3, 0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(normalize_region(four, RegionRect{1, 1, 0, 2}), std::invalid_argument);
}

TEST_CASE("normalize_region carries the cell area and sub-rectangles work") {
  SpectrogramTile t = tile_from({1.0, 0.0, 0.0, 3.0, 0.0, 0.0}, 2, 3);
  t.area_element = 0.25;
  const ProbabilityDensity d = normalize_region(t, RegionRect{0, 2, 0, 1});
  CHECK(d.area_element == 0.25);
  REQUIRE(d.p.size() == 2);
  CHECK(d.p[0] == 0.25);
  CHECK(d.p[1] == 0.75);
}

TEST_CASE("uniform and delta densities hit the extremes") {
  ProbabilityDensity uniform;
  uniform.p = Eigen::ArrayXd::Constant(16, 1.0 / 16.0);
  for (double alpha : {0.0, 0.5, 2.0, 5.0})
    CHECK(renyi_entropy(uniform, {alpha}) == doctest::Approx(4.0).epsilon(1e-12));

  ProbabilityDensity delta;
  delta.p = Eigen::ArrayXd::Zero(32);
  delta.p[0] = 1.0;
  for (double alpha : {0.0, 0.5, 1.0, 2.0})
    CHECK(renyi_entropy(delta, {alpha}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quadratic and Shannon orders on a known density") {
  const ProbabilityDensity d = density({0.5, 0.25, 0.25});
  // sum p^2 = 3/8, so H2 = log2(8/3) = 3 - log2(3)
  CHECK(renyi_entropy(d, {2.0}) == doctest::Approx(3.0 - std::log2(3.0)).epsilon(1e-14));
  CHECK(renyi_entropy(d, {2.0}) == doctest::Approx(1.4150374992788437).epsilon(1e-14));
  CHECK(renyi_entropy(d, {1.0}) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("cell term adds exactly log2(area)") {
  ProbabilityDensity d = density({0.5, 0.25, 0.25});
  d.area_element = 0.03125;
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 7.0}) {
    CHECK(renyi_entropy(d, {alpha}, true) ==
          renyi_entropy(d, {alpha}, false) + std::log2(0.03125));
  }
}

TEST_CASE("order validation") {
  const ProbabilityDensity d = density({1.0});
  CHECK_THROWS_AS(renyi_entropy(d, {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(renyi_entropy(d, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("alpha monotonicity, range, and H0 dominance") {
  const double grid[] = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 30.0};
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index len = 10 + (seed % 3) * 45;
    ProbabilityDensity d;
    d.p = oracles::random_density(len, 1000 + seed);
    double prev = 1e300;
    const double h0 = renyi_entropy(d, {0.0});
    for (double alpha : grid) {
      const double h = renyi_entropy(d, {alpha});
      CHECK(h <= prev + 1e-9);
      CHECK(h >= -1e-12);
      CHECK(h <= std::log2(static_cast<double>(len)) + 1e-9);
      CHECK(h0 >= h - 1e-12);
      prev = h;
    }
  }
}

TEST_CASE("Shannon limit") {
  for (Eigen::Index len : {10, 100, 4096}) {
    ProbabilityDensity d;
    d.p = oracles::random_density(len, 77);
    const double h1 = renyi_entropy(d, {1.0});
    CHECK(std::abs(renyi_entropy(d, {1.0 + 1e-4}) - h1) < 1e-3);
    CHECK(std::abs(renyi_entropy(d, {1.0 - 1e-4}) - h1) < 1e-3);
  }
}

TEST_CASE("entropy is exactly permutation invariant") {
  ProbabilityDensity d;
  d.p = oracles::random_density(513, 31);
  std::vector<double> shuffled(d.p.data(), d.p.data() + d.p.size());
  std::mt19937 gen(99);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    ProbabilityDensity s;
    s.p = Eigen::Map<Eigen::ArrayXd>(shuffled.data(), static_cast<Eigen::Index>(shuffled.size()));
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 9.0})
      CHECK(renyi_entropy(s, {alpha}) == renyi_entropy(d, {alpha}));
  }
}

TEST_CASE("attenuated-tail family") {
  const std::uint32_t seed = 42;
  const ProbabilityDensity d_full = dm_family(100, 100, seed);
  CHECK(d_full.p.size() == 100);
  CHECK((d_full.p > 0.0).all());
  CHECK(d_full.p.sum() == doctest::Approx(1.0).epsilon(1e-12));

  // all entries strictly positive, so H0 is the full log2(N) for every m
  for (int m : {1, 10, 50, 100})
    CHECK(renyi_entropy(dm_family(100, m, seed), {0.0}) == std::log2(100.0));

  // peakier densities (small m) score lower at alpha = 2
  CHECK(renyi_entropy(dm_family(100, 10, seed), {2.0}) <
        renyi_entropy(dm_family(100, 90, seed), {2.0}));

  // deterministic under the seed; the base vector ignores m
  const ProbabilityDensity a = dm_family(100, 30, seed);
  const ProbabilityDensity b = dm_family(100, 30, seed);
  CHECK((a.p == b.p).all());
  CHECK_THROWS_AS(dm_family(100, 0, seed), std::invalid_argument);
  CHECK_THROWS_AS(dm_family(100, 101, seed), std::invalid_argument);
}

TEST_CASE("dm_family at m == n is the plain normalized draw") {
  // with no attenuation both densities are proportional to the same base
  // vector, so entrywise ratios against any other m are constant on the
  // shared (un-attenuated) head and on the attenuated tail
  const ProbabilityDensity full = dm_family(100, 100, 5u);
  const ProbabilityDensity part = dm_family(100, 40, 5u);
  const double head_ratio = part.p[0] / full.p[0];
  const double tail_ratio = part.p[99] / full.p[99];
  for (int k = 0; k < 40; ++k)
    CHECK(part.p[k] / full.p[k] == doctest::Approx(head_ratio).epsilon(1e-12));
  for (int k = 40; k < 100; ++k)
    CHECK(part.p[k] / full.p[k] == doctest::Approx(tail_ratio).epsilon(1e-12));
  CHECK(head_ratio / tail_ratio == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_SUITE_END();
