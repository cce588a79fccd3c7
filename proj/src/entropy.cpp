#include "adaspec/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "adaspec/errors.hpp"
#include "adaspec/rng.hpp"

namespace adaspec {

ProbabilityDensity normalize_region(const SpectrogramTile& tile, const RegionRect& region) {
  const Eigen::Index rows = tile.values.rows();
  const Eigen::Index cols = tile.values.cols();
  if (region.frame_begin < 0 || region.frame_end > rows ||
      region.frame_begin >= region.frame_end || region.bin_begin < 0 ||
      region.bin_end > cols || region.bin_begin >= region.bin_end)
    throw std::invalid_argument("normalize_region: region empty or out of bounds");

  const auto block = tile.values.block(region.frame_begin, region.bin_begin,
                                       region.frame_end - region.frame_begin,
                                       region.bin_end - region.bin_begin);
  const double sum = block.sum();
  if (!(sum > 0.0))
    throw ZeroEnergyRegion("normalize_region: region has zero energy");

  ProbabilityDensity d;
  d.p = (block / sum).reshaped();
  d.area_element = tile.area_element;
  return d;
}

namespace {

// Value-sorted accumulation: permutation invariant and accurate for the
// wide dynamic ranges spectrogram densities produce.
double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

double renyi_entropy(const ProbabilityDensity& d, RenyiOrder order,
                     bool include_cell_term) {
  const double alpha = order.alpha;
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("renyi_entropy: order must be finite and >= 0");
  if (d.p.size() < 1) throw std::invalid_argument("renyi_entropy: empty density");
  if (!(d.area_element > 0.0))
    throw std::invalid_argument("renyi_entropy: area element must be positive");

  double bits;
  if (alpha == 0.0) {
    const Eigen::Index nonzero = (d.p > 0.0).count();
    bits = std::log2(static_cast<double>(nonzero));
  } else if (alpha == 1.0) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(d.p.size()));
    for (Eigen::Index i = 0; i < d.p.size(); ++i) {
      const double p = d.p[i];
      if (p > 0.0) terms.push_back(-p * std::log2(p));
    }
    bits = sorted_sum(terms);
  } else {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(d.p.size()));
    for (Eigen::Index i = 0; i < d.p.size(); ++i) {
      const double p = d.p[i];
      if (p > 0.0) terms.push_back(std::pow(p, alpha));
    }
    bits = std::log2(sorted_sum(terms)) / (1.0 - alpha);
  }
  if (include_cell_term) bits += std::log2(d.area_element);
  return bits;
}

ProbabilityDensity dm_family(int n, int m, std::uint32_t seed) {
  if (n < 1 || m < 1 || m > n)
    throw std::invalid_argument("dm_family: need 1 <= m <= n");

  std::mt19937 gen(seed);
  Eigen::ArrayXd d(n);
  for (int k = 0; k < n; ++k) {
    // Normal draws centered in (0,1); out-of-range draws are regenerated so
    // every entry stays strictly positive.
    double x;
    do {
      x = 0.5 + rng::gaussian(gen) / 6.0;
    } while (!(x > 0.0 && x <= 1.0));
    d[k] = x;
  }
  for (int k = m; k < n; ++k) d[k] /= 20.0;
  d /= d.sum();

  ProbabilityDensity out;
  out.p = d;
  out.area_element = 1.0;
  return out;
}

}  // namespace adaspec
