#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "adaspec/stft.hpp"

namespace adaspec {

// Normalized nonnegative density. area_element carries the tile's
// time-frequency cell area (1 for abstract densities).
struct ProbabilityDensity {
  Eigen::ArrayXd p;
  double area_element = 1.0;
};

// Entropy order alpha >= 0. alpha == 1 is handled by the Shannon limit,
// alpha == 0 counts the strictly positive entries.
struct RenyiOrder {
  double alpha = 0.7;
};

// Half-open index rectangle into a tile: frames [frame_begin, frame_end),
// bins [bin_begin, bin_end).
struct RegionRect {
  Eigen::Index frame_begin = 0, frame_end = 0;
  Eigen::Index bin_begin = 0, bin_end = 0;
};

inline RegionRect full_region(const SpectrogramTile& tile) {
  return {0, tile.values.rows(), 0, tile.values.cols()};
}

// Flattened region divided by its sum; area_element copied from the tile.
// Throws ZeroEnergyRegion when the region sums to zero.
ProbabilityDensity normalize_region(const SpectrogramTile& tile, const RegionRect& region);

// Renyi entropy in bits:
//   alpha not in {0,1}:  log2(sum p^alpha) / (1 - alpha)
//   alpha == 1:          -sum p*log2(p)        (0*log 0 := 0)
//   alpha == 0:          log2(#{p > 0})
// include_cell_term adds log2(area_element), which makes values comparable
// across lattices with different hops/FFT sizes. Summation is value-sorted,
// so the result is exactly permutation invariant.
double renyi_entropy(const ProbabilityDensity& d, RenyiOrder order,
                     bool include_cell_term = false);

// Synthetic density family for the order study: N truncated-normal draws in
// (0,1], entries beyond the first m divided by 20, then normalized. The
// underlying draw depends only on (n, seed), so varying m keeps the same
// base vector. All entries stay strictly positive.
ProbabilityDensity dm_family(int n, int m, std::uint32_t seed);

}  // namespace adaspec
