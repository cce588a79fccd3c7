#pragma once

#include <Eigen/Dense>
#include <vector>

#include "adaspec/adaptive.hpp"
#include "adaspec/signal.hpp"

namespace adaspec {

// Denominator floor: far above rounding noise, far below any valid frame's
// lower bound.
inline constexpr double kDenominatorFloor = 1e-8;

// The adapted analysis seen as one nonstationary frame: a time-sorted list
// of atoms (window placements), independent of which slice produced them.
struct ReducedFrame {
  struct Atom {
    Eigen::Index start = 0;  // left edge of the window placement
    int window_index = 0;
  };
  std::vector<Atom> atoms;
  std::vector<Window> windows;  // bank the atoms index into
  Eigen::Index coverage_end = 0;
};

// Per-slice multiplicative gains matching the slice coefficient dimensions.
struct SpectralMask {
  std::vector<Eigen::ArrayXXd> gains;
};

ReducedFrame reduced_frame(const AdaptiveSpectrogram& analysis);

// Pointwise sum of squared taps over all contributing atoms, evaluated on
// [begin, end). Used both for the reconstruction division and the frame
// validity check.
Eigen::ArrayXd denominator_profile(const ReducedFrame& reduced,
                                   Eigen::Index begin, Eigen::Index end);

// Variable-window weighted overlap-add: each frame's inverse DFT is a
// windowed segment of the signal; the output is
//   out(t) = sum_atoms taps(t-u) * y_u(t-u) / sum_atoms taps^2(t-u),
// with both sums running over every atom of the reduced frame. For
// unmodified coefficients this reproduces the input to rounding accuracy;
// for masked coefficients it is the least-squares signal for the modified
// slices. Throws NotAFrame if the denominator drops below kDenominatorFloor
// anywhere in the guarded interior (one max window length away from either
// coverage edge); outside the guarded span low-denominator samples are
// written as zero.
Signal reconstruct(const AdaptiveSpectrogram& analysis);

// Coefficients multiplied per slice; everything else is carried over.
AdaptiveSpectrogram apply_mask(const AdaptiveSpectrogram& analysis,
                               const SpectralMask& mask);

// Relative L2 error between `reference` and `test` over the interior span
// [guard, min(len) - guard). Returns 0 for an empty span.
double interior_l2_error(const Signal& reference, const Signal& test,
                         Eigen::Index guard);

}  // namespace adaspec
