#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "adaspec/entropy.hpp"
#include "adaspec/signal.hpp"
#include "adaspec/stft.hpp"

namespace adaspec {

enum class MultiFrameVersion { v1, v2 };

// Parameters of the multi-frame analysis.
//
// v1: every window shares one lattice. The common hop is
//     round((1-overlap_ratio)*min_len) and must be <= min_len/2; the shared
//     FFT size is the largest window length (smaller windows are zero-padded).
// v2: per-window hops round((1-overlap_ratio)*len) give every frame the same
//     overlap (and so the same redundancy); the FFT size is shared as in v1.
//
// segment_frames counts frames of the common lattice (v1) or of the
// largest-window lattice (v2) per analysis segment; consecutive segments
// overlap by segment_overlap_frames of those frames.
struct MultiFrameConfig {
  MultiFrameVersion version = MultiFrameVersion::v2;
  Eigen::Index min_len = 512;
  Eigen::Index max_len = 4096;
  int num_windows = 8;
  RenyiOrder alpha{0.7};
  int segment_frames = 4;
  int segment_overlap_frames = 2;
  double overlap_ratio = 0.75;
};

// Resolved window bank, lattices and segmentation for one signal.
struct AnalysisPlan {
  MultiFrameVersion version = MultiFrameVersion::v2;
  std::vector<Window> windows;    // ascending lengths; windows.back() is the largest
  std::vector<Lattice> lattices;  // one per window, shared fft_size
  ScaleSet scales;                // stretch factors relative to min_len
  Eigen::Index fft_size = 0;
  Eigen::Index segment_hop = 0;      // lattice step that segment_frames counts
  Eigen::Index segment_len = 0;      // nominal segment length in samples
  Eigen::Index segment_advance = 0;  // start-to-start distance
  std::vector<Eigen::Index> segment_starts;
  Eigen::Index signal_len = 0;
  double sample_rate = 0.0;

  Eigen::Index num_windows() const { return static_cast<Eigen::Index>(windows.size()); }
  Eigen::Index max_window_len() const { return windows.back().size(); }
  Eigen::Index segment_end(std::size_t i) const {
    return std::min(segment_starts[i] + segment_len, signal_len);
  }
};

// Per-segment record of the entropy comparison and the selected scale.
struct SelectionTrack {
  struct Entry {
    Eigen::Index start = 0, end = 0;  // segment sample range
    int chosen = 0;                   // window index into the plan bank
    Eigen::Index window_len = 0;
    std::vector<std::optional<double>> entropy_bits;  // nullopt == silent
  };
  std::vector<Entry> entries;
  double sample_rate = 0.0;
};

// Time-ordered analysis slices with heterogeneous window/hop. Slices keep
// the full complex coefficients so the analysis stays invertible.
struct AdaptiveSpectrogram {
  struct Slice {
    int window_index = 0;
    Eigen::Index hop = 0;
    Eigen::Index first_frame_start = 0;  // frames at first_frame_start + j*hop
    Eigen::MatrixXcd coeffs;             // num_frames x fft_size
    Eigen::Index num_frames() const { return coeffs.rows(); }
  };
  std::vector<Slice> slices;
  AnalysisPlan plan;
  SelectionTrack selection;

  double sample_rate() const { return plan.sample_rate; }
  // One past the last sample covered by any frame.
  Eigen::Index coverage_end() const;
};

// Build the window bank (geometrically spaced lengths rounded to even,
// endpoints exact), lattices, and segment boundaries. Every (window, hop)
// pair is checked against the frame condition; a pair with lower bound
// A == 0 raises InfeasiblePlan.
AnalysisPlan plan(const MultiFrameConfig& config, Eigen::Index signal_len,
                  double sample_rate);

// Weight a segment for entropy evaluation: the head rises with the first
// half of the largest (unit-peak) Hanning window, the tail falls with the
// second half, the interior is untouched. Both versions use this weighting;
// it never feeds the decomposition used for resynthesis.
Eigen::ArrayXd preweight_segment(const Eigen::Ref<const Eigen::ArrayXd>& segment,
                                 const AnalysisPlan& plan);

// Entropy of each scale's local spectrogram over the (weighted) segment,
// normalized over the full tile and including the log2(a*b) cell term so
// values are comparable across lattices. A scale that sees zero energy is
// reported as silent (nullopt).
std::vector<std::optional<double>> evaluate_segment(
    const Eigen::Ref<const Eigen::ArrayXd>& weighted_segment,
    const AnalysisPlan& plan, RenyiOrder alpha);

// Argmin over the non-silent entries; ties break toward the larger window.
// With every entry silent, the previous segment's choice is inherited,
// defaulting to the largest window at signal start.
int select_best(const std::vector<std::optional<double>>& entropy_bits,
                std::optional<int> previous);

// Full pipeline: segment, pre-weight, evaluate, select, then recompute the
// complex slices on the unweighted signal with the chosen windows. Each time
// point takes the choice of the segment whose center is nearest (ties toward
// the earlier segment); a slice starts at the first multiple of its own hop
// at or after the boundary sample.
AdaptiveSpectrogram adapt(const Signal& signal, const MultiFrameConfig& config);

}  // namespace adaspec
