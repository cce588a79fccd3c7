#pragma once

#include <Eigen/Dense>
#include <utility>

#include "adaspec/signal.hpp"

namespace adaspec {

// Regular analysis lattice: time step `hop` in samples, frequency step
// sample_rate/fft_size in Hz.
struct Lattice {
  Eigen::Index hop = 0;
  Eigen::Index fft_size = 0;
};

// STFT coefficients, one frame per row. Frame n covers samples
// [start_sample + n*hop, start_sample + n*hop + window length).
struct StftMatrix {
  Eigen::MatrixXcd coeffs;  // num_frames x fft_size
  Lattice lattice;
  Window window;
  Eigen::Index start_sample = 0;

  Eigen::Index num_frames() const { return coeffs.rows(); }
};

// Squared-magnitude coefficients plus the time-frequency cell area
// hop/fft_size (seconds times Hz, dimensionless).
struct SpectrogramTile {
  Eigen::ArrayXXd values;  // num_frames x fft_size, all >= 0
  Lattice lattice;
  double area_element = 0.0;
};

// Left-aligned framing over full frames only (no implicit padding):
// frame n is the DFT of samples[n*hop ... n*hop+len) * taps, zero-padded
// to fft_size. Requires fft_size >= window length and signal >= window.
StftMatrix stft(const Signal& signal, const Window& window, const Lattice& lattice,
                Eigen::Index start_sample = 0);

SpectrogramTile spectrogram(const StftMatrix& m);

// s(t) = sum_n taps^2(t - n*hop) with the shifts running over all of Z,
// i.e. the hop-periodic interior part of the squared overlap. The frame
// inequality normally carries a 1/b factor in front of this sum; it is
// omitted here and accounted for by callers where needed.
Eigen::ArrayXd overlap_sum(const Window& window, Eigen::Index hop,
                           Eigen::Index begin, Eigen::Index end);

// (A, B) = (min, max) of overlap_sum over one interior period. A > 0
// certifies the painless frame condition for this window/hop pair
// (up to the 1/b factor). A == 0 is a reportable outcome, not an error.
std::pair<double, double> frame_bounds_diag(const Window& window, Eigen::Index hop);

}  // namespace adaspec
