#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>

namespace adaspec {

// Finite mono signal with its sample rate.
struct Signal {
  Eigen::ArrayXd samples;
  double sample_rate = 0.0;

  Eigen::Index size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

// Analysis window of the scaled-Hanning family. `scale` is the stretch
// factor relative to the origin window (amplitude carries the 1/sqrt(scale)
// normalization), so length == round(scale * origin_length).
struct Window {
  Eigen::ArrayXd taps;
  double scale = 1.0;
  Eigen::Index origin_length = 0;

  Eigen::Index size() const { return taps.size(); }
};

// Strictly increasing set of window stretch factors.
struct ScaleSet {
  std::vector<double> scales;
};

enum class SignalKind { sine, fm_sine, impulse, percussive_harmonic };

using ParamMap = std::map<std::string, double>;

// Periodic (DFT-even) Hanning window: taps[k] = 0.5 - 0.5*cos(2*pi*k/length).
// taps[0] == 0 for length > 1; peak 1 at k == length/2 for even length.
// Quarter-period taps are computed exactly and taps[k] == taps[length-k] bitwise.
Window make_hanning(Eigen::Index length);

// Stretch the origin Hanning profile by l: round(l*N) taps resampled from the
// continuous profile, each multiplied by 1/sqrt(l). l == 1 reproduces the
// base taps exactly. `l` is relative to the origin window, not to `base`.
Window scale_window(const Window& base, double l);

// Deterministic synthetic test signals.
//   sine:                 freq
//   fm_sine:              carrier, mod_rate, mod_depth
//   impulse:              position (samples)
//   percussive_harmonic:  fundamental, decay_rate, noise_burst_len,
//                         optional onset (seconds, default 0)
// The seed drives any stochastic component (the noise burst).
Signal synth_test_signal(SignalKind kind, const ParamMap& params,
                         double duration_sec, double sample_rate,
                         std::uint32_t seed = 0);

namespace detail {
// Unit-peak periodic Hanning taps (shared by make_hanning and the segment
// pre-weighting, which needs the shape without the 1/sqrt(l) factor).
Eigen::ArrayXd hanning_taps(Eigen::Index length);
}  // namespace detail

}  // namespace adaspec
