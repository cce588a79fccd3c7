#include "adaspec/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "adaspec/rng.hpp"

namespace adaspec {

namespace detail {

Eigen::ArrayXd hanning_taps(Eigen::Index length) {
  if (length < 1) throw std::invalid_argument("hanning: length must be >= 1");
  Eigen::ArrayXd taps(length);
  for (Eigen::Index k = 0; k < length; ++k) {
    // Reduce to m/length in [0, 1/2] so symmetric taps are bitwise equal and
    // the quarter-period values come out exact.
    Eigen::Index m = std::min(k, length - k);
    double t;
    if (2 * m == length) {
      t = 1.0;
    } else if (4 * m == length) {
      t = 0.5;
    } else if (4 * m < length) {
      t = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(m) /
                               static_cast<double>(length));
    } else {
      t = 0.5 + 0.5 * std::cos(M_PI * static_cast<double>(length - 2 * m) /
                               static_cast<double>(length));
    }
    taps[k] = t;
  }
  return taps;
}

}  // namespace detail

Window make_hanning(Eigen::Index length) {
  Window w;
  w.taps = detail::hanning_taps(length);
  w.scale = 1.0;
  w.origin_length = length;
  return w;
}

Window scale_window(const Window& base, double l) {
  if (!(l > 0.0) || !std::isfinite(l))
    throw std::invalid_argument("scale_window: scale must be a positive real");
  const Eigen::Index length = static_cast<Eigen::Index>(
      std::llround(l * static_cast<double>(base.origin_length)));
  if (length < 1)
    throw std::invalid_argument("scale_window: scaled length rounds to zero");
  Window w;
  w.taps = detail::hanning_taps(length) * (1.0 / std::sqrt(l));
  w.scale = l;
  w.origin_length = base.origin_length;
  return w;
}

namespace {

double require_param(const ParamMap& params, const char* name) {
  auto it = params.find(name);
  if (it == params.end() || !std::isfinite(it->second))
    throw std::invalid_argument(std::string("synth_test_signal: missing or invalid param '") +
                                name + "'");
  return it->second;
}

double optional_param(const ParamMap& params, const char* name, double fallback) {
  auto it = params.find(name);
  if (it == params.end()) return fallback;
  if (!std::isfinite(it->second))
    throw std::invalid_argument(std::string("synth_test_signal: invalid param '") + name + "'");
  return it->second;
}

}  // namespace

Signal synth_test_signal(SignalKind kind, const ParamMap& params,
                         double duration_sec, double sample_rate,
                         std::uint32_t seed) {
  if (!(duration_sec > 0.0))
    throw std::invalid_argument("synth_test_signal: duration must be positive");
  if (!(sample_rate > 0.0))
    throw std::invalid_argument("synth_test_signal: sample rate must be positive");
  const Eigen::Index n =
      static_cast<Eigen::Index>(std::llround(duration_sec * sample_rate));
  if (n < 1) throw std::invalid_argument("synth_test_signal: empty signal");

  Signal out;
  out.sample_rate = sample_rate;
  out.samples = Eigen::ArrayXd::Zero(n);

  switch (kind) {
    case SignalKind::sine: {
      const double freq = require_param(params, "freq");
      for (Eigen::Index k = 0; k < n; ++k)
        out.samples[k] = std::sin(2.0 * M_PI * freq * static_cast<double>(k) / sample_rate);
      break;
    }
    case SignalKind::fm_sine: {
      const double carrier = require_param(params, "carrier");
      const double mod_rate = require_param(params, "mod_rate");
      const double mod_depth = require_param(params, "mod_depth");
      if (!(mod_rate > 0.0))
        throw std::invalid_argument("synth_test_signal: mod_rate must be positive");
      // phase(t) = 2*pi*carrier*t + (depth/rate)*(1 - cos(2*pi*rate*t)), so the
      // instantaneous frequency is carrier + depth*sin(2*pi*rate*t).
      for (Eigen::Index k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / sample_rate;
        const double phase = 2.0 * M_PI * carrier * t +
                             (mod_depth / mod_rate) * (1.0 - std::cos(2.0 * M_PI * mod_rate * t));
        out.samples[k] = std::sin(phase);
      }
      break;
    }
    case SignalKind::impulse: {
      const double pos = require_param(params, "position");
      const Eigen::Index idx = static_cast<Eigen::Index>(std::llround(pos));
      if (idx < 0 || idx >= n)
        throw std::invalid_argument("synth_test_signal: impulse position out of range");
      out.samples[idx] = 1.0;
      break;
    }
    case SignalKind::percussive_harmonic: {
      const double fundamental = require_param(params, "fundamental");
      const double decay_rate = require_param(params, "decay_rate");
      const Eigen::Index burst_len = static_cast<Eigen::Index>(
          std::llround(require_param(params, "noise_burst_len")));
      const double onset_sec = optional_param(params, "onset", 0.0);
      if (!(fundamental > 0.0) || !(decay_rate > 0.0) || burst_len < 0 || onset_sec < 0.0)
        throw std::invalid_argument("synth_test_signal: invalid percussive_harmonic params");
      const Eigen::Index onset = static_cast<Eigen::Index>(std::llround(onset_sec * sample_rate));
      if (onset >= n)
        throw std::invalid_argument("synth_test_signal: onset beyond signal end");

      // Four harmonics, higher partials decaying faster; stand-in for a
      // struck-bar tone.
      for (Eigen::Index k = onset; k < n; ++k) {
        const double t = static_cast<double>(k - onset) / sample_rate;
        double v = 0.0;
        for (int h = 1; h <= 4; ++h) {
          v += (0.5 / h) * std::exp(-decay_rate * h * t) *
               std::sin(2.0 * M_PI * fundamental * h * t);
        }
        out.samples[k] = v;
      }
      // The strike dominates the resonance, as on the instrument.
      std::mt19937 gen(seed);
      const Eigen::Index burst_end = std::min<Eigen::Index>(n, onset + burst_len);
      for (Eigen::Index k = onset; k < burst_end; ++k)
        out.samples[k] += 2.0 * rng::uniform_pm1(gen);
      break;
    }
  }
  return out;
}

}  // namespace adaspec
