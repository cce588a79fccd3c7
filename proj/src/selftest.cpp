#include "adaspec/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adaspec/adaptive.hpp"
#include "adaspec/entropy.hpp"
#include "adaspec/errors.hpp"
#include "adaspec/resynth.hpp"
#include "adaspec/rng.hpp"
#include "adaspec/signal.hpp"
#include "adaspec/stft.hpp"

namespace adaspec::selftest {

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Signal seeded_noise(double duration, double sample_rate, std::uint32_t seed) {
  Signal s;
  s.sample_rate = sample_rate;
  const Eigen::Index n = static_cast<Eigen::Index>(std::llround(duration * sample_rate));
  s.samples.resize(n);
  std::mt19937 gen(seed);
  for (Eigen::Index i = 0; i < n; ++i) s.samples[i] = rng::uniform_pm1(gen);
  return s;
}

// Entropy (with cell term) of the first `frames` frames of one analysis,
// so every configuration is measured over the same time extent.
double tile_entropy(const Signal& sig, const Window& w, const Lattice& lat,
                    Eigen::Index frames, double alpha) {
  const SpectrogramTile tile = spectrogram(stft(sig, w, lat));
  if (tile.values.rows() < frames)
    throw std::runtime_error("tile_entropy: fewer frames than requested");
  const RegionRect rect{0, frames, 0, tile.values.cols()};
  return renyi_entropy(normalize_region(tile, rect), RenyiOrder{alpha}, true);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[idx[i]] = static_cast<double>(i + 1);
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double mean = (n + 1) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<ProbabilityDensity> random_densities(Eigen::Index len, int count,
                                                 std::uint32_t seed) {
  std::vector<ProbabilityDensity> out;
  for (int i = 0; i < count; ++i) {
    std::mt19937 gen(seed + static_cast<std::uint32_t>(i));
    Eigen::ArrayXd p(len);
    for (Eigen::Index k = 0; k < len; ++k) p[k] = rng::uniform01(gen);
    p /= p.sum();
    out.push_back({p, 1.0});
  }
  return out;
}

const ParamMap kFmParams{{"carrier", 4000.0}, {"mod_rate", 2.0}, {"mod_depth", 2000.0}};

Outcome perfect_reconstruction() {
  const Signal x = seeded_noise(2.0, 44100.0, 20260810u);
  MultiFrameConfig cfg;  // v2, 8 windows 512..4096
  const auto t0 = std::chrono::steady_clock::now();
  const AdaptiveSpectrogram analysis = adapt(x, cfg);
  const Signal y = reconstruct(analysis);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double err = interior_l2_error(x, y, cfg.max_len);
  return {err < 1e-10 && seconds < 10.0,
          "interior rel L2 err=" + fmt(err) + ", runtime=" + fmt(seconds) + "s"};
}

Outcome entropy_scaling_law() {
  // The FFT size stays strictly above the largest window so every scale's
  // profile is sampled off its native grid; at fft == len the bin-centered
  // tone hits the sidelobe zeros exactly and the comparison is biased.
  const double sr = 44100.0;
  const Eigen::Index fft = 8192, hop = 256, frames = 64;
  const double freq = 184.0 * sr / static_cast<double>(fft);  // bin-centered, ~1 kHz
  const Signal sig = synth_test_signal(SignalKind::sine, {{"freq", freq}}, 0.6, sr);
  const Window base = make_hanning(1024);
  double worst = 0.0;
  for (double alpha : {0.5, 0.7, 2.0, 5.0}) {
    const double h1 = tile_entropy(sig, base, {hop, fft}, frames, alpha);
    for (double l : {2.0, 4.0}) {
      const double hl = tile_entropy(sig, scale_window(base, l), {hop, fft}, frames, alpha);
      worst = std::max(worst, std::abs((hl - h1) + std::log2(l)));
    }
  }
  return {worst <= 0.1, "max |dH + log2 l| = " + fmt(worst) + " bits"};
}

Outcome alpha_monotonicity() {
  const std::vector<double> grid{0.1, 0.3, 0.7, 1.0, 2.0, 3.0, 5.0, 10.0, 30.0};
  double worst = 0.0;
  for (Eigen::Index len : {10, 100, 4096}) {
    for (const auto& d : random_densities(len, 100, 314159u)) {
      double prev = renyi_entropy(d, {grid[0]});
      for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = renyi_entropy(d, {grid[i]});
        worst = std::max(worst, h - prev);
        prev = h;
      }
    }
  }
  return {worst <= 1e-9, "max increase along alpha grid = " + fmt(worst)};
}

Outcome shannon_limit() {
  double worst = 0.0;
  for (Eigen::Index len : {10, 100, 4096}) {
    for (const auto& d : random_densities(len, 100, 314159u)) {
      const double h1 = renyi_entropy(d, {1.0});
      worst = std::max(worst, std::abs(renyi_entropy(d, {1.0 + 1e-4}) - h1));
      worst = std::max(worst, std::abs(renyi_entropy(d, {1.0 - 1e-4}) - h1));
    }
  }
  return {worst < 1e-3, "max |H(1+-1e-4) - H(1)| = " + fmt(worst)};
}

Outcome dm_study() {
  const std::uint32_t seed = 1234u;
  const double h0_expected = std::log2(100.0);
  std::vector<double> ms, h2, h5;
  bool h0_exact = true;
  for (int m = 1; m <= 100; ++m) {
    const ProbabilityDensity d = dm_family(100, m, seed);
    if (renyi_entropy(d, {0.0}) != h0_expected) h0_exact = false;
    ms.push_back(m);
    h2.push_back(renyi_entropy(d, {2.0}));
    h5.push_back(renyi_entropy(d, {5.0}));
  }
  const double rho2 = spearman(ms, h2);
  const double rho5 = spearman(ms, h5);
  return {h0_exact && rho2 >= 0.95 && rho5 >= 0.95,
          std::string("H0 == log2(100) ") + (h0_exact ? "exactly" : "VIOLATED") +
              ", spearman(M,H2)=" + fmt(rho2) + ", spearman(M,H5)=" + fmt(rho5)};
}

Outcome hop_invariance() {
  const Signal sig = synth_test_signal(SignalKind::fm_sine, kFmParams, 2.0, 44100.0);
  const Window w = make_hanning(1024);
  const Eigen::Index extent = 81920;
  double lo = 1e300, hi = -1e300;
  for (Eigen::Index hop : {128, 256, 512}) {
    const double h = tile_entropy(sig, w, {hop, 1024}, extent / hop, 0.7);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return {hi - lo < 0.05, "H(0.7) spread over hops {128,256,512} = " + fmt(hi - lo) + " bits"};
}

Outcome fft_size_invariance() {
  const Signal sig = synth_test_signal(SignalKind::fm_sine, kFmParams, 2.0, 44100.0);
  const Window w = make_hanning(1024);
  double lo = 1e300, hi = -1e300;
  for (Eigen::Index fft : {1024, 2048, 4096}) {
    const double h = tile_entropy(sig, w, {256, fft}, 320, 0.7);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return {hi - lo < 0.1, "H(0.7) spread over fft {1024,2048,4096} = " + fmt(hi - lo) + " bits"};
}

// Index of the selection entry whose center is nearest the sample (the same
// rule adapt() uses to assign time points to segments).
std::size_t owning_entry(const SelectionTrack& track, Eigen::Index sample) {
  std::size_t best = 0;
  double best_dist = 1e300;
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    const double c = 0.5 * static_cast<double>(track.entries[i].start + track.entries[i].end);
    const double dist = std::abs(static_cast<double>(sample) - c);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

Outcome percussive_adaptation() {
  const double sr = 44100.0;
  const ParamMap params{{"fundamental", 493.88},
                        {"decay_rate", 3.0},
                        {"noise_burst_len", 2048.0},
                        {"onset", 0.3}};
  const Signal sig = synth_test_signal(SignalKind::percussive_harmonic, params, 2.0, sr, 7u);
  MultiFrameConfig cfg;  // v2 defaults: 8 windows 512..4096, alpha 0.7
  const AdaptiveSpectrogram analysis = adapt(sig, cfg);
  const SelectionTrack& track = analysis.selection;

  const Eigen::Index onset = static_cast<Eigen::Index>(std::llround(0.3 * sr));
  const Eigen::Index burst_end = onset + 2048;
  const auto& onset_entry = track.entries[owning_entry(track, onset)];
  const bool onset_smallest = onset_entry.chosen == 0;

  int decay_total = 0, decay_largest = 0;
  for (const auto& e : track.entries) {
    if (e.start < burst_end) continue;
    ++decay_total;
    if (e.chosen == static_cast<int>(analysis.plan.windows.size()) - 1) ++decay_largest;
  }
  const double frac = decay_total ? static_cast<double>(decay_largest) / decay_total : 0.0;
  return {onset_smallest && frac >= 0.8,
          "onset segment window=" + std::to_string(onset_entry.window_len) +
              ", largest-window fraction over decay=" + fmt(frac)};
}

Outcome fm_adaptation() {
  const double sr = 44100.0;
  const double mod_rate = 2.0;
  const ParamMap params{{"carrier", 4000.0}, {"mod_rate", mod_rate}, {"mod_depth", 300.0}};
  const Signal sig = synth_test_signal(SignalKind::fm_sine, params, 2.0, sr);
  MultiFrameConfig cfg;
  cfg.segment_overlap_frames = 3;  // dense selection track
  const AdaptiveSpectrogram analysis = adapt(sig, cfg);
  const SelectionTrack& track = analysis.selection;
  const double seg_sec = static_cast<double>(analysis.plan.segment_len) / sr;

  // Centers of the runs where the largest window wins.
  const int largest = static_cast<int>(analysis.plan.windows.size()) - 1;
  std::vector<double> burst_centers;
  for (std::size_t i = 0; i < track.entries.size();) {
    if (track.entries[i].chosen != largest) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < track.entries.size() && track.entries[j].chosen == largest) ++j;
    const double begin = 0.5 * (track.entries[i].start + track.entries[i].end);
    const double end = 0.5 * (track.entries[j - 1].start + track.entries[j - 1].end);
    burst_centers.push_back(0.5 * (begin + end) / sr);
    i = j;
  }

  // |df/dt| vanishes where the modulator is at an extremum: t = 1/8 + k/4
  // for a 2 Hz modulator, i.e. twice per modulation cycle.
  bool aligned = burst_centers.size() >= 4;
  double worst_offset = 0.0;
  for (double c : burst_centers) {
    const double phase = c * mod_rate * 4.0 - 0.5;  // multiples of 1/(4*rate) from 1/8
    const double offset = std::abs(phase - std::round(phase)) / (mod_rate * 4.0);
    worst_offset = std::max(worst_offset, offset);
    if (offset > seg_sec) aligned = false;
  }
  std::vector<double> spacing;
  for (std::size_t i = 1; i < burst_centers.size(); ++i)
    spacing.push_back(burst_centers[i] - burst_centers[i - 1]);
  std::sort(spacing.begin(), spacing.end());
  const double median = spacing.empty() ? 0.0 : spacing[spacing.size() / 2];
  const double half_period = 1.0 / (2.0 * mod_rate);  // two stationary phases per cycle
  const bool periodic = std::abs(median - half_period) <= seg_sec;

  return {aligned && periodic,
          std::to_string(burst_centers.size()) + " largest-window bursts, max offset to |df/dt| minimum=" +
              fmt(worst_offset) + "s, median spacing=" + fmt(median) + "s (expect " +
              fmt(half_period) + " +- " + fmt(seg_sec) + "s)"};
}

Outcome frame_diagnostics() {
  const Window w = make_hanning(8);
  const auto [a2, b2] = frame_bounds_diag(w, 2);
  const bool tight_exact = (a2 == 1.5) && (b2 == 1.5);
  const auto [a4, b4] = frame_bounds_diag(w, 4);
  const bool hop4_ok = std::abs(a4 - 0.5) <= 1e-12 && std::abs(b4 - 1.0) <= 1e-12;
  const auto [a8, b8] = frame_bounds_diag(w, 8);
  (void)b8;
  const bool degenerate_reported = (a8 == 0.0);

  bool plan_rejected = false;
  try {
    MultiFrameConfig cfg;
    cfg.min_len = 8;
    cfg.max_len = 8;
    cfg.num_windows = 1;
    cfg.overlap_ratio = 1e-9;  // hop rounds to the full window length
    plan(cfg, 1024, 44100.0);
  } catch (const InfeasiblePlan&) {
    plan_rejected = true;
  }
  return {tight_exact && hop4_ok && degenerate_reported && plan_rejected,
          "hop2=(" + fmt(a2) + "," + fmt(b2) + ") exact=" + (tight_exact ? "yes" : "no") +
              ", hop4=(" + fmt(a4) + "," + fmt(b4) + "), hop8 A=" + fmt(a8) +
              ", infeasible plan rejected=" + (plan_rejected ? "yes" : "no")};
}

}  // namespace

bool run_acceptance(std::ostream& out) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"perfect reconstruction, v2 8 windows 512-4096, 2 s noise", perfect_reconstruction},
      {"entropy scaling law H(l) - H(1) = -log2 l", entropy_scaling_law},
      {"alpha-monotonicity of the entropy", alpha_monotonicity},
      {"Shannon limit at alpha -> 1", shannon_limit},
      {"attenuated-tail density study (H0 constant, H2/H5 rise with M)", dm_study},
      {"hop invariance of the entropy", hop_invariance},
      {"FFT-size invariance of the entropy", fft_size_invariance},
      {"percussive-harmonic adaptation (onset smallest, decay largest)", percussive_adaptation},
      {"FM-sinusoid adaptation (largest windows at |df/dt| minima)", fm_adaptation},
      {"frame diagnostics and infeasible-plan rejection", frame_diagnostics},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    out << (o.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << "/" << criteria.size() << " "
        << criteria[i].first << " -- " << o.detail << "\n";
  }
  out << (all ? "acceptance: all criteria passed\n" : "acceptance: FAILURES present\n");
  return all;
}

}  // namespace adaspec::selftest
