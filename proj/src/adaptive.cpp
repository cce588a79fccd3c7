#include "adaspec/adaptive.hpp"

#include <cmath>
#include <stdexcept>

#include "adaspec/errors.hpp"

namespace adaspec {

namespace {

Eigen::Index round_even(double x) {
  return 2 * static_cast<Eigen::Index>(std::llround(x / 2.0));
}

Eigen::Index ceil_multiple(Eigen::Index x, Eigen::Index step) {
  return ((x + step - 1) / step) * step;
}

void validate_config(const MultiFrameConfig& c) {
  if (c.min_len < 2 || c.max_len < 2 || c.min_len % 2 != 0 || c.max_len % 2 != 0)
    throw std::invalid_argument("plan: window lengths must be even and >= 2");
  if (c.min_len > c.max_len)
    throw std::invalid_argument("plan: min_len must be <= max_len");
  if (c.num_windows < 1) throw std::invalid_argument("plan: need at least one window");
  if (c.num_windows == 1 && c.min_len != c.max_len)
    throw std::invalid_argument("plan: a single window needs min_len == max_len");
  if (c.num_windows > 1 && c.min_len == c.max_len)
    throw std::invalid_argument("plan: multiple windows need min_len < max_len");
  if (!(c.overlap_ratio > 0.0 && c.overlap_ratio < 1.0))
    throw std::invalid_argument("plan: overlap_ratio must be in (0, 1)");
  if (c.segment_frames < 1)
    throw std::invalid_argument("plan: segment_frames must be >= 1");
  if (c.segment_overlap_frames < 0 || c.segment_overlap_frames >= c.segment_frames)
    throw std::invalid_argument("plan: segment overlap must be in [0, segment_frames)");
  if (!(c.alpha.alpha >= 0.0) || !std::isfinite(c.alpha.alpha))
    throw std::invalid_argument("plan: entropy order must be finite and >= 0");
}

}  // namespace

AnalysisPlan plan(const MultiFrameConfig& config, Eigen::Index signal_len,
                  double sample_rate) {
  validate_config(config);
  if (!(sample_rate > 0.0)) throw std::invalid_argument("plan: sample rate must be positive");
  if (signal_len < config.max_len)
    throw std::invalid_argument("plan: signal shorter than the largest window");

  AnalysisPlan p;
  p.version = config.version;
  p.signal_len = signal_len;
  p.sample_rate = sample_rate;
  p.fft_size = config.max_len;

  // Geometrically spaced lengths, rounded to even; both endpoints exact.
  std::vector<Eigen::Index> lengths(config.num_windows);
  lengths.front() = config.min_len;
  lengths.back() = config.max_len;
  const double log2_ratio = std::log2(static_cast<double>(config.max_len) /
                                      static_cast<double>(config.min_len));
  for (int k = 1; k + 1 < config.num_windows; ++k) {
    const double exact = static_cast<double>(config.min_len) *
                         std::exp2(log2_ratio * k / (config.num_windows - 1));
    lengths[k] = round_even(exact);
  }
  for (int k = 1; k < config.num_windows; ++k) {
    if (lengths[k] <= lengths[k - 1])
      throw std::invalid_argument("plan: window lengths collapse; reduce num_windows");
  }

  const Window origin = make_hanning(config.min_len);
  const Eigen::Index common_hop =
      std::max<Eigen::Index>(1, std::llround((1.0 - config.overlap_ratio) *
                                             static_cast<double>(config.min_len)));
  if (config.version == MultiFrameVersion::v1 && common_hop > config.min_len / 2)
    throw std::invalid_argument(
        "plan: v1 needs a common hop <= min_len/2; raise overlap_ratio");

  for (int k = 0; k < config.num_windows; ++k) {
    const double scale =
        static_cast<double>(lengths[k]) / static_cast<double>(config.min_len);
    Window w = (k == 0) ? origin : scale_window(origin, scale);
    Lattice lat;
    lat.fft_size = p.fft_size;
    lat.hop = (config.version == MultiFrameVersion::v1)
                  ? common_hop
                  : std::max<Eigen::Index>(
                        1, std::llround((1.0 - config.overlap_ratio) *
                                        static_cast<double>(lengths[k])));
    const auto [a, b] = frame_bounds_diag(w, lat.hop);
    if (!(a > 0.0))
      throw InfeasiblePlan("plan: window of length " + std::to_string(lengths[k]) +
                           " with hop " + std::to_string(lat.hop) +
                           " is not a frame (A = " + std::to_string(a) + ")");
    p.scales.scales.push_back(scale);
    p.windows.push_back(std::move(w));
    p.lattices.push_back(lat);
  }

  p.segment_hop = p.lattices.back().hop;  // == common_hop for v1
  p.segment_len = static_cast<Eigen::Index>(config.segment_frames - 1) * p.segment_hop +
                  config.max_len;
  p.segment_advance =
      static_cast<Eigen::Index>(config.segment_frames - config.segment_overlap_frames) *
      p.segment_hop;

  if (signal_len < p.segment_len) {
    p.segment_starts.push_back(0);  // single truncated segment
  } else {
    for (Eigen::Index s = 0; s + p.segment_len <= signal_len; s += p.segment_advance)
      p.segment_starts.push_back(s);
  }
  return p;
}

Eigen::ArrayXd preweight_segment(const Eigen::Ref<const Eigen::ArrayXd>& segment,
                                 const AnalysisPlan& plan) {
  const Eigen::Index max_len = plan.max_window_len();
  if (segment.size() < max_len)
    throw std::invalid_argument("preweight_segment: segment shorter than the largest window");
  const Eigen::Index half = max_len / 2;
  const Eigen::ArrayXd shape = detail::hanning_taps(max_len);  // unit peak
  Eigen::ArrayXd out = segment;
  out.head(half) *= shape.head(half);
  out.tail(max_len - half) *= shape.tail(max_len - half);
  return out;
}

std::vector<std::optional<double>> evaluate_segment(
    const Eigen::Ref<const Eigen::ArrayXd>& weighted_segment,
    const AnalysisPlan& plan, RenyiOrder alpha) {
  const Eigen::Index seg_len = weighted_segment.size();
  const Eigen::Index max_len = plan.max_window_len();
  if (seg_len < max_len)
    throw std::invalid_argument("evaluate_segment: segment shorter than the largest window");

  std::vector<std::optional<double>> out(plan.windows.size());
  for (std::size_t k = 0; k < plan.windows.size(); ++k) {
    const Window& w = plan.windows[k];
    const Lattice& lat = plan.lattices[k];
    const Eigen::Index len = w.size();

    Eigen::Index offset = 0;
    Eigen::Index frames;
    if (plan.version == MultiFrameVersion::v1) {
      // Center every window's frames on the shared lattice so all scales see
      // the same set of time points.
      offset = (max_len - len) / 2;
      frames = (seg_len - max_len) / lat.hop + 1;
    } else {
      frames = (seg_len - len) / lat.hop + 1;
    }
    const Eigen::Index span = (frames - 1) * lat.hop + len;

    Signal sub;
    sub.sample_rate = plan.sample_rate;
    sub.samples = weighted_segment.segment(offset, span);
    const SpectrogramTile tile = spectrogram(stft(sub, w, lat, offset));
    if (!(tile.values.sum() > 0.0)) continue;  // silent
    out[k] = renyi_entropy(normalize_region(tile, full_region(tile)), alpha,
                           /*include_cell_term=*/true);
  }
  return out;
}

int select_best(const std::vector<std::optional<double>>& entropy_bits,
                std::optional<int> previous) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(entropy_bits.size()); ++i) {
    if (!entropy_bits[i]) continue;
    if (best < 0 || *entropy_bits[i] <= *entropy_bits[best]) best = i;  // tie -> larger
  }
  if (best >= 0) return best;
  return previous.value_or(static_cast<int>(entropy_bits.size()) - 1);
}

AdaptiveSpectrogram adapt(const Signal& signal, const MultiFrameConfig& config) {
  const Eigen::Index n = signal.size();
  AdaptiveSpectrogram out;
  out.plan = plan(config, n, signal.sample_rate);
  const AnalysisPlan& p = out.plan;

  // Per-segment entropy evaluation and window selection.
  out.selection.sample_rate = signal.sample_rate;
  std::optional<int> previous;
  for (std::size_t i = 0; i < p.segment_starts.size(); ++i) {
    const Eigen::Index s = p.segment_starts[i];
    const Eigen::Index e = p.segment_end(i);
    const Eigen::ArrayXd weighted = preweight_segment(signal.samples.segment(s, e - s), p);
    SelectionTrack::Entry entry;
    entry.start = s;
    entry.end = e;
    entry.entropy_bits = evaluate_segment(weighted, p, config.alpha);
    entry.chosen = select_best(entry.entropy_bits, previous);
    entry.window_len = p.windows[entry.chosen].size();
    previous = entry.chosen;
    out.selection.entries.push_back(std::move(entry));
  }

  // Each sample takes the choice of the segment whose center is nearest
  // (ties toward the earlier segment); merge equal neighbors into runs.
  struct Run {
    Eigen::Index begin, end;
    int scale;
  };
  std::vector<Run> runs;
  {
    const auto& entries = out.selection.entries;
    Eigen::Index begin = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      Eigen::Index end;
      if (i + 1 < entries.size()) {
        const double c0 = 0.5 * static_cast<double>(entries[i].start + entries[i].end);
        const double c1 = 0.5 * static_cast<double>(entries[i + 1].start + entries[i + 1].end);
        end = static_cast<Eigen::Index>(std::floor(0.5 * (c0 + c1))) + 1;
      } else {
        end = n;
      }
      if (!runs.empty() && runs.back().scale == entries[i].chosen)
        runs.back().end = end;
      else
        runs.push_back({begin, end, entries[i].chosen});
      begin = end;
    }
  }

  // Assemble slices from the unweighted signal. A run's frames live on the
  // global lattice of its own hop; the run hands over at the next run's
  // first lattice point, which keeps consecutive slices overlapping.
  std::vector<Eigen::Index> first_start(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const Eigen::Index hop = p.lattices[runs[r].scale].hop;
    first_start[r] = ceil_multiple(runs[r].begin, hop);
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const int scale = runs[r].scale;
    const Eigen::Index hop = p.lattices[scale].hop;
    const Eigen::Index len = p.windows[scale].size();
    const Eigen::Index limit = (r + 1 < runs.size()) ? first_start[r + 1] : runs[r].end;

    Eigen::Index u = first_start[r];
    Eigen::Index frames = 0;
    while (u + static_cast<Eigen::Index>(frames) * hop < limit &&
           u + static_cast<Eigen::Index>(frames) * hop + len <= n)
      ++frames;
    if (frames == 0) continue;

    Signal sub;
    sub.sample_rate = signal.sample_rate;
    sub.samples = signal.samples.segment(u, (frames - 1) * hop + len);
    AdaptiveSpectrogram::Slice slice;
    slice.window_index = scale;
    slice.hop = hop;
    slice.first_frame_start = u;
    slice.coeffs = stft(sub, p.windows[scale], p.lattices[scale], u).coeffs;
    out.slices.push_back(std::move(slice));
  }
  return out;
}

Eigen::Index AdaptiveSpectrogram::coverage_end() const {
  Eigen::Index end = 0;
  for (const auto& s : slices) {
    const Eigen::Index len = plan.windows[s.window_index].size();
    end = std::max(end, s.first_frame_start + (s.num_frames() - 1) * s.hop + len);
  }
  return end;
}

}  // namespace adaspec
