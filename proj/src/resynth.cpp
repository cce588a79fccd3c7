#include "adaspec/resynth.hpp"

#include <stdexcept>
#include <string>

#include "adaspec/errors.hpp"
#include "adaspec/fft.hpp"

namespace adaspec {

ReducedFrame reduced_frame(const AdaptiveSpectrogram& analysis) {
  ReducedFrame r;
  r.windows = analysis.plan.windows;
  for (const auto& slice : analysis.slices) {
    for (Eigen::Index f = 0; f < slice.num_frames(); ++f)
      r.atoms.push_back({slice.first_frame_start + f * slice.hop, slice.window_index});
  }
  r.coverage_end = analysis.coverage_end();
  return r;
}

Eigen::ArrayXd denominator_profile(const ReducedFrame& reduced,
                                   Eigen::Index begin, Eigen::Index end) {
  if (end < begin) throw std::invalid_argument("denominator_profile: empty span");
  Eigen::ArrayXd den = Eigen::ArrayXd::Zero(end - begin);
  for (const auto& atom : reduced.atoms) {
    const Window& w = reduced.windows[atom.window_index];
    const Eigen::Index lo = std::max(begin, atom.start);
    const Eigen::Index hi = std::min(end, atom.start + w.size());
    if (lo >= hi) continue;
    den.segment(lo - begin, hi - lo) +=
        w.taps.segment(lo - atom.start, hi - lo).square();
  }
  return den;
}

Signal reconstruct(const AdaptiveSpectrogram& analysis) {
  const AnalysisPlan& p = analysis.plan;
  const Eigen::Index n = p.signal_len;
  Eigen::ArrayXd num = Eigen::ArrayXd::Zero(n);

  for (const auto& slice : analysis.slices) {
    const Window& w = p.windows[slice.window_index];
    const Eigen::Index len = w.size();
    for (Eigen::Index f = 0; f < slice.num_frames(); ++f) {
      const Eigen::Index u = slice.first_frame_start + f * slice.hop;
      // The inverse DFT of an unmodified frame is the zero-padded windowed
      // segment; truncating to the window support is what makes masked
      // coefficients come back as their least-squares signal.
      const Eigen::VectorXcd y = dft_inverse(slice.coeffs.row(f).transpose());
      num.segment(u, len) += w.taps * y.head(len).real().array();
    }
  }

  const ReducedFrame reduced = reduced_frame(analysis);
  const Eigen::ArrayXd den = denominator_profile(reduced, 0, n);

  // The coverage edges taper through the window skirts (the first sample
  // under a Hanning atom has weight zero), so the frame check applies one
  // max window length inside either edge; a violation there means a real
  // gap between atoms.
  const Eigen::Index guard = p.max_window_len();
  const Eigen::Index check_begin = guard;
  const Eigen::Index check_end = std::min(n, reduced.coverage_end) - guard;
  for (Eigen::Index t = check_begin; t < check_end; ++t) {
    if (den[t] < kDenominatorFloor)
      throw NotAFrame("reconstruct: overlap-add denominator below " +
                          std::to_string(kDenominatorFloor) + " at sample " +
                          std::to_string(t),
                      t);
  }

  Signal out;
  out.sample_rate = p.sample_rate;
  out.samples = (den >= kDenominatorFloor).select(num / den.max(kDenominatorFloor), 0.0);
  return out;
}

AdaptiveSpectrogram apply_mask(const AdaptiveSpectrogram& analysis,
                               const SpectralMask& mask) {
  if (mask.gains.size() != analysis.slices.size())
    throw std::invalid_argument("apply_mask: one gain matrix per slice required");
  AdaptiveSpectrogram out = analysis;
  for (std::size_t i = 0; i < out.slices.size(); ++i) {
    auto& coeffs = out.slices[i].coeffs;
    const auto& gain = mask.gains[i];
    if (gain.rows() != coeffs.rows() || gain.cols() != coeffs.cols())
      throw std::invalid_argument("apply_mask: gain dimensions mismatch slice " +
                                  std::to_string(i));
    if (!gain.isFinite().all())
      throw std::invalid_argument("apply_mask: gains must be finite");
    coeffs.array() *= gain;
  }
  return out;
}

double interior_l2_error(const Signal& reference, const Signal& test,
                         Eigen::Index guard) {
  const Eigen::Index n = std::min(reference.size(), test.size());
  const Eigen::Index begin = guard;
  const Eigen::Index end = n - guard;
  if (end <= begin) return 0.0;
  const auto ref = reference.samples.segment(begin, end - begin);
  const auto tst = test.samples.segment(begin, end - begin);
  const double ref_norm = std::sqrt(ref.square().sum());
  if (ref_norm == 0.0) return std::sqrt(tst.square().sum());
  return std::sqrt((tst - ref).square().sum()) / ref_norm;
}

}  // namespace adaspec
