#include "adaspec/stft.hpp"

#include <stdexcept>

#include "adaspec/fft.hpp"

namespace adaspec {

StftMatrix stft(const Signal& signal, const Window& window, const Lattice& lattice,
                Eigen::Index start_sample) {
  const Eigen::Index len = window.size();
  const Eigen::Index n = signal.size();
  if (len < 1) throw std::invalid_argument("stft: empty window");
  if (lattice.hop < 1) throw std::invalid_argument("stft: hop must be >= 1");
  if (lattice.fft_size < len)
    throw std::invalid_argument("stft: fft_size smaller than window length");
  if (n < len) throw std::invalid_argument("stft: signal shorter than window");

  const Eigen::Index num_frames = (n - len) / lattice.hop + 1;
  StftMatrix out;
  out.lattice = lattice;
  out.window = window;
  out.start_sample = start_sample;
  out.coeffs.resize(num_frames, lattice.fft_size);

  Eigen::VectorXcd buf(lattice.fft_size);
  for (Eigen::Index f = 0; f < num_frames; ++f) {
    const Eigen::Index u = f * lattice.hop;
    buf.setZero();
    buf.head(len).real() = (signal.samples.segment(u, len) * window.taps).matrix();
    out.coeffs.row(f) = dft_forward(buf).transpose();
  }
  return out;
}

SpectrogramTile spectrogram(const StftMatrix& m) {
  SpectrogramTile tile;
  tile.values = m.coeffs.array().abs2();
  tile.lattice = m.lattice;
  tile.area_element =
      static_cast<double>(m.lattice.hop) / static_cast<double>(m.lattice.fft_size);
  return tile;
}

namespace {

Eigen::Index floor_div(Eigen::Index a, Eigen::Index b) {
  Eigen::Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Eigen::ArrayXd overlap_sum(const Window& window, Eigen::Index hop,
                           Eigen::Index begin, Eigen::Index end) {
  if (hop < 1) throw std::invalid_argument("overlap_sum: hop must be >= 1");
  if (end < begin) throw std::invalid_argument("overlap_sum: empty span");
  const Eigen::Index len = window.size();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(end - begin);
  for (Eigen::Index t = begin; t < end; ++t) {
    // shifts n with 0 <= t - n*hop < len
    const Eigen::Index n_lo = floor_div(t - len + hop, hop);  // ceil((t-len+1)/hop)
    const Eigen::Index n_hi = floor_div(t, hop);
    double s = 0.0;
    for (Eigen::Index n = n_lo; n <= n_hi; ++n) {
      const double tap = window.taps[t - n * hop];
      s += tap * tap;
    }
    out[t - begin] = s;
  }
  return out;
}

std::pair<double, double> frame_bounds_diag(const Window& window, Eigen::Index hop) {
  const Eigen::ArrayXd period = overlap_sum(window, hop, 0, hop);
  return {period.minCoeff(), period.maxCoeff()};
}

}  // namespace adaspec
