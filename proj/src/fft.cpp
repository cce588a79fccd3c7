#include "adaspec/fft.hpp"

#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace adaspec {

namespace {

Eigen::FFT<double>& engine() {
  // Plans are cached per size inside the engine; thread_local keeps the
  // cache safe under concurrent callers.
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

Eigen::VectorXcd dft_forward(const Eigen::VectorXcd& buffer) {
  if (buffer.size() < 1) throw std::invalid_argument("dft_forward: empty buffer");
  Eigen::VectorXcd out;
  engine().fwd(out, buffer);
  return out;
}

Eigen::VectorXcd dft_inverse(const Eigen::VectorXcd& buffer) {
  if (buffer.size() < 1) throw std::invalid_argument("dft_inverse: empty buffer");
  Eigen::VectorXcd out;
  engine().inv(out, buffer);
  return out;
}

}  // namespace adaspec
