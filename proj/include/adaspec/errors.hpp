#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adaspec {

// A spectrogram region whose total energy is zero cannot be normalized
// into a probability density. Callers decide the silence policy.
struct ZeroEnergyRegion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A window/hop pair in the requested multi-frame fails the frame condition
// (lower frame bound A == 0), so the analysis would not be invertible.
struct InfeasiblePlan : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The overlap-add denominator dropped below the frame floor inside the
// reconstructed span; carries the first offending sample index.
struct NotAFrame : std::runtime_error {
  NotAFrame(const std::string& msg, std::ptrdiff_t sample_index)
      : std::runtime_error(msg), sample(sample_index) {}
  std::ptrdiff_t sample;
};

// Malformed RIFF/WAVE input; carries the byte offset of the failure.
struct WavParseError : std::runtime_error {
  WavParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
  std::size_t byte_offset;
};

// Structurally valid WAV whose codec/layout we do not decode.
struct UnsupportedFormat : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace adaspec
