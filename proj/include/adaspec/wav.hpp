#pragma once

#include <string>

#include "adaspec/signal.hpp"

namespace adaspec {

enum class WavFormat { pcm16, float32 };

// RIFF/WAVE reader for PCM 16-bit and IEEE float 32. Multichannel input is
// downmixed to mono by averaging; 16-bit samples are scaled by 1/32768.
// Malformed input raises WavParseError (with byte offset), undecoded codecs
// raise UnsupportedFormat.
Signal read_wav(const std::string& path);

// float32 writes samples exactly (single rounding to float); pcm16 clips to
// [-1, 1 - 2^-15] and rounds to nearest.
void write_wav(const Signal& signal, const std::string& path, WavFormat format);

}  // namespace adaspec
