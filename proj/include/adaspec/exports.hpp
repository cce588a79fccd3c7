#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaspec/adaptive.hpp"

namespace adaspec {

enum class SpectroFormat { csv, pgm };

// CSV: two '#' header lines (sample_rate, slices), a column-name line, then
// one row `time_sec,freq_hz,power_db,window_len` per frame and bin of every
// slice. PGM: binary P5, one column per step of the finest slice hop, rows
// from Nyquist down to DC on the shared fft_size grid (frames duplicated
// across the columns they span); powers in dB relative to the global peak,
// clipped at db_floor, mapped linearly to 0..255. Exports are one-sided
// (bins 0..fft_size/2).
void export_spectrogram(const AdaptiveSpectrogram& analysis, SpectroFormat format,
                        const std::string& path, double db_floor = -120.0);

// One record per segment: start_sec,end_sec,window_len,entropy_bits with the
// per-scale entropies ';'-separated ("silent" for silent scales). An empty
// track produces a header-only file.
void export_selection(const SelectionTrack& track, const std::string& path);

// Readers for the exporters' own outputs (round-trip checks and downstream
// tooling).
struct SpectrogramCsv {
  double sample_rate = 0.0;
  std::size_t num_slices = 0;
  struct Row {
    double time_sec, freq_hz, power_db;
    long window_len;
  };
  std::vector<Row> rows;
};
SpectrogramCsv parse_spectrogram_csv(const std::string& path);

struct ParsedSelection {
  double sample_rate = 0.0;
  struct Row {
    double start_sec, end_sec;
    long window_len;
    std::vector<std::optional<double>> entropy_bits;
  };
  std::vector<Row> rows;
};
ParsedSelection parse_selection(const std::string& path);

struct PgmImage {
  int width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};
PgmImage read_pgm(const std::string& path);

}  // namespace adaspec
