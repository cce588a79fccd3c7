#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adaspec/adaptive.hpp"
#include "adaspec/wav.hpp"

namespace adaspec {

// Everything the command line resolves to.
struct RunConfig {
  MultiFrameConfig analysis;
  std::string input_path;
  std::string out_wav;
  std::string out_spec_csv;
  std::string out_spec_pgm;
  std::string out_selection;
  WavFormat wav_format = WavFormat::float32;
  double db_floor = -120.0;
  std::uint32_t seed = 42;
  // demo-only
  std::string demo_kind;
  double duration = 2.0;
  double demo_sample_rate = 44100.0;
  ParamMap demo_params;
};

// Subcommands: analyze, resynth, demo <signal-kind>, selftest.
// Returns 0 on success, 1 on runtime errors, 2 on bad flags.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace adaspec
