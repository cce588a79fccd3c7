#include "adaspec/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "adaspec/exports.hpp"
#include "adaspec/resynth.hpp"
#include "adaspec/selftest.hpp"

namespace adaspec {

namespace {

void add_analysis_options(CLI::App* cmd, RunConfig& rc, std::string& version_str) {
  cmd->add_option("--alpha", rc.analysis.alpha.alpha, "entropy order")
      ->capture_default_str();
  cmd->add_option("--min-window", rc.analysis.min_len, "smallest window length (samples, even)")
      ->capture_default_str();
  cmd->add_option("--max-window", rc.analysis.max_len, "largest window length (samples, even)")
      ->capture_default_str();
  cmd->add_option("--num-windows", rc.analysis.num_windows, "number of scaled windows")
      ->capture_default_str();
  cmd->add_option("--version", version_str, "multi-frame version")
      ->check(CLI::IsMember({"v1", "v2"}))
      ->capture_default_str();
  cmd->add_option("--segment-frames", rc.analysis.segment_frames,
                  "frames of the coarsest lattice per analysis segment")
      ->capture_default_str();
  cmd->add_option("--segment-overlap", rc.analysis.segment_overlap_frames,
                  "frame overlap between consecutive segments")
      ->capture_default_str();
  cmd->add_option("--overlap-ratio", rc.analysis.overlap_ratio,
                  "within-window overlap fraction in (0,1)")
      ->capture_default_str();
  cmd->add_option("--seed", rc.seed, "seed for stochastic components")->capture_default_str();
}

void add_export_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--out-spec-csv", rc.out_spec_csv, "write the adaptive spectrogram as CSV");
  cmd->add_option("--out-spec-pgm", rc.out_spec_pgm, "write the adaptive spectrogram as PGM");
  cmd->add_option("--out-selection", rc.out_selection, "write the selection track");
  cmd->add_option("--db-floor", rc.db_floor, "dB floor for spectrogram rendering")
      ->capture_default_str();
}

void write_exports(const AdaptiveSpectrogram& analysis, const RunConfig& rc) {
  if (!rc.out_spec_csv.empty())
    export_spectrogram(analysis, SpectroFormat::csv, rc.out_spec_csv, rc.db_floor);
  if (!rc.out_spec_pgm.empty())
    export_spectrogram(analysis, SpectroFormat::pgm, rc.out_spec_pgm, rc.db_floor);
  if (!rc.out_selection.empty()) export_selection(analysis.selection, rc.out_selection);
}

void print_summary(const AdaptiveSpectrogram& analysis) {
  std::printf("analyzed %lld samples at %g Hz: %zu segments, %zu slices\n",
              static_cast<long long>(analysis.plan.signal_len), analysis.plan.sample_rate,
              analysis.selection.entries.size(), analysis.slices.size());
}

int run_analyze(const RunConfig& rc) {
  const Signal sig = read_wav(rc.input_path);
  const AdaptiveSpectrogram analysis = adapt(sig, rc.analysis);
  write_exports(analysis, rc);
  print_summary(analysis);
  return 0;
}

int run_resynth(const RunConfig& rc) {
  const Signal sig = read_wav(rc.input_path);
  const AdaptiveSpectrogram analysis = adapt(sig, rc.analysis);
  const Signal rebuilt = reconstruct(analysis);
  write_wav(rebuilt, rc.out_wav, rc.wav_format);
  const double err = interior_l2_error(sig, rebuilt, rc.analysis.max_len);
  std::printf("interior relative L2 error: %.6e\n", err);
  return 0;
}

int run_demo(const RunConfig& rc) {
  SignalKind kind;
  ParamMap params = rc.demo_params;
  auto defaulted = [&params](const char* key, double value) {
    params.emplace(key, value);
  };
  if (rc.demo_kind == "sine") {
    kind = SignalKind::sine;
    defaulted("freq", 440.0);
  } else if (rc.demo_kind == "fm_sine") {
    kind = SignalKind::fm_sine;
    defaulted("carrier", 4000.0);
    defaulted("mod_rate", 2.0);
    defaulted("mod_depth", 2000.0);
  } else if (rc.demo_kind == "impulse") {
    kind = SignalKind::impulse;
    defaulted("position", std::floor(rc.duration * rc.demo_sample_rate / 2.0));
  } else {
    kind = SignalKind::percussive_harmonic;
    defaulted("fundamental", 493.88);
    defaulted("decay_rate", 3.0);
    defaulted("noise_burst_len", 2048.0);
    defaulted("onset", 0.3);
  }
  const Signal sig =
      synth_test_signal(kind, params, rc.duration, rc.demo_sample_rate, rc.seed);
  if (!rc.out_wav.empty()) write_wav(sig, rc.out_wav, rc.wav_format);
  const AdaptiveSpectrogram analysis = adapt(sig, rc.analysis);
  write_exports(analysis, rc);
  print_summary(analysis);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"entropy-driven time-adaptive spectrogram analysis and resynthesis"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string version_str = "v2";
  std::string format_str = "float32";

  CLI::App* analyze = app.add_subcommand("analyze", "adaptive analysis of a WAV file");
  analyze->add_option("--in", rc.input_path, "input WAV (PCM16 or float32)")
      ->required()
      ->check(CLI::ExistingFile);
  add_analysis_options(analyze, rc, version_str);
  add_export_options(analyze, rc);

  CLI::App* resynth = app.add_subcommand(
      "resynth", "analyze, reconstruct, and report the round-trip error");
  resynth->add_option("--in", rc.input_path, "input WAV")->required()->check(CLI::ExistingFile);
  resynth->add_option("--out", rc.out_wav, "output WAV path")->required();
  resynth->add_option("--format", format_str, "output sample format")
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();
  add_analysis_options(resynth, rc, version_str);

  CLI::App* demo = app.add_subcommand("demo", "synthesize a test signal and analyze it");
  demo->add_option("kind", rc.demo_kind, "signal kind")
      ->required()
      ->check(CLI::IsMember({"sine", "fm_sine", "impulse", "percussive_harmonic"}));
  demo->add_option("--duration", rc.duration, "seconds")->capture_default_str();
  demo->add_option("--sample-rate", rc.demo_sample_rate, "Hz")->capture_default_str();
  demo->add_option("--out-wav", rc.out_wav, "also write the synthesized signal");
  std::map<std::string, double> param_flags;
  for (const char* name : {"freq", "carrier", "mod-rate", "mod-depth", "position",
                           "fundamental", "decay-rate", "noise-burst-len", "onset"}) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    demo->add_option("--" + std::string(name),
                     [&rc, key](const CLI::results_t& res) {
                       rc.demo_params[key] = std::stod(res[0]);
                       return true;
                     },
                     "signal parameter");
  }
  add_analysis_options(demo, rc, version_str);
  add_export_options(demo, rc);

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  rc.analysis.version = (version_str == "v1") ? MultiFrameVersion::v1 : MultiFrameVersion::v2;
  rc.wav_format = (format_str == "pcm16") ? WavFormat::pcm16 : WavFormat::float32;

  try {
    if (analyze->parsed()) return run_analyze(rc);
    if (resynth->parsed()) return run_resynth(rc);
    if (demo->parsed()) return run_demo(rc);
    if (selftest_cmd->parsed()) return selftest::run_acceptance(std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("adaspec");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace adaspec
