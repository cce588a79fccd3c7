#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "adaspec/cli.hpp"
#include "adaspec/errors.hpp"
#include "adaspec/exports.hpp"
#include "adaspec/resynth.hpp"
#include "adaspec/wav.hpp"

using namespace adaspec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("adaspec_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Signal tone(double freq, double duration, double sr) {
  return synth_test_signal(SignalKind::sine, {{"freq", freq}}, duration, sr);
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("pcm16 scaling is 1/32768") {
  TempDir tmp;
  Signal s;
  s.sample_rate = 8000.0;
  s.samples = Eigen::ArrayXd(4);
  s.samples << 0.5, -0.5, 0.0, 0.25;
  const std::string path = tmp / "half.wav";
  write_wav(s, path, WavFormat::pcm16);

  const auto bytes = slurp(path);
  // data payload is the last 8 bytes; first sample must be 16384 LE
  const std::size_t data = bytes.size() - 8;
  CHECK(bytes[data] == 0x00);
  CHECK(bytes[data + 1] == 0x40);

  const Signal back = read_wav(path);
  CHECK(back.sample_rate == 8000.0);
  CHECK(back.samples[0] == 0.5);
  CHECK(back.samples[1] == -0.5);
  CHECK(back.samples[2] == 0.0);
  CHECK(back.samples[3] == 0.25);
}

TEST_CASE("pcm16 clips then rounds to nearest") {
  TempDir tmp;
  Signal s;
  s.sample_rate = 8000.0;
  s.samples = Eigen::ArrayXd(5);
  s.samples << 1.0, -1.25, 10000.4 / 32768.0, 10000.6 / 32768.0, -0.5 / 32768.0;
  const std::string path = tmp / "clip.wav";
  write_wav(s, path, WavFormat::pcm16);
  const Signal back = read_wav(path);
  CHECK(back.samples[0] == 32767.0 / 32768.0);  // clipped to 1 - 2^-15
  CHECK(back.samples[1] == -1.0);
  CHECK(back.samples[2] == 10000.0 / 32768.0);
  CHECK(back.samples[3] == 10001.0 / 32768.0);
  CHECK(back.samples[4] == -1.0 / 32768.0);  // half rounds away from zero
}

TEST_CASE("float32 files round-trip bit-exactly") {
  TempDir tmp;
  const Signal s = tone(441.0, 0.01, 44100.0);
  const std::string p1 = tmp / "a.wav", p2 = tmp / "b.wav";
  write_wav(s, p1, WavFormat::float32);
  const Signal s2 = read_wav(p1);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    CHECK(s2.samples[i] == static_cast<double>(static_cast<float>(s.samples[i])));
  write_wav(s2, p2, WavFormat::float32);
  const Signal s3 = read_wav(p2);
  CHECK((s3.samples == s2.samples).all());
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("truncated and malformed headers raise parse errors") {
  TempDir tmp;
  const Signal s = tone(441.0, 0.01, 44100.0);
  const std::string good = tmp / "good.wav";
  write_wav(s, good, WavFormat::pcm16);
  auto bytes = slurp(good);

  const std::string cut = tmp / "cut.wav";
  spit(cut, {bytes.begin(), bytes.begin() + 10});
  CHECK_THROWS_AS(read_wav(cut), WavParseError);
  try {
    read_wav(cut);
  } catch (const WavParseError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }

  bytes[0] = 'X';
  const std::string bad = tmp / "bad.wav";
  spit(bad, bytes);
  CHECK_THROWS_AS(read_wav(bad), WavParseError);
}

TEST_CASE("unsupported codec is rejected as such") {
  TempDir tmp;
  const Signal s = tone(441.0, 0.01, 44100.0);
  const std::string path = tmp / "alaw.wav";
  write_wav(s, path, WavFormat::pcm16);
  auto bytes = slurp(path);
  bytes[20] = 6;  // fmt.audioFormat: A-law
  spit(path, bytes);
  CHECK_THROWS_AS(read_wav(path), UnsupportedFormat);
}

TEST_CASE("stereo input downmixes by averaging") {
  TempDir tmp;
  // hand-build a 2-channel PCM16 file with one frame: L=16384, R=0
  std::vector<std::uint8_t> b;
  auto u32 = [&b](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  auto u16 = [&b](std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v & 0xff));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  u32(36 + 4);
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  u32(16);
  u16(1);      // PCM
  u16(2);      // stereo
  u32(8000);   // rate
  u32(32000);  // byte rate
  u16(4);      // block align
  u16(16);     // bits
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  u32(4);
  u16(16384);
  u16(0);
  const std::string path = tmp / "stereo.wav";
  spit(path, b);
  const Signal s = read_wav(path);
  REQUIRE(s.size() == 1);
  CHECK(s.samples[0] == 0.25);
}

TEST_CASE("spectrogram csv export matches its declared shape") {
  TempDir tmp;
  const double sr = 16384.0;
  const Signal s = tone(8.0 * sr / 512.0, 0.5, sr);  // bin-centered
  MultiFrameConfig cfg;
  cfg.min_len = 256;
  cfg.max_len = 512;
  cfg.num_windows = 2;
  const AdaptiveSpectrogram a = adapt(s, cfg);
  const std::string path = tmp / "spec.csv";
  export_spectrogram(a, SpectroFormat::csv, path, -120.0);

  const SpectrogramCsv csv = parse_spectrogram_csv(path);
  CHECK(csv.sample_rate == sr);
  CHECK(csv.num_slices == a.slices.size());
  std::size_t expected_rows = 0;
  for (const auto& slice : a.slices)
    expected_rows += static_cast<std::size_t>(slice.num_frames()) * (a.plan.fft_size / 2 + 1);
  CHECK(csv.rows.size() == expected_rows);
  for (const auto& row : csv.rows) CHECK(row.power_db >= -120.0);

  // re-export must be byte-identical
  const std::string path2 = tmp / "spec2.csv";
  export_spectrogram(a, SpectroFormat::csv, path2, -120.0);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("pgm export puts the brightest row at the tone frequency") {
  TempDir tmp;
  const double sr = 16384.0;
  const Eigen::Index k0 = 37;
  const Signal s = tone(static_cast<double>(k0) * sr / 512.0, 0.5, sr);
  MultiFrameConfig cfg;
  cfg.min_len = 512;
  cfg.max_len = 512;
  cfg.num_windows = 1;
  const AdaptiveSpectrogram a = adapt(s, cfg);
  const std::string path = tmp / "spec.pgm";
  export_spectrogram(a, SpectroFormat::pgm, path, -120.0);

  const PgmImage img = read_pgm(path);
  const Eigen::Index bins = 512 / 2 + 1;
  REQUIRE(img.height == bins);
  // column-sum brightness peaks at the row for bin k0 (rows run Nyquist->DC)
  Eigen::Index best_row = 0;
  long best = -1;
  for (int r = 0; r < img.height; ++r) {
    long acc = 0;
    for (int c = 0; c < img.width; ++c) acc += img.pixels[r * img.width + c];
    if (acc > best) {
      best = acc;
      best_row = r;
    }
  }
  CHECK(best_row == bins - 1 - k0);

  // all-zero analysis renders an all-black raster
  Signal z;
  z.sample_rate = sr;
  z.samples = Eigen::ArrayXd::Zero(8192);
  const std::string zpath = tmp / "zero.pgm";
  export_spectrogram(adapt(z, cfg), SpectroFormat::pgm, zpath, -120.0);
  const PgmImage zero = read_pgm(zpath);
  for (auto px : zero.pixels) CHECK(px == 0);
}

TEST_CASE("selection export round-trips through its parser") {
  TempDir tmp;
  SelectionTrack track;
  track.sample_rate = 44100.0;
  track.entries.push_back({0, 7168, 1, 1024, {3.25, 2.5, std::nullopt}});
  track.entries.push_back({2048, 9216, 2, 2048, {1.0 / 3.0, 0.1, 5.0}});
  const std::string path = tmp / "sel.csv";
  export_selection(track, path);

  const ParsedSelection parsed = parse_selection(path);
  CHECK(parsed.sample_rate == 44100.0);
  REQUIRE(parsed.rows.size() == 2);
  CHECK(parsed.rows[0].start_sec == 0.0);
  CHECK(parsed.rows[0].window_len == 1024);
  REQUIRE(parsed.rows[0].entropy_bits.size() == 3);
  CHECK(parsed.rows[0].entropy_bits[0] == 3.25);
  CHECK(!parsed.rows[0].entropy_bits[2].has_value());
  CHECK(parsed.rows[1].entropy_bits[0] == 1.0 / 3.0);  // %.17g is lossless

  SelectionTrack empty;
  empty.sample_rate = 8000.0;
  const std::string epath = tmp / "empty.csv";
  export_selection(empty, epath);
  std::ifstream in(epath);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);  // header only
  CHECK(parse_selection(epath).rows.empty());
}

TEST_CASE("selection export localizes an impulse at the smallest window") {
  TempDir tmp;
  const double sr = 44100.0;
  const double t0 = 0.25;
  const Signal s = synth_test_signal(SignalKind::impulse,
                                     {{"position", std::round(t0 * sr)}}, 0.5, sr);
  MultiFrameConfig cfg;
  cfg.min_len = 256;
  cfg.max_len = 1024;
  cfg.num_windows = 3;
  const AdaptiveSpectrogram a = adapt(s, cfg);
  const std::string path = tmp / "impulse_sel.csv";
  export_selection(a.selection, path);

  // of the overlapping records containing t0, the nearest-centered one wins
  const ParsedSelection parsed = parse_selection(path);
  double best_dist = 1e9;
  long best_len = 0;
  for (const auto& row : parsed.rows) {
    if (row.start_sec > t0 || row.end_sec <= t0) continue;
    const double dist = std::abs(0.5 * (row.start_sec + row.end_sec) - t0);
    if (dist < best_dist) {
      best_dist = dist;
      best_len = row.window_len;
    }
  }
  CHECK(best_len == 256);
}

TEST_CASE("cli demo, analyze, resynth, and flag errors") {
  TempDir tmp;
  const std::string sel = tmp / "sel.csv";
  const std::string wav = tmp / "demo.wav";

  CHECK(cli_main({"demo", "fm_sine", "--alpha", "0.7", "--num-windows", "4",
                  "--min-window", "256", "--max-window", "2048", "--duration", "0.6",
                  "--out-selection", sel, "--out-wav", wav}) == 0);
  CHECK(fs::exists(sel));
  const ParsedSelection parsed = parse_selection(sel);
  CHECK(!parsed.rows.empty());

  // analyze a silent file: exit 0 and an all-default (largest window) track
  Signal z;
  z.sample_rate = 44100.0;
  z.samples = Eigen::ArrayXd::Zero(22050);
  const std::string zwav = tmp / "silence.wav";
  write_wav(z, zwav, WavFormat::pcm16);
  const std::string zsel = tmp / "zsel.csv";
  CHECK(cli_main({"analyze", "--in", zwav, "--min-window", "256", "--max-window", "1024",
                  "--num-windows", "3", "--out-selection", zsel}) == 0);
  for (const auto& row : parse_selection(zsel).rows) CHECK(row.window_len == 1024);

  // resynth writes a faithful reconstruction
  const std::string rec = tmp / "rec.wav";
  CHECK(cli_main({"resynth", "--in", wav, "--out", rec, "--num-windows", "4",
                  "--min-window", "256", "--max-window", "2048"}) == 0);
  const Signal orig = read_wav(wav);
  const Signal back = read_wav(rec);
  CHECK(interior_l2_error(orig, back, 2048) < 1e-6);  // float32 storage noise

  // identical invocations produce byte-identical exports
  const std::string sel2 = tmp / "sel2.csv";
  CHECK(cli_main({"demo", "fm_sine", "--alpha", "0.7", "--num-windows", "4",
                  "--min-window", "256", "--max-window", "2048", "--duration", "0.6",
                  "--out-selection", sel2}) == 0);
  CHECK(slurp(sel) == slurp(sel2));

  CHECK(cli_main({"frobnicate"}) == 2);
  CHECK(cli_main({"analyze"}) == 2);              // missing --in
  CHECK(cli_main({"demo", "not_a_kind"}) == 2);   // bad positional
  CHECK(cli_main({"analyze", "--in", tmp / "missing.wav"}) == 2);
  CHECK(cli_main({"--help"}) == 0);
}

TEST_SUITE_END();
