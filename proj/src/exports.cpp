#include "adaspec/exports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace adaspec {

namespace {

struct FileWriter {
  std::FILE* f;
  explicit FileWriter(const std::string& path) : f(std::fopen(path.c_str(), "wb")) {
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  }
  ~FileWriter() {
    if (f) std::fclose(f);
  }
  FileWriter(const FileWriter&) = delete;
  FileWriter& operator=(const FileWriter&) = delete;
  void close(const std::string& path) {
    if (std::fclose(f) != 0) {
      f = nullptr;
      throw std::runtime_error("write failed for " + path);
    }
    f = nullptr;
  }
};

double to_db(double power, double db_floor) {
  if (!(power > 0.0)) return db_floor;
  return std::max(10.0 * std::log10(power), db_floor);
}

}  // namespace

void export_spectrogram(const AdaptiveSpectrogram& analysis, SpectroFormat format,
                        const std::string& path, double db_floor) {
  const AnalysisPlan& p = analysis.plan;
  const Eigen::Index bins = p.fft_size / 2 + 1;  // one-sided, DC..Nyquist

  if (format == SpectroFormat::csv) {
    FileWriter out(path);
    std::fprintf(out.f, "# sample_rate=%.17g\n", p.sample_rate);
    std::fprintf(out.f, "# slices=%zu\n", analysis.slices.size());
    std::fprintf(out.f, "time_sec,freq_hz,power_db,window_len\n");
    for (const auto& slice : analysis.slices) {
      const Eigen::Index window_len = p.windows[slice.window_index].size();
      for (Eigen::Index f = 0; f < slice.num_frames(); ++f) {
        const double time_sec =
            static_cast<double>(slice.first_frame_start + f * slice.hop) / p.sample_rate;
        for (Eigen::Index k = 0; k < bins; ++k) {
          const double freq_hz =
              static_cast<double>(k) * p.sample_rate / static_cast<double>(p.fft_size);
          const double db = to_db(std::norm(slice.coeffs(f, k)), db_floor);
          std::fprintf(out.f, "%.9g,%.9g,%.6f,%lld\n", time_sec, freq_hz, db,
                       static_cast<long long>(window_len));
        }
      }
    }
    out.close(path);
    return;
  }

  // PGM raster on the common grid: columns step by the finest hop in use,
  // each column samples the slice frame covering it (previous-neighbor
  // duplication in time); rows run Nyquist down to DC.
  if (analysis.slices.empty()) throw std::invalid_argument("export_spectrogram: no slices");
  Eigen::Index col_hop = std::numeric_limits<Eigen::Index>::max();
  for (const auto& s : analysis.slices) col_hop = std::min(col_hop, s.hop);
  const Eigen::Index t_end = analysis.coverage_end();
  const Eigen::Index t_begin = analysis.slices.front().first_frame_start;
  const Eigen::Index width = (t_end - t_begin + col_hop - 1) / col_hop;

  std::vector<Eigen::ArrayXXd> powers(analysis.slices.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < analysis.slices.size(); ++i) {
    powers[i] = analysis.slices[i].coeffs.leftCols(bins).array().abs2();
    peak = std::max(peak, powers[i].maxCoeff());
  }

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * bins, 0);
  if (peak > 0.0) {
    for (Eigen::Index c = 0; c < width; ++c) {
      const Eigen::Index t = t_begin + c * col_hop;
      // slice whose frame span contains t (last slice starting at or before t)
      std::size_t si = 0;
      for (std::size_t i = 0; i < analysis.slices.size(); ++i) {
        if (analysis.slices[i].first_frame_start <= t) si = i;
      }
      const auto& slice = analysis.slices[si];
      const Eigen::Index frame = std::clamp<Eigen::Index>(
          (t - slice.first_frame_start) / slice.hop, 0, slice.num_frames() - 1);
      for (Eigen::Index k = 0; k < bins; ++k) {
        const double db = to_db(powers[si](frame, k) / peak, db_floor);
        const double unit = (db - db_floor) / (0.0 - db_floor);
        const Eigen::Index row = bins - 1 - k;  // Nyquist on top
        pixels[static_cast<std::size_t>(row) * width + c] =
            static_cast<std::uint8_t>(std::lround(unit * 255.0));
      }
    }
  }

  FileWriter out(path);
  std::fprintf(out.f, "P5\n%lld %lld\n255\n", static_cast<long long>(width),
               static_cast<long long>(bins));
  std::fwrite(pixels.data(), 1, pixels.size(), out.f);
  out.close(path);
}

void export_selection(const SelectionTrack& track, const std::string& path) {
  FileWriter out(path);
  std::fprintf(out.f, "# sample_rate=%.17g\n", track.sample_rate);
  std::fprintf(out.f, "start_sec,end_sec,window_len,entropy_bits\n");
  for (const auto& e : track.entries) {
    std::fprintf(out.f, "%.17g,%.17g,%lld,", static_cast<double>(e.start) / track.sample_rate,
                 static_cast<double>(e.end) / track.sample_rate,
                 static_cast<long long>(e.window_len));
    for (std::size_t i = 0; i < e.entropy_bits.size(); ++i) {
      if (i) std::fputc(';', out.f);
      if (e.entropy_bits[i])
        std::fprintf(out.f, "%.17g", *e.entropy_bits[i]);
      else
        std::fputs("silent", out.f);
    }
    std::fputc('\n', out.f);
  }
  out.close(path);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_header_value(const std::string& line, const std::string& key,
                          const std::string& path) {
  const std::string prefix = "# " + key + "=";
  if (line.rfind(prefix, 0) != 0)
    throw std::runtime_error(path + ": expected '" + prefix + "' header line");
  return std::stod(line.substr(prefix.size()));
}

}  // namespace

SpectrogramCsv parse_spectrogram_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  SpectrogramCsv out;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  out.sample_rate = parse_header_value(line, "sample_rate", path);
  if (!std::getline(in, line)) throw std::runtime_error(path + ": missing slices header");
  out.num_slices = static_cast<std::size_t>(parse_header_value(line, "slices", path));
  if (!std::getline(in, line) || line != "time_sec,freq_hz,power_db,window_len")
    throw std::runtime_error(path + ": missing column header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw std::runtime_error(path + ": malformed row: " + line);
    out.rows.push_back({std::stod(fields[0]), std::stod(fields[1]), std::stod(fields[2]),
                        std::stol(fields[3])});
  }
  return out;
}

ParsedSelection parse_selection(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ParsedSelection out;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  out.sample_rate = parse_header_value(line, "sample_rate", path);
  if (!std::getline(in, line) || line != "start_sec,end_sec,window_len,entropy_bits")
    throw std::runtime_error(path + ": missing column header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw std::runtime_error(path + ": malformed row: " + line);
    ParsedSelection::Row row;
    row.start_sec = std::stod(fields[0]);
    row.end_sec = std::stod(fields[1]);
    row.window_len = std::stol(fields[2]);
    for (const auto& item : split(fields[3], ';')) {
      if (item == "silent")
        row.entropy_bits.push_back(std::nullopt);
      else
        row.entropy_bits.push_back(std::stod(item));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

PgmImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string magic;
  int maxval = 0;
  PgmImage img;
  in >> magic >> img.width >> img.height >> maxval;
  if (magic != "P5" || maxval != 255 || img.width < 1 || img.height < 1)
    throw std::runtime_error(path + ": not a maxval-255 P5 PGM");
  in.get();  // single whitespace after maxval
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw std::runtime_error(path + ": truncated pixel data");
  return img;
}

}  // namespace adaspec
