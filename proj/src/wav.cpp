#include "adaspec/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "adaspec/errors.hpp"

namespace adaspec {

namespace {

struct Reader {
  std::vector<std::uint8_t> bytes;
  std::size_t pos = 0;

  void need(std::size_t count, const char* what) const {
    if (pos + count > bytes.size())
      throw WavParseError(std::string("truncated while reading ") + what, pos);
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = static_cast<std::uint32_t>(bytes[pos]) |
                      (static_cast<std::uint32_t>(bytes[pos + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes[pos + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes[pos + 3]) << 24);
    pos += 4;
    return v;
  }
  void tag(char out[4], const char* what) {
    need(4, what);
    std::memcpy(out, bytes.data() + pos, 4);
    pos += 4;
  }
};

void append_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
  v.push_back(static_cast<std::uint8_t>(x & 0xff));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
}

void append_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  v.push_back(static_cast<std::uint8_t>(x & 0xff));
  v.push_back(static_cast<std::uint8_t>((x >> 8) & 0xff));
  v.push_back(static_cast<std::uint8_t>((x >> 16) & 0xff));
  v.push_back(static_cast<std::uint8_t>((x >> 24) & 0xff));
}

void append_tag(std::vector<std::uint8_t>& v, const char tag[4]) {
  v.insert(v.end(), tag, tag + 4);
}

}  // namespace

Signal read_wav(const std::string& path) {
  Reader r;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_wav: cannot open " + path);
    r.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  char tag[4];
  r.tag(tag, "RIFF id");
  if (std::memcmp(tag, "RIFF", 4) != 0) throw WavParseError("not a RIFF file", 0);
  r.u32("RIFF size");
  r.tag(tag, "WAVE id");
  if (std::memcmp(tag, "WAVE", 4) != 0) throw WavParseError("not a WAVE file", 8);

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  Signal out;
  bool have_data = false;

  while (r.pos + 8 <= r.bytes.size()) {
    r.tag(tag, "chunk id");
    const std::uint32_t size = r.u32("chunk size");
    const std::size_t payload = r.pos;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) throw WavParseError("fmt chunk too small", payload);
      format = r.u16("audio format");
      channels = r.u16("channel count");
      sample_rate = r.u32("sample rate");
      r.u32("byte rate");
      r.u16("block align");
      bits = r.u16("bits per sample");
      if (channels < 1) throw WavParseError("zero channels", payload);
      if (sample_rate == 0) throw WavParseError("zero sample rate", payload);
      const bool pcm16 = (format == 1 && bits == 16);
      const bool f32 = (format == 3 && bits == 32);
      if (!pcm16 && !f32)
        throw UnsupportedFormat("read_wav: only PCM 16-bit and IEEE float 32 are supported (format " +
                                std::to_string(format) + ", " + std::to_string(bits) + " bits)");
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw WavParseError("data chunk before fmt chunk", payload);
      r.need(size, "data payload");
      const std::size_t bytes_per_sample = bits / 8;
      const std::size_t frame_bytes = bytes_per_sample * channels;
      if (frame_bytes == 0 || size % frame_bytes != 0)
        throw WavParseError("data size is not a whole number of frames", payload);
      const std::size_t frames = size / frame_bytes;
      if (frames == 0) throw WavParseError("empty data chunk", payload);
      out.samples.resize(static_cast<Eigen::Index>(frames));
      const std::uint8_t* d = r.bytes.data() + r.pos;
      for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
          const std::uint8_t* s = d + (f * channels + c) * bytes_per_sample;
          if (format == 1) {
            std::int16_t v;
            std::memcpy(&v, s, 2);
            acc += static_cast<double>(v) / 32768.0;
          } else {
            float v;
            std::memcpy(&v, s, 4);
            acc += static_cast<double>(v);
          }
        }
        out.samples[static_cast<Eigen::Index>(f)] = acc / channels;
      }
      r.pos += size;
      have_data = true;
    } else {
      r.need(size, "chunk payload");
      r.pos += size;
    }
    if (size % 2 == 1 && r.pos < r.bytes.size()) ++r.pos;  // chunk padding
  }

  if (!have_data) throw WavParseError("no data chunk", r.pos);
  out.sample_rate = static_cast<double>(sample_rate);
  return out;
}

void write_wav(const Signal& signal, const std::string& path, WavFormat format) {
  if (signal.size() < 1) throw std::invalid_argument("write_wav: empty signal");
  if (!(signal.sample_rate > 0.0))
    throw std::invalid_argument("write_wav: sample rate must be positive");
  if (!signal.samples.isFinite().all())
    throw std::invalid_argument("write_wav: samples must be finite");

  const std::size_t n = static_cast<std::size_t>(signal.size());
  const std::uint32_t sr = static_cast<std::uint32_t>(std::llround(signal.sample_rate));
  const bool f32 = (format == WavFormat::float32);
  const std::uint16_t bytes_per_sample = f32 ? 4 : 2;
  const std::uint32_t data_size = static_cast<std::uint32_t>(n * bytes_per_sample);

  std::vector<std::uint8_t> out;
  out.reserve(64 + data_size);
  append_tag(out, "RIFF");
  // fmt (24 incl. header) + optional fact (12) + data header (8)
  append_u32(out, 4 + 24 + (f32 ? 12u : 0u) + 8 + data_size);
  append_tag(out, "WAVE");
  append_tag(out, "fmt ");
  append_u32(out, 16);
  append_u16(out, f32 ? 3 : 1);
  append_u16(out, 1);  // mono
  append_u32(out, sr);
  append_u32(out, sr * bytes_per_sample);
  append_u16(out, bytes_per_sample);
  append_u16(out, f32 ? 32 : 16);
  if (f32) {  // non-PCM codecs carry a fact chunk
    append_tag(out, "fact");
    append_u32(out, 4);
    append_u32(out, static_cast<std::uint32_t>(n));
  }
  append_tag(out, "data");
  append_u32(out, data_size);

  if (f32) {
    for (std::size_t i = 0; i < n; ++i) {
      const float v = static_cast<float>(signal.samples[static_cast<Eigen::Index>(i)]);
      std::uint32_t u;
      std::memcpy(&u, &v, 4);
      append_u32(out, u);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = signal.samples[static_cast<Eigen::Index>(i)];
      long long v = std::llround(x * 32768.0);
      if (v > 32767) v = 32767;
      if (v < -32768) v = -32768;
      append_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_wav: cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write_wav: write failed for " + path);
}

}  // namespace adaspec
