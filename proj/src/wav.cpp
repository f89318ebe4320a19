#include "speechenc/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace speechenc {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
}

[[noreturn]] void bad(const std::string& detail) {
  fail(ErrorCode::wav_format, detail);
}

}  // namespace

Signal read_wav(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    bad("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data_ptr = nullptr;
  std::uint32_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) bad("truncated chunk at offset " + std::to_string(pos));
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) bad("fmt chunk too small");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data_ptr = chunk + 8;
      data_size = size;
      have_data = true;
    }
    pos = body + size + (size & 1);  // chunks are word-aligned
  }
  if (!have_fmt) bad("missing fmt chunk");
  if (!have_data) bad("missing data chunk");
  if (channels != 1)
    bad("only mono is supported, file has " + std::to_string(channels) +
        " channels");

  Vector samples;
  if (format == 1 && bits == 16) {
    if (data_size % 2 != 0) bad("truncated 16-bit sample data");
    const std::size_t n = data_size / 2;
    samples.resize(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto raw = static_cast<std::int16_t>(read_u16(data_ptr + 2 * i));
      samples[static_cast<Index>(i)] = static_cast<double>(raw) / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    if (data_size % 4 != 0) bad("truncated float32 sample data");
    const std::size_t n = data_size / 4;
    samples.resize(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t word = read_u32(data_ptr + 4 * i);
      float value;
      std::memcpy(&value, &word, sizeof value);
      samples[static_cast<Index>(i)] = static_cast<double>(value);
    }
  } else {
    bad("unsupported codec (format " + std::to_string(format) + ", " +
        std::to_string(bits) + "-bit); expected PCM16 or float32");
  }
  return Signal::waveform(std::move(samples), static_cast<double>(rate));
}

void write_wav(const Signal& signal, const std::filesystem::path& path) {
  if (signal.dims != 1)
    fail(ErrorCode::unsupported_signal, "only 1-D signals can be written as WAV");
  if (!signal.sample_rate)
    fail(ErrorCode::invalid_signal, "signal has no sample rate");
  if (signal.data.size() > 0 && !signal.data.allFinite())
    fail(ErrorCode::invalid_signal, "signal contains NaN or Inf values");

  const Index n = signal.T();
  if (n > (0xFFFFFFFFu - 44) / 4)
    fail(ErrorCode::unsupported_signal, "signal too long for a RIFF container");
  const std::uint32_t data_size = static_cast<std::uint32_t>(n) * 4;

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 3);  // IEEE float
  put_u16(out, 1);  // mono
  const auto rate = static_cast<std::uint32_t>(std::lround(*signal.sample_rate));
  put_u32(out, rate);
  put_u32(out, rate * 4);
  put_u16(out, 4);
  put_u16(out, 32);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);
  for (Index i = 0; i < n; ++i) {
    const auto value = static_cast<float>(signal.data(0, i));
    std::uint32_t word;
    std::memcpy(&word, &value, sizeof word);
    put_u32(out, word);
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::io, "cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) fail(ErrorCode::io, "failed writing " + path.string());
}

}  // namespace speechenc
