#include "speechenc/matrix_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace speechenc {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'M', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_matrix(const Matrix& values, const std::filesystem::path& path) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + static_cast<std::size_t>(values.size()) * 8);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(values.rows()));
  put_u32(out, static_cast<std::uint32_t>(values.cols()));
  const Scalar* data = values.data();  // row-major
  for (Index i = 0; i < values.size(); ++i) {
    std::uint64_t word;
    std::memcpy(&word, data + i, sizeof word);
    for (int shift = 0; shift < 64; shift += 8)
      out.push_back(static_cast<std::uint8_t>((word >> shift) & 0xFF));
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::io, "cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) fail(ErrorCode::io, "failed writing " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorCode::matrix_format, "bad magic, not an SPM1 file");
  const std::uint64_t rows = read_u32(bytes.data() + 4);
  const std::uint64_t cols = read_u32(bytes.data() + 8);
  const std::uint64_t expected = 12 + rows * cols * 8;
  if (bytes.size() != expected)
    fail(ErrorCode::matrix_format,
         "declared " + std::to_string(rows) + "x" + std::to_string(cols) +
             " needs " + std::to_string(expected) + " bytes, file has " +
             std::to_string(bytes.size()));

  Matrix values(static_cast<Index>(rows), static_cast<Index>(cols));
  Scalar* data = values.data();
  const std::uint8_t* p = bytes.data() + 12;
  for (std::uint64_t i = 0; i < rows * cols; ++i, p += 8) {
    std::uint64_t word = 0;
    for (int b = 7; b >= 0; --b) word = (word << 8) | p[b];
    std::memcpy(data + i, &word, sizeof word);
  }
  return values;
}

}  // namespace speechenc
