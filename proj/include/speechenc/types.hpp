#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace speechenc {

using Scalar = double;
using Index = Eigen::Index;

// Row-major storage so flattening a block is a plain row-by-row read.
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class ErrorCode {
  usage,
  invalid_block_size,
  shape,
  key_mismatch,
  invalid_signal,
  patch_size_mismatch,
  key_format,
  wav_format,
  matrix_format,
  unsupported_signal,
  too_short,
  io,
};

constexpr const char* error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "UsageError";
    case ErrorCode::invalid_block_size: return "InvalidBlockSize";
    case ErrorCode::shape: return "ShapeError";
    case ErrorCode::key_mismatch: return "KeyMismatch";
    case ErrorCode::invalid_signal: return "InvalidSignal";
    case ErrorCode::patch_size_mismatch: return "PatchSizeMismatch";
    case ErrorCode::key_format: return "KeyFormatError";
    case ErrorCode::wav_format: return "WavFormatError";
    case ErrorCode::matrix_format: return "MatrixFormatError";
    case ErrorCode::unsupported_signal: return "UnsupportedSignal";
    case ErrorCode::too_short: return "TooShort";
    case ErrorCode::io: return "IoError";
  }
  return "Error";
}

// Single exception type for the whole library. category() feeds the CLI's
// one-line "error: <category>: <detail>" diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* category() const { return error_category(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace speechenc
