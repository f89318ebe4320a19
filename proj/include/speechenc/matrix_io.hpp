#pragma once

#include <filesystem>

#include "speechenc/types.hpp"

namespace speechenc {

// SPM1 matrix file: magic "SPM1", uint32 rows, uint32 cols (little-endian),
// then rows*cols float64 values, little-endian, row-major. Round trips are
// bit-exact for every finite value including negative zero and subnormals.
void write_matrix(const Matrix& values, const std::filesystem::path& path);
Matrix read_matrix(const std::filesystem::path& path);

}  // namespace speechenc
