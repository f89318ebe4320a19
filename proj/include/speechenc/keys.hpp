#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "speechenc/bigint.hpp"
#include "speechenc/types.hpp"

namespace speechenc {

enum class Method { shuffle, flip, rom };

const char* method_name(Method method);
std::optional<Method> method_from_name(std::string_view name);

// Gather permutation over the N flattened block positions:
// encrypted[k] = plain[perm[k]].
struct ShuffleKey {
  Index M = 0;
  int dims = 1;
  std::vector<Index> perm;  // bijection on {0, ..., N-1}
  std::optional<std::uint64_t> seed;

  Index N() const { return static_cast<Index>(perm.size()); }
};

// Per-element sign inversion: bit 1 multiplies the element by -1.
struct FlipKey {
  Index M = 0;
  int dims = 1;
  std::vector<std::uint8_t> bits;  // each 0 or 1
  std::optional<std::uint64_t> seed;

  Index N() const { return static_cast<Index>(bits.size()); }
};

// Random orthogonal N x N matrix applied to each flattened block.
struct RomKey {
  Index M = 0;
  int dims = 1;
  Matrix matrix;
  std::optional<std::uint64_t> seed;

  Index N() const { return matrix.rows(); }
};

using SecretKey = std::variant<ShuffleKey, FlipKey, RomKey>;

Method key_method(const SecretKey& key);
Index key_block_size(const SecretKey& key);
int key_dims(const SecretKey& key);
Index key_elems(const SecretKey& key);
std::optional<std::uint64_t> key_seed(const SecretKey& key);

// Deterministic keygen: the same (M, dims, seed) always yields the same key.
ShuffleKey keygen_shuffle(Index M, int dims, std::uint64_t seed);
FlipKey keygen_flip(Index M, int dims, std::uint64_t seed);
RomKey keygen_rom(Index M, int dims, std::uint64_t seed);
SecretKey keygen(Method method, Index M, int dims, std::uint64_t seed);

// shuffle -> inverse permutation, flip -> itself, rom -> transpose.
SecretKey invert_key(const SecretKey& key);

// Householder QR with the factorization made unique: columns of Q and rows
// of R are negated wherever R's diagonal is negative, so R's diagonal ends
// up nonnegative. For a standard-normal input this makes Q uniform over the
// orthogonal group.
struct SignedQr {
  Matrix Q;
  Matrix R;
};
SignedQr signed_qr(const Matrix& a);

// Largest absolute entry of K*K^T - I; the orthogonality defect.
Scalar orthogonality_defect(const Matrix& k);

struct KeySpace {
  bool continuous = false;  // ROM: uncountable, reported descriptively
  BigUint count;            // exact for shuffle/flip
  double bits = 0.0;        // log2(count)
  Index n = 0;              // key element count N

  std::string describe() const;  // "6 (2.585 bits)" or "continuous (...)"
};
KeySpace keyspace(Method method, Index M, int dims);

void save_key(const SecretKey& key, const std::filesystem::path& path);
SecretKey load_key(const std::filesystem::path& path);

}  // namespace speechenc
