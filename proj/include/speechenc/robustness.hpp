#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "speechenc/cipher.hpp"
#include "speechenc/conv.hpp"

namespace speechenc {

// sqrt(sum((a_i - b_i)^2)) over all entries; ShapeError on extent mismatch.
Scalar euclidean_distance(const Signal& a, const Signal& b);

// euclidean_distance(a, b) / ||a||_2, with 0/0 defined as 0.
Scalar normalized_distance(const Signal& a, const Signal& b);

struct RobustnessTrial {
  std::uint64_t wrong_seed = 0;
  // Wrong-key decryption of the correctly encrypted signal, measured
  // against the correct-key decryption.
  Scalar decrypt_dist = 0.0;
  Scalar decrypt_dist_norm = 0.0;
  // Distance between the signal encrypted with the wrong key and the
  // signal encrypted with the correct key.
  Scalar encrypt_dist = 0.0;
  Scalar encrypt_dist_norm = 0.0;
  // Feature-map divergence through a fixed random kernel bank when the
  // query key does not match the model key.
  Scalar divergence = 0.0;
};

struct SummaryStats {
  Scalar mean = 0.0;
  Scalar median = 0.0;
  Scalar min = 0.0;
  Scalar max = 0.0;
  Scalar variance = 0.0;

  static SummaryStats of(std::vector<Scalar> values);
};

struct RobustnessReport {
  Method method{};
  Index M = 0;
  std::uint64_t wrong_seed_start = 0;
  std::vector<RobustnessTrial> trials;

  std::vector<Scalar> column(Scalar RobustnessTrial::* field) const;

  // Header row, one row per trial, then '#'-prefixed summary lines
  // (mean/median/min/max/variance per metric). Byte-deterministic.
  void write_csv(std::ostream& out) const;
};

// Generates n_wrong keys from seeds wrong_seed_start, wrong_seed_start+1, ...
// and probes each against the correct key. A trial whose seed reproduces the
// correct key is a control row: all its metrics are exactly zero.
RobustnessReport wrong_key_sweep(const Signal& signal,
                                 const SecretKey& correct_key, int n_wrong,
                                 std::uint64_t wrong_seed_start);

struct BlockSizeRow {
  Index M = 0;
  Scalar enc_dist_norm = 0.0;   // ||enc(X) - X|| / ||X|| on the padded signal
  Scalar flatness_plain = 0.0;  // spectral flatness before encryption
  Scalar flatness_enc = 0.0;    // and after
};

// Encrypts the signal once per block size with a fresh key and tabulates
// distortion proxies. Informational; no monotonicity is implied.
std::vector<BlockSizeRow> block_size_sweep(const Signal& signal,
                                           Method method,
                                           const std::vector<Index>& block_sizes,
                                           std::uint64_t seed);

void write_csv(const std::vector<BlockSizeRow>& rows, std::ostream& out);

// Geometric over arithmetic mean of the power entries; 2-D signals are used
// as-is, 1-D signals go through a short internal STFT first.
Scalar spectral_flatness(const Signal& signal);

}  // namespace speechenc
