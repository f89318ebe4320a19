#include "speechenc/robustness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "speechenc/model_enc.hpp"
#include "speechenc/rng.hpp"
#include "speechenc/stft.hpp"

namespace speechenc {

namespace {

// Salt so the probe bank is independent of the wrong-key seed stream.
constexpr std::uint64_t kBankSalt = 0x5b4ec1a96f8d3702ull;
constexpr Index kBankChannels = 4;

std::string fmt(Scalar value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

KernelBank probe_bank(Index M, int dims, std::uint64_t seed) {
  SplitMix64 rng(seed ^ kBankSalt);
  const Index rows = dims == 1 ? 1 : M;
  KernelBank bank;
  for (Index c = 0; c < kBankChannels; ++c) {
    Kernel kernel;
    kernel.weights.resize(rows, M);
    for (Index r = 0; r < rows; ++r)
      for (Index j = 0; j < M; ++j) kernel.weights(r, j) = rng.normal();
    bank.kernels.push_back(std::move(kernel));
  }
  return bank;
}

}  // namespace

Scalar euclidean_distance(const Signal& a, const Signal& b) {
  if (a.F() != b.F() || a.T() != b.T())
    fail(ErrorCode::shape, "signals have different extents: " +
                               std::to_string(a.F()) + "x" + std::to_string(a.T()) +
                               " vs " + std::to_string(b.F()) + "x" +
                               std::to_string(b.T()));
  return (a.data - b.data).norm();
}

Scalar normalized_distance(const Signal& a, const Signal& b) {
  const Scalar dist = euclidean_distance(a, b);
  if (dist == 0.0) return 0.0;
  return dist / a.data.norm();
}

SummaryStats SummaryStats::of(std::vector<Scalar> values) {
  SummaryStats stats;
  if (values.empty()) return stats;
  const auto n = static_cast<Scalar>(values.size());
  stats.mean = 0.0;
  for (Scalar v : values) stats.mean += v;
  stats.mean /= n;
  for (Scalar v : values) stats.variance += (v - stats.mean) * (v - stats.mean);
  stats.variance /= n;
  std::sort(values.begin(), values.end());
  stats.min = values.front();
  stats.max = values.back();
  const std::size_t mid = values.size() / 2;
  stats.median = values.size() % 2 == 1
                     ? values[mid]
                     : 0.5 * (values[mid - 1] + values[mid]);
  return stats;
}

std::vector<Scalar> RobustnessReport::column(
    Scalar RobustnessTrial::* field) const {
  std::vector<Scalar> out;
  out.reserve(trials.size());
  for (const RobustnessTrial& trial : trials) out.push_back(trial.*field);
  return out;
}

void RobustnessReport::write_csv(std::ostream& out) const {
  out << "trial,wrong_seed,decrypt_dist,decrypt_dist_norm,encrypt_dist,"
         "encrypt_dist_norm,divergence\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const RobustnessTrial& t = trials[i];
    out << i << ',' << t.wrong_seed << ',' << fmt(t.decrypt_dist) << ','
        << fmt(t.decrypt_dist_norm) << ',' << fmt(t.encrypt_dist) << ','
        << fmt(t.encrypt_dist_norm) << ',' << fmt(t.divergence) << '\n';
  }
  const auto summarize = [&](const char* name, Scalar RobustnessTrial::* field) {
    const SummaryStats s = SummaryStats::of(column(field));
    out << "# summary," << name << ',' << fmt(s.mean) << ',' << fmt(s.median)
        << ',' << fmt(s.min) << ',' << fmt(s.max) << ',' << fmt(s.variance)
        << '\n';
  };
  out << "# summary,column,mean,median,min,max,variance\n";
  summarize("decrypt_dist", &RobustnessTrial::decrypt_dist);
  summarize("decrypt_dist_norm", &RobustnessTrial::decrypt_dist_norm);
  summarize("encrypt_dist", &RobustnessTrial::encrypt_dist);
  summarize("encrypt_dist_norm", &RobustnessTrial::encrypt_dist_norm);
  summarize("divergence", &RobustnessTrial::divergence);
}

RobustnessReport wrong_key_sweep(const Signal& signal,
                                 const SecretKey& correct_key, int n_wrong,
                                 std::uint64_t wrong_seed_start) {
  if (n_wrong < 1) fail(ErrorCode::usage, "need at least one trial");

  const Method method = key_method(correct_key);
  const Index M = key_block_size(correct_key);
  const int dims = key_dims(correct_key);

  RobustnessReport report;
  report.method = method;
  report.M = M;
  report.wrong_seed_start = wrong_seed_start;

  const Signal enc_correct = encrypt(signal, correct_key);
  const Signal dec_correct = decrypt(enc_correct, correct_key);
  const KernelBank bank = probe_bank(M, dims, wrong_seed_start);

  for (int i = 0; i < n_wrong; ++i) {
    const std::uint64_t wrong_seed = wrong_seed_start + static_cast<std::uint64_t>(i);
    const SecretKey wrong = keygen(method, M, dims, wrong_seed);

    RobustnessTrial trial;
    trial.wrong_seed = wrong_seed;
    const Signal dec_wrong = decrypt(enc_correct, wrong);
    trial.decrypt_dist = euclidean_distance(dec_correct, dec_wrong);
    trial.decrypt_dist_norm = normalized_distance(dec_correct, dec_wrong);
    const Signal enc_wrong = encrypt(signal, wrong);
    trial.encrypt_dist = euclidean_distance(enc_correct, enc_wrong);
    trial.encrypt_dist_norm = normalized_distance(enc_correct, enc_wrong);
    trial.divergence = mismatch_probe(signal, bank, correct_key, wrong);
    report.trials.push_back(trial);
  }
  return report;
}

Scalar spectral_flatness(const Signal& signal) {
  Matrix power;
  if (signal.dims == 2) {
    power = signal.data.array().square();
  } else {
    const Index T = signal.T();
    if (T == 0) return 0.0;
    StftConfig cfg;
    cfg.window = std::min<Index>(256, T);
    cfg.hop = std::max<Index>(1, cfg.window / 2);
    power = stft_magnitude(signal, cfg).data.array().square();
  }
  if (power.size() == 0) return 0.0;
  constexpr Scalar kGuard = 1e-20;
  const Scalar log_mean = (power.array() + kGuard).log().mean();
  return std::exp(log_mean) / (power.mean() + kGuard);
}

std::vector<BlockSizeRow> block_size_sweep(const Signal& signal, Method method,
                                           const std::vector<Index>& block_sizes,
                                           std::uint64_t seed) {
  std::vector<BlockSizeRow> rows;
  rows.reserve(block_sizes.size());
  const Scalar flatness_plain = spectral_flatness(signal);
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    const Index M = block_sizes[i];
    const SecretKey key =
        keygen(method, M, signal.dims, seed + static_cast<std::uint64_t>(i));
    const Signal enc = encrypt(signal, key);

    BlockSizeRow row;
    row.M = M;
    // Compare against the identically padded plain signal.
    const Partitioned padded = partition(signal, M);
    row.enc_dist_norm = normalized_distance(padded.padded, enc);
    row.flatness_plain = flatness_plain;
    row.flatness_enc = spectral_flatness(trim_to_original(enc));
    rows.push_back(row);
  }
  return rows;
}

void write_csv(const std::vector<BlockSizeRow>& rows, std::ostream& out) {
  out << "block_size,enc_dist_norm,flatness_plain,flatness_encrypted\n";
  for (const BlockSizeRow& row : rows)
    out << row.M << ',' << fmt(row.enc_dist_norm) << ',' << fmt(row.flatness_plain)
        << ',' << fmt(row.flatness_enc) << '\n';
}

}  // namespace speechenc
