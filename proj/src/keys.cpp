#include "speechenc/keys.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

#include "speechenc/blocking.hpp"
#include "speechenc/rng.hpp"

namespace speechenc {

namespace {

void check_keygen_args(Index M, int dims) {
  if (M < 1) fail(ErrorCode::invalid_block_size, "block size must be >= 1");
  if (dims != 1 && dims != 2)
    fail(ErrorCode::usage, "dims must be 1 or 2");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::shuffle: return "shuffle";
    case Method::flip: return "flip";
    case Method::rom: return "rom";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  if (name == "shuffle") return Method::shuffle;
  if (name == "flip") return Method::flip;
  if (name == "rom") return Method::rom;
  return std::nullopt;
}

Method key_method(const SecretKey& key) {
  return std::visit(Overloaded{[](const ShuffleKey&) { return Method::shuffle; },
                               [](const FlipKey&) { return Method::flip; },
                               [](const RomKey&) { return Method::rom; }},
                    key);
}

Index key_block_size(const SecretKey& key) {
  return std::visit([](const auto& k) { return k.M; }, key);
}

int key_dims(const SecretKey& key) {
  return std::visit([](const auto& k) { return k.dims; }, key);
}

Index key_elems(const SecretKey& key) {
  return std::visit([](const auto& k) { return k.N(); }, key);
}

std::optional<std::uint64_t> key_seed(const SecretKey& key) {
  return std::visit([](const auto& k) { return k.seed; }, key);
}

ShuffleKey keygen_shuffle(Index M, int dims, std::uint64_t seed) {
  check_keygen_args(M, dims);
  const Index n = block_elems_for(M, dims);
  ShuffleKey key{M, dims, std::vector<Index>(static_cast<std::size_t>(n)), seed};
  std::iota(key.perm.begin(), key.perm.end(), Index{0});
  SplitMix64 rng(seed);
  // Fisher-Yates, high index down.
  for (Index i = n - 1; i >= 1; --i) {
    const auto j = static_cast<Index>(
        rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(key.perm[static_cast<std::size_t>(i)],
              key.perm[static_cast<std::size_t>(j)]);
  }
  return key;
}

FlipKey keygen_flip(Index M, int dims, std::uint64_t seed) {
  check_keygen_args(M, dims);
  const Index n = block_elems_for(M, dims);
  FlipKey key{M, dims, std::vector<std::uint8_t>(static_cast<std::size_t>(n)), seed};
  SplitMix64 rng(seed);
  for (auto& bit : key.bits)
    bit = static_cast<std::uint8_t>(rng.uniform_double() * 2.0);
  return key;
}

SignedQr signed_qr(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    fail(ErrorCode::shape, "QR input must be square and nonempty");
  Eigen::HouseholderQR<Matrix> qr(a);
  SignedQr out;
  out.Q = qr.householderQ() * Matrix::Identity(a.rows(), a.rows());
  out.R = qr.matrixQR().template triangularView<Eigen::Upper>();
  // Negating column i of Q and row i of R keeps Q*R = A while forcing R's
  // diagonal nonnegative; this is the unique factorization that makes Q
  // Haar-distributed for Gaussian A.
  for (Index i = 0; i < a.rows(); ++i) {
    if (out.R(i, i) < 0) {
      out.Q.col(i) = -out.Q.col(i);
      out.R.row(i) = -out.R.row(i);
    }
  }
  return out;
}

Scalar orthogonality_defect(const Matrix& k) {
  const Matrix gram = k * k.transpose();
  return (gram - Matrix::Identity(k.rows(), k.rows())).cwiseAbs().maxCoeff();
}

RomKey keygen_rom(Index M, int dims, std::uint64_t seed) {
  check_keygen_args(M, dims);
  const Index n = block_elems_for(M, dims);
  SplitMix64 rng(seed);
  Matrix gaussian(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) gaussian(r, c) = rng.normal();
  return RomKey{M, dims, signed_qr(gaussian).Q, seed};
}

SecretKey keygen(Method method, Index M, int dims, std::uint64_t seed) {
  switch (method) {
    case Method::shuffle: return keygen_shuffle(M, dims, seed);
    case Method::flip: return keygen_flip(M, dims, seed);
    case Method::rom: return keygen_rom(M, dims, seed);
  }
  fail(ErrorCode::usage, "unknown method");
}

SecretKey invert_key(const SecretKey& key) {
  return std::visit(
      Overloaded{
          [](const ShuffleKey& k) -> SecretKey {
            ShuffleKey inv = k;
            for (std::size_t i = 0; i < k.perm.size(); ++i)
              inv.perm[static_cast<std::size_t>(k.perm[i])] =
                  static_cast<Index>(i);
            return inv;
          },
          // Sign inversion is an involution.
          [](const FlipKey& k) -> SecretKey { return k; },
          [](const RomKey& k) -> SecretKey {
            RomKey inv = k;
            inv.matrix = k.matrix.transpose();
            return inv;
          },
      },
      key);
}

std::string KeySpace::describe() const {
  if (continuous) {
    return "continuous (" + std::to_string(n) + "x" + std::to_string(n) +
           " real orthogonal matrix)";
  }
  char bits_text[32];
  std::snprintf(bits_text, sizeof bits_text, "%.3f", bits);
  return count.to_string() + " (" + bits_text + " bits)";
}

KeySpace keyspace(Method method, Index M, int dims) {
  check_keygen_args(M, dims);
  const Index n = block_elems_for(M, dims);
  KeySpace space;
  space.n = n;
  switch (method) {
    case Method::shuffle:
      space.count = BigUint::factorial(static_cast<std::uint64_t>(n));
      space.bits = std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
      break;
    case Method::flip:
      space.count = BigUint::pow2(static_cast<std::uint64_t>(n));
      space.bits = static_cast<double>(n);
      break;
    case Method::rom:
      space.continuous = true;
      break;
  }
  return space;
}

}  // namespace speechenc
