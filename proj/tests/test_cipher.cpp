#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "speechenc/cipher.hpp"
#include "test_util.hpp"

using namespace speechenc;

namespace {

// The 3x3 orthogonal example matrix, as printed to four decimals.
Matrix example_rom_matrix() {
  Matrix k(3, 3);
  k << 0.9898, -0.0661, -0.1264,
       0.1309,  0.7732,  0.6205,
       0.0568, -0.6307,  0.7740;
  return k;
}

bool exactly_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

}  // namespace

TEST_CASE("shuffle encryption gathers by the key") {
  // Key [2, 0, 1] is the 0-based form of the example key [3, 1, 2]:
  // output[k] = input[perm[k]] -> [x3, x1, x2].
  const ShuffleKey key{3, 1, {2, 0, 1}, std::nullopt};
  Vector x(3);
  x << 10, 20, 30;
  const Vector enc = encrypt_vector(x, SecretKey{key});
  CHECK(enc[0] == 30);
  CHECK(enc[1] == 10);
  CHECK(enc[2] == 20);

  Signal sig = Signal::waveform(x);
  const Signal enc_sig = encrypt(sig, SecretKey{key});
  CHECK(enc_sig.data(0, 0) == 30);
  CHECK(enc_sig.data(0, 1) == 10);
  CHECK(enc_sig.data(0, 2) == 20);
}

TEST_CASE("flip encryption negates exactly the keyed positions") {
  const FlipKey key{3, 1, {0, 0, 1}, std::nullopt};
  Vector x(3);
  x << 1, -2, 3;
  const Vector enc = encrypt_vector(x, SecretKey{key});
  CHECK(enc[0] == 1);
  CHECK(enc[1] == -2);
  CHECK(enc[2] == -3);
}

TEST_CASE("rom encryption is row-vector times matrix") {
  const RomKey key{3, 1, example_rom_matrix(), std::nullopt};
  Vector x(3);
  x << 1, 0, 0;
  const Vector enc = encrypt_vector(x, SecretKey{key});
  // e1 * K selects the first row of K.
  CHECK(enc[0] == doctest::Approx(0.9898).epsilon(1e-12));
  CHECK(enc[1] == doctest::Approx(-0.0661).epsilon(1e-12));
  CHECK(enc[2] == doctest::Approx(-0.1264).epsilon(1e-12));

  // Cross-check a dense input against an explicit matrix-vector oracle.
  Vector y(3);
  y << 0.25, -1.5, 2.0;
  const Vector enc_y = encrypt_vector(y, SecretKey{key});
  const Matrix k = example_rom_matrix();
  for (Index j = 0; j < 3; ++j) {
    Scalar oracle = 0.0;
    for (Index i = 0; i < 3; ++i) oracle += y[i] * k(i, j);
    CHECK(enc_y[j] == doctest::Approx(oracle).epsilon(1e-14));
  }
}

TEST_CASE("decrypt(encrypt(x)) is the identity for every method") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    // Lengths that do and do not divide by M = 4.
    for (Index T : {16, 19}) {
      const Signal sig = test_util::random_waveform(T, 100 + seed);
      for (Method method : {Method::shuffle, Method::flip, Method::rom}) {
        const SecretKey key = keygen(method, 4, 1, seed);
        const Signal enc = encrypt(sig, key);
        CHECK(enc.T() % 4 == 0);
        const Signal dec = decrypt(enc, key);
        REQUIRE(dec.T() == T);
        if (method == Method::rom) {
          for (Index i = 0; i < T; ++i)
            CHECK(std::abs(dec.data(0, i) - sig.data(0, i)) <=
                  1e-12 * (1.0 + std::abs(sig.data(0, i))));
        } else {
          CHECK(exactly_equal(dec.data, sig.data));
        }
      }
    }
  }
}

TEST_CASE("decrypt(encrypt(x)) is the identity on 2-D signals") {
  const Signal sig = test_util::random_spectrogram(7, 11, 9);
  for (Method method : {Method::shuffle, Method::flip, Method::rom}) {
    const SecretKey key = keygen(method, 3, 2, 17);
    const Signal dec = decrypt(encrypt(sig, key), key);
    REQUIRE(dec.F() == 7);
    REQUIRE(dec.T() == 11);
    for (Index r = 0; r < 7; ++r)
      for (Index c = 0; c < 11; ++c)
        CHECK(std::abs(dec.data(r, c) - sig.data(r, c)) <=
              1e-12 * (1.0 + std::abs(sig.data(r, c))));
  }
}

TEST_CASE("decrypting with a different key does not recover the signal") {
  const Signal sig = test_util::random_waveform(240, 55);
  for (Method method : {Method::shuffle, Method::flip, Method::rom}) {
    const SecretKey correct = keygen(method, 8, 1, 1000);
    const Signal enc = encrypt(sig, correct);
    int far = 0;
    const int trials = 50;
    for (int i = 1; i <= trials; ++i) {
      const SecretKey wrong = keygen(method, 8, 1, 1000 + static_cast<std::uint64_t>(i));
      const Signal dec = decrypt(enc, wrong);
      Signal ref = sig;
      const Scalar dist = (dec.data - ref.data).norm() / ref.data.norm();
      if (dist > 0.01) ++far;
    }
    // Deterministic seeds; every wrong key lands far from the original.
    CHECK(far == trials);
  }
}

TEST_CASE("rom decryption equals encrypting with the transposed matrix") {
  const RomKey key = keygen_rom(5, 1, 31);
  RomKey transposed = key;
  transposed.matrix = key.matrix.transpose();

  const Signal sig = test_util::random_waveform(20, 77);
  const Signal enc = encrypt(sig, SecretKey{key});
  const Signal dec = decrypt(enc, SecretKey{key});
  Signal enc_with_transpose = encrypt(enc, SecretKey{transposed});
  CHECK(exactly_equal(dec.data, enc_with_transpose.data));
}

TEST_CASE("all three ciphers preserve the per-block L2 norm") {
  SplitMix64 rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Vector v(9);
    for (Index i = 0; i < 9; ++i) v[i] = rng.normal();
    for (Method method : {Method::shuffle, Method::flip, Method::rom}) {
      const SecretKey key = keygen(method, 3, 2, seed);
      const Vector enc = encrypt_vector(v, key);
      if (method == Method::rom) {
        CHECK(std::abs(enc.norm() - v.norm()) <= 1e-12 * v.norm());
      } else {
        // The squared values are the same multiset; summing them in sorted
        // order is order-canonical and therefore bit-exact.
        Vector a = v.cwiseAbs2(), b = enc.cwiseAbs2();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        CHECK(a.sum() == b.sum());
      }
    }
  }
}

TEST_CASE("encryption is linear") {
  SplitMix64 rng(6);
  for (Method method : {Method::shuffle, Method::flip, Method::rom}) {
    const SecretKey key = keygen(method, 6, 1, 3);
    Vector x(6), y(6);
    for (Index i = 0; i < 6; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const Scalar alpha = rng.normal(), beta = rng.normal();
    const Vector combined = encrypt_vector(alpha * x + beta * y, key);
    const Vector split =
        alpha * encrypt_vector(x, key) + beta * encrypt_vector(y, key);
    for (Index i = 0; i < 6; ++i)
      CHECK(std::abs(combined[i] - split[i]) <= 1e-12 * (1.0 + std::abs(split[i])));
  }
}

TEST_CASE("changing one sample only changes the containing block") {
  const Index M = 4;
  const Signal sig = test_util::random_waveform(20, 8);
  for (Method method : {Method::shuffle, Method::flip, Method::rom}) {
    const SecretKey key = keygen(method, M, 1, 123);
    const Signal base = encrypt(sig, key);

    Signal poked = sig;
    poked.data(0, 9) += 1.0;  // inside block 2 (columns 8..11)
    const Signal enc = encrypt(poked, key);
    for (Index i = 0; i < 20; ++i) {
      if (i / M == 2)
        continue;  // the touched block may change anywhere
      CHECK(enc.data(0, i) == base.data(0, i));
    }
    CHECK((enc.data.middleCols(8, 4) - base.data.middleCols(8, 4)).norm() > 0.0);
  }
}

TEST_CASE("double flip is the exact identity") {
  const FlipKey key = keygen_flip(5, 1, 77);
  const Signal sig = test_util::random_waveform(25, 4);
  const Signal twice = encrypt(encrypt(sig, SecretKey{key}), SecretKey{key});
  CHECK(exactly_equal(twice.data, sig.data));
}

TEST_CASE("shuffle preserves the multiset of values in each block") {
  const Index M = 5;
  const ShuffleKey key = keygen_shuffle(M, 1, 13);
  const Signal sig = test_util::random_waveform(25, 3);
  const Signal enc = encrypt(sig, SecretKey{key});
  for (Index b = 0; b < 5; ++b) {
    Vector plain = sig.data.row(0).segment(b * M, M).transpose();
    Vector cipher = enc.data.row(0).segment(b * M, M).transpose();
    std::sort(plain.begin(), plain.end());
    std::sort(cipher.begin(), cipher.end());
    CHECK(plain == cipher);
  }
}

TEST_CASE("encrypt rejects mismatched keys and bad signals") {
  const SecretKey key_2d = keygen(Method::flip, 3, 2, 1);
  const Signal wave = test_util::random_waveform(9, 2);
  CHECK_THROWS_AS(encrypt(wave, key_2d), Error);
  try {
    encrypt(wave, key_2d);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::key_mismatch);
  }

  Signal bad = wave;
  bad.data(0, 4) = std::numeric_limits<double>::infinity();
  const SecretKey key_1d = keygen(Method::flip, 3, 1, 1);
  try {
    encrypt(bad, key_1d);
    FAIL_CHECK("expected InvalidSignal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_signal);
  }

  // Hand-built key whose element count disagrees with its own block size.
  const ShuffleKey broken{3, 1, {1, 0}, std::nullopt};
  CHECK_THROWS_AS(encrypt(wave, SecretKey{broken}), Error);

  // Hand-built key with out-of-range gather indices.
  const ShuffleKey out_of_range{3, 1, {0, 5, 1}, std::nullopt};
  CHECK_THROWS_AS(encrypt(wave, SecretKey{out_of_range}), Error);
}

TEST_CASE("encrypt of an empty signal is an empty signal") {
  Signal empty = Signal::waveform(Vector(0));
  const SecretKey key = keygen(Method::shuffle, 4, 1, 9);
  const Signal enc = encrypt(empty, key);
  CHECK(enc.T() == 0);
  CHECK(enc.F() == 1);
}

namespace {

struct VectorFrameIO {
  std::vector<std::vector<double>> frames;
  std::size_t next = 0;

  FrameReader reader() {
    return [this](std::vector<double>& dst) {
      if (next >= frames.size()) return false;
      dst = frames[next++];
      return true;
    };
  }
};

std::vector<std::vector<double>> to_frames(const Signal& sig) {
  std::vector<std::vector<double>> frames;
  for (Index c = 0; c < sig.T(); ++c) {
    std::vector<double> frame(static_cast<std::size_t>(sig.F()));
    for (Index r = 0; r < sig.F(); ++r)
      frame[static_cast<std::size_t>(r)] = sig.data(r, c);
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace

TEST_CASE("encrypt_stream matches whole-signal encryption bit for bit") {
  // One second of audio at 16 kHz, M = 10 -> 1600 blocks.
  const Signal sig = test_util::random_waveform(16000, 42);
  const SecretKey key = keygen(Method::rom, 10, 1, 5);

  VectorFrameIO io{to_frames(sig)};
  std::vector<double> streamed;
  const std::size_t blocks = encrypt_stream(
      io.reader(), key,
      [&](const std::vector<double>& frame) { streamed.push_back(frame.at(0)); });

  CHECK(blocks == 1600);
  const Signal whole = encrypt(sig, key);
  REQUIRE(static_cast<Index>(streamed.size()) == whole.T());
  for (Index i = 0; i < whole.T(); ++i)
    CHECK(streamed[static_cast<std::size_t>(i)] == whole.data(0, i));
}

TEST_CASE("encrypt_stream pads partial chunks like whole-signal encryption") {
  const Signal sig = test_util::random_waveform(23, 77);  // 23 = 2*10 + 3
  const SecretKey key = keygen(Method::flip, 10, 1, 21);

  VectorFrameIO io{to_frames(sig)};
  std::vector<double> streamed;
  const std::size_t blocks = encrypt_stream(
      io.reader(), key,
      [&](const std::vector<double>& frame) { streamed.push_back(frame.at(0)); });

  CHECK(blocks == 3);
  const Signal whole = encrypt(sig, key);
  REQUIRE(static_cast<Index>(streamed.size()) == whole.T());  // padded to 30
  for (Index i = 0; i < whole.T(); ++i)
    CHECK(streamed[static_cast<std::size_t>(i)] == whole.data(0, i));
}

TEST_CASE("encrypt_stream handles 2-D frames") {
  const Signal sig = test_util::random_spectrogram(5, 7, 31);
  const SecretKey key = keygen(Method::shuffle, 3, 2, 11);

  VectorFrameIO io{to_frames(sig)};
  std::vector<std::vector<double>> streamed;
  const std::size_t blocks = encrypt_stream(
      io.reader(), key,
      [&](const std::vector<double>& frame) { streamed.push_back(frame); },
      5);

  const Signal whole = encrypt(sig, key);
  CHECK(blocks == static_cast<std::size_t>(whole.F() / 3 * (whole.T() / 3)));
  REQUIRE(static_cast<Index>(streamed.size()) == whole.T());
  for (Index c = 0; c < whole.T(); ++c)
    for (Index r = 0; r < whole.F(); ++r)
      CHECK(streamed[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] ==
            whole.data(r, c));
}

TEST_CASE("encrypt_stream of an empty stream writes nothing") {
  const SecretKey key = keygen(Method::shuffle, 4, 1, 1);
  std::size_t writes = 0;
  const std::size_t blocks = encrypt_stream(
      [](std::vector<double>&) { return false; }, key,
      [&](const std::vector<double>&) { ++writes; });
  CHECK(blocks == 0);
  CHECK(writes == 0);
}

TEST_CASE("encrypt_stream rejects ragged frames") {
  const SecretKey key = keygen(Method::shuffle, 3, 2, 1);
  int produced = 0;
  const FrameReader ragged = [&](std::vector<double>& dst) {
    dst.assign(produced == 0 ? 4 : 3, 0.0);
    ++produced;
    return true;
  };
  CHECK_THROWS_AS(encrypt_stream(ragged, key, [](const std::vector<double>&) {}, 4),
                  Error);
}

TEST_CASE("encrypt_stream wraps reader failures with position info") {
  const SecretKey key = keygen(Method::shuffle, 4, 1, 1);
  int produced = 0;
  const FrameReader flaky = [&](std::vector<double>& dst) {
    if (produced == 7) throw std::runtime_error("disk on fire");
    dst.assign(1, 0.5);
    ++produced;
    return true;
  };
  try {
    encrypt_stream(flaky, key, [](const std::vector<double>&) {});
    FAIL_CHECK("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    CHECK(std::string(e.what()).find("frame 7") != std::string::npos);
    CHECK(std::string(e.what()).find("disk on fire") != std::string::npos);
  }
}
