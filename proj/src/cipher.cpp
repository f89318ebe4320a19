#include "speechenc/cipher.hpp"

#include <utility>

namespace speechenc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_key_signal(const SecretKey& key, const Signal& signal) {
  if (key_dims(key) != signal.dims)
    fail(ErrorCode::key_mismatch,
         "key is for " + std::to_string(key_dims(key)) + "-D data, signal is " +
             std::to_string(signal.dims) + "-D");
  const Index expected = block_elems_for(key_block_size(key), key_dims(key));
  if (key_elems(key) != expected)
    fail(ErrorCode::key_mismatch, "key has " + std::to_string(key_elems(key)) +
                                      " elements, expected " +
                                      std::to_string(expected));
}

// Shared block loop for encrypt and decrypt (decrypt passes the inverted key).
Signal transform_signal(const Signal& signal, const SecretKey& key) {
  check_key_signal(key, signal);
  Partitioned part = partition(signal, key_block_size(key));
  Matrix& data = part.padded.data;
  for (Index bi = 0; bi < part.grid.f; ++bi) {
    for (Index bj = 0; bj < part.grid.t; ++bj) {
      const Vector out = encrypt_vector(flatten(part.block(bi, bj)), key);
      place_block(data, part.grid, bi, bj,
                  reshape(out, part.grid.block_rows(), part.grid.block_cols()));
    }
  }
  return std::move(part.padded);
}

}  // namespace

Vector encrypt_vector(const Vector& v, const SecretKey& key) {
  if (v.size() != key_elems(key))
    fail(ErrorCode::key_mismatch, "vector length " + std::to_string(v.size()) +
                                      " does not match key size " +
                                      std::to_string(key_elems(key)));
  return std::visit(
      Overloaded{
          [&](const ShuffleKey& k) {
            Vector out(v.size());
            for (Index i = 0; i < v.size(); ++i) {
              const Index from = k.perm[static_cast<std::size_t>(i)];
              if (from < 0 || from >= v.size())
                fail(ErrorCode::key_mismatch,
                     "permutation index " + std::to_string(from) +
                         " out of range");
              out[i] = v[from];
            }
            return out;
          },
          [&](const FlipKey& k) {
            Vector out(v.size());
            for (Index i = 0; i < v.size(); ++i)
              out[i] = k.bits[static_cast<std::size_t>(i)] ? -v[i] : v[i];
            return out;
          },
          // Row-vector times matrix: out_j = sum_i v_i * K(i, j).
          [&](const RomKey& k) {
            if (k.matrix.rows() != k.matrix.cols())
              fail(ErrorCode::key_mismatch, "rom matrix is not square");
            return Vector(k.matrix.transpose() * v);
          },
      },
      key);
}

Signal encrypt(const Signal& signal, const SecretKey& key) {
  return transform_signal(signal, key);
}

Signal decrypt(const Signal& signal, const SecretKey& key) {
  const auto original_F = signal.original_F;
  const auto original_T = signal.original_T;
  Signal out = transform_signal(signal, invert_key(key));
  out.original_F = original_F;
  out.original_T = original_T;
  return trim_to_original(out);
}

std::size_t encrypt_stream(const FrameReader& read, const SecretKey& key,
                           const FrameWriter& write, Index frame_len) {
  const int dims = key_dims(key);
  if (dims == 1 && frame_len != 1)
    fail(ErrorCode::shape, "1-D streams carry one sample per frame");
  if (frame_len < 1) fail(ErrorCode::shape, "frame length must be >= 1");
  const Index M = key_block_size(key);

  std::size_t frames_read = 0;
  std::vector<double> frame;
  bool exhausted = false;
  const auto next_frame = [&](std::vector<double>& dst) {
    try {
      if (!read(dst)) return false;
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      fail(ErrorCode::io,
           "reading frame " + std::to_string(frames_read) + ": " + e.what());
    }
    if (static_cast<Index>(dst.size()) != frame_len)
      fail(ErrorCode::shape, "frame " + std::to_string(frames_read) + " has " +
                                 std::to_string(dst.size()) +
                                 " values, expected " +
                                 std::to_string(frame_len));
    ++frames_read;
    return true;
  };

  std::size_t blocks = 0;
  std::vector<double> out_frame;
  while (!exhausted) {
    // One block-column: M frames, zero-padded on both axes.
    Signal chunk;
    chunk.dims = dims;
    chunk.data = Matrix::Zero(frame_len, M);
    Index filled = 0;
    while (filled < M) {
      if (!next_frame(frame)) {
        exhausted = true;
        break;
      }
      for (Index r = 0; r < frame_len; ++r)
        chunk.data(r, filled) = frame[static_cast<std::size_t>(r)];
      ++filled;
    }
    if (filled == 0) break;  // no trailing partial chunk

    const Signal enc = encrypt(chunk, key);
    blocks += static_cast<std::size_t>(enc.F() / (dims == 1 ? 1 : M));
    out_frame.resize(static_cast<std::size_t>(enc.F()));
    for (Index c = 0; c < enc.T(); ++c) {
      for (Index r = 0; r < enc.F(); ++r)
        out_frame[static_cast<std::size_t>(r)] = enc.data(r, c);
      try {
        write(out_frame);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        fail(ErrorCode::io, "writing output frame: " + std::string(e.what()));
      }
    }
  }
  return blocks;
}

}  // namespace speechenc
