#pragma once

#include <cstddef>
#include <functional>

#include "speechenc/blocking.hpp"
#include "speechenc/keys.hpp"

namespace speechenc {

// Per-block operator on a flattened N-vector. The same operator is applied
// to query blocks and to kernel weights, which is what makes the first-layer
// inner products cancel.
Vector encrypt_vector(const Vector& v, const SecretKey& key);

// Block-wise encryption: pad, flatten each block, apply the key, reassemble.
// The result keeps the padded extents and records the originals.
Signal encrypt(const Signal& signal, const SecretKey& key);

// Inverse transform; trims back to the original extents recorded on the
// input signal (exact for shuffle/flip, ~1e-15 per element for rom).
Signal decrypt(const Signal& signal, const SecretKey& key);

// Streaming interface: a frame is one sample (dims == 1) or one length-F
// spectrogram column (dims == 2), consumed in time order. The reader fills
// the vector and returns false at end of stream.
using FrameReader = std::function<bool(std::vector<double>&)>;
using FrameWriter = std::function<void(const std::vector<double>&)>;

// Encrypts M frames at a time with O(M*F) working memory; emitted frames are
// identical to the columns of whole-signal encrypt, including the trailing
// zero-padded frames. Returns the number of blocks processed.
std::size_t encrypt_stream(const FrameReader& read, const SecretKey& key,
                           const FrameWriter& write, Index frame_len = 1);

}  // namespace speechenc
