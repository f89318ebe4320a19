#pragma once

#include "speechenc/signal.hpp"

namespace speechenc {

struct StftConfig {
  Index window = 256;  // samples per frame
  Index hop = 128;     // 0 < hop <= window
};

// Magnitude spectrogram of a 1-D signal using a periodic Hann window:
// F = window/2 + 1 bins, T' = 1 + floor((T - window)/hop) frames.
// TooShort when the signal does not cover one frame.
Signal stft_magnitude(const Signal& signal, const StftConfig& cfg);

}  // namespace speechenc
