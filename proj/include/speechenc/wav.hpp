#pragma once

#include <filesystem>

#include "speechenc/signal.hpp"

namespace speechenc {

// Mono RIFF/WAVE reader: PCM 16-bit (scaled by 1/32768 into [-1, 1)) or
// IEEE float 32-bit. Anything else is a WavFormatError.
Signal read_wav(const std::filesystem::path& path);

// Writes a 1-D signal as IEEE float32 WAV (44-byte header, no clipping).
// Encrypted waveforms can exceed [-1, 1], so integer output is not offered.
void write_wav(const Signal& signal, const std::filesystem::path& path);

}  // namespace speechenc
