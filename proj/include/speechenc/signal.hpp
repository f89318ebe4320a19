#pragma once

#include <optional>

#include "speechenc/types.hpp"

namespace speechenc {

// F x T carrier for both waveforms (dims == 1, a single row) and
// spectrograms (dims == 2). original_F/original_T remember pre-padding
// extents so decryption can trim back to the exact input length.
struct Signal {
  int dims = 1;
  Matrix data;  // F x T
  std::optional<double> sample_rate;  // waveforms only
  std::optional<Index> original_F;
  std::optional<Index> original_T;

  Index F() const { return data.rows(); }
  Index T() const { return data.cols(); }

  static Signal waveform(Vector samples,
                         std::optional<double> rate = std::nullopt);
  static Signal spectrogram(Matrix values);

  // InvalidSignal on NaN/Inf values or dims/F disagreement.
  void validate() const;
};

}  // namespace speechenc
