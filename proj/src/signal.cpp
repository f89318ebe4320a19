#include "speechenc/signal.hpp"

namespace speechenc {

Signal Signal::waveform(Vector samples, std::optional<double> rate) {
  Signal s;
  s.dims = 1;
  s.data = samples.transpose();
  s.sample_rate = rate;
  return s;
}

Signal Signal::spectrogram(Matrix values) {
  Signal s;
  s.dims = 2;
  s.data = std::move(values);
  return s;
}

void Signal::validate() const {
  if (dims != 1 && dims != 2)
    fail(ErrorCode::invalid_signal, "dims must be 1 or 2");
  if (dims == 1 && data.rows() != 1)
    fail(ErrorCode::invalid_signal,
         "1-D signal must have a single row, got " + std::to_string(data.rows()));
  if (data.size() > 0 && !data.allFinite())
    fail(ErrorCode::invalid_signal, "signal contains NaN or Inf values");
}

}  // namespace speechenc
