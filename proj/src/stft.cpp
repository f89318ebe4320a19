#include "speechenc/stft.hpp"

#include <cmath>
#include <numbers>

namespace speechenc {

Signal stft_magnitude(const Signal& signal, const StftConfig& cfg) {
  if (signal.dims != 1)
    fail(ErrorCode::unsupported_signal, "STFT input must be a 1-D signal");
  signal.validate();
  if (cfg.window < 1 || cfg.hop < 1 || cfg.hop > cfg.window)
    fail(ErrorCode::shape, "need 0 < hop <= window");
  const Index W = cfg.window;
  const Index T = signal.T();
  if (T < W)
    fail(ErrorCode::too_short, "signal has " + std::to_string(T) +
                                   " samples, window needs " +
                                   std::to_string(W));

  const Index frames = 1 + (T - W) / cfg.hop;
  const Index bins = W / 2 + 1;

  // Periodic Hann analysis window.
  Vector hann(W);
  for (Index n = 0; n < W; ++n)
    hann[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                   static_cast<double>(n) /
                                   static_cast<double>(W));

  // Real DFT as two dense bases; one matrix-vector product per frame.
  Matrix cos_basis(bins, W), sin_basis(bins, W);
  for (Index f = 0; f < bins; ++f) {
    for (Index n = 0; n < W; ++n) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(f) *
                           static_cast<double>(n) / static_cast<double>(W);
      cos_basis(f, n) = std::cos(phase);
      sin_basis(f, n) = -std::sin(phase);
    }
  }

  Matrix magnitude(bins, frames);
  Vector windowed(W);
  for (Index k = 0; k < frames; ++k) {
    windowed =
        signal.data.row(0).segment(k * cfg.hop, W).transpose().cwiseProduct(hann);
    const Vector re = cos_basis * windowed;
    const Vector im = sin_basis * windowed;
    magnitude.col(k) = (re.array().square() + im.array().square()).sqrt();
  }
  return Signal::spectrogram(std::move(magnitude));
}

}  // namespace speechenc
