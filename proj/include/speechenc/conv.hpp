#pragma once

#include <optional>
#include <vector>

#include "speechenc/blocking.hpp"

namespace speechenc {

// First convolutional layer kernel: 1 x P for waveforms, P x P for
// spectrograms. The patch size P doubles as the stride.
struct Kernel {
  Matrix weights;
  std::optional<Scalar> bias;

  Index rows() const { return weights.rows(); }
  Index cols() const { return weights.cols(); }
  int dims() const { return weights.rows() == 1 ? 1 : 2; }
  Index patch() const { return weights.cols(); }

  void validate() const;  // ShapeError unless 1 x P or P x P
};

// C_out kernels sharing one shape; all are encrypted with the same key.
struct KernelBank {
  std::vector<Kernel> kernels;

  Index out_channels() const { return static_cast<Index>(kernels.size()); }
  int dims() const { return kernels.front().dims(); }
  Index patch() const { return kernels.front().patch(); }

  void validate() const;  // ShapeError on empty bank or mixed shapes
};

// Inner product of block and kernel, summed in flattened-index order,
// plus the bias when present. ShapeError on mismatched shapes.
Scalar patch_conv(const Matrix& block, const Kernel& kernel);

// One f x t map per output channel.
struct FeatureMap {
  std::vector<Matrix> channels;

  Index f() const { return channels.empty() ? 0 : channels.front().rows(); }
  Index t() const { return channels.empty() ? 0 : channels.front().cols(); }
  Index out_channels() const { return static_cast<Index>(channels.size()); }
};

// Non-overlapping stride-P convolution over the M-block tiling; requires
// P == M (PatchSizeMismatch otherwise). output[c](i, j) is the patch_conv
// of block (i, j) with kernel c.
FeatureMap first_layer_forward(const Signal& signal, const KernelBank& bank,
                               Index M);

}  // namespace speechenc
