#include "speechenc/conv.hpp"

namespace speechenc {

void Kernel::validate() const {
  if (weights.size() == 0) fail(ErrorCode::shape, "empty kernel");
  if (weights.rows() != 1 && weights.rows() != weights.cols())
    fail(ErrorCode::shape, "kernel must be 1xP or PxP, got " +
                               std::to_string(weights.rows()) + "x" +
                               std::to_string(weights.cols()));
}

void KernelBank::validate() const {
  if (kernels.empty()) fail(ErrorCode::shape, "kernel bank is empty");
  kernels.front().validate();
  for (const Kernel& k : kernels) {
    if (k.weights.rows() != kernels.front().weights.rows() ||
        k.weights.cols() != kernels.front().weights.cols())
      fail(ErrorCode::shape, "kernel bank has mixed kernel shapes");
  }
}

Scalar patch_conv(const Matrix& block, const Kernel& kernel) {
  if (block.rows() != kernel.weights.rows() ||
      block.cols() != kernel.weights.cols())
    fail(ErrorCode::shape, "block " + std::to_string(block.rows()) + "x" +
                               std::to_string(block.cols()) +
                               " does not match kernel " +
                               std::to_string(kernel.weights.rows()) + "x" +
                               std::to_string(kernel.weights.cols()));
  // Row-major buffers; accumulate in flattened-index order so the sum is
  // reproducible across calls with equal operands.
  const Scalar* x = block.data();
  const Scalar* e = kernel.weights.data();
  Scalar acc = 0.0;
  for (Index k = 0; k < block.size(); ++k) acc += x[k] * e[k];
  if (kernel.bias) acc += *kernel.bias;
  return acc;
}

FeatureMap first_layer_forward(const Signal& signal, const KernelBank& bank,
                               Index M) {
  bank.validate();
  if (bank.dims() != signal.dims)
    fail(ErrorCode::patch_size_mismatch,
         "kernel rank does not match signal dims");
  if (bank.patch() != M)
    fail(ErrorCode::patch_size_mismatch,
         "kernel patch size " + std::to_string(bank.patch()) +
             " must equal block size " + std::to_string(M));

  const Partitioned part = partition(signal, M);
  FeatureMap map;
  map.channels.assign(static_cast<std::size_t>(bank.out_channels()),
                      Matrix::Zero(part.grid.f, part.grid.t));
  for (Index bi = 0; bi < part.grid.f; ++bi) {
    for (Index bj = 0; bj < part.grid.t; ++bj) {
      const Matrix blk = part.block(bi, bj);
      for (Index c = 0; c < bank.out_channels(); ++c)
        map.channels[static_cast<std::size_t>(c)](bi, bj) =
            patch_conv(blk, bank.kernels[static_cast<std::size_t>(c)]);
    }
  }
  return map;
}

}  // namespace speechenc
