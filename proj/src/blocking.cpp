#include "speechenc/blocking.hpp"

namespace speechenc {

namespace {

Index round_up(Index value, Index multiple) {
  return (value + multiple - 1) / multiple * multiple;
}

}  // namespace

Index block_elems_for(Index M, int dims) {
  return dims == 1 ? M : M * M;
}

Matrix Partitioned::block(Index bi, Index bj) const {
  return padded.data.block(bi * grid.block_rows(), bj * grid.block_cols(),
                           grid.block_rows(), grid.block_cols());
}

std::vector<Matrix> Partitioned::blocks() const {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(grid.block_count()));
  for (Index bi = 0; bi < grid.f; ++bi)
    for (Index bj = 0; bj < grid.t; ++bj) out.push_back(block(bi, bj));
  return out;
}

Partitioned partition(const Signal& signal, Index M) {
  if (M < 1) fail(ErrorCode::invalid_block_size, "block size must be >= 1");
  signal.validate();

  Partitioned part;
  part.grid.M = M;
  part.grid.dims = signal.dims;

  const Index padded_F =
      signal.dims == 1 ? 1 : round_up(std::max<Index>(signal.F(), 1), M);
  const Index padded_T = round_up(signal.T(), M);
  part.grid.f = signal.dims == 1 ? 1 : padded_F / M;
  part.grid.t = padded_T / M;

  part.padded = signal;
  if (padded_F != signal.F() || padded_T != signal.T()) {
    Matrix grown = Matrix::Zero(padded_F, padded_T);
    grown.topLeftCorner(signal.F(), signal.T()) = signal.data;
    part.padded.data = std::move(grown);
  }
  part.padded.original_F = signal.F();
  part.padded.original_T = signal.T();
  return part;
}

void place_block(Matrix& padded, const BlockGrid& grid, Index bi, Index bj,
                 const Matrix& values) {
  if (values.rows() != grid.block_rows() || values.cols() != grid.block_cols())
    fail(ErrorCode::shape, "block shape does not match the grid");
  padded.block(bi * grid.block_rows(), bj * grid.block_cols(),
               grid.block_rows(), grid.block_cols()) = values;
}

Vector flatten(const Matrix& block) {
  // Row-major storage, so the raw buffer is already in flattened order.
  return Eigen::Map<const Vector>(block.data(), block.size());
}

Matrix reshape(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols)
    fail(ErrorCode::shape, "cannot reshape " + std::to_string(v.size()) +
                               " values into " + std::to_string(rows) + "x" +
                               std::to_string(cols));
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Signal trim_to_original(const Signal& padded) {
  Signal out = padded;
  const Index F = padded.original_F.value_or(padded.F());
  const Index T = padded.original_T.value_or(padded.T());
  if (F != padded.F() || T != padded.T())
    out.data = padded.data.topLeftCorner(F, T).eval();
  out.original_F.reset();
  out.original_T.reset();
  return out;
}

}  // namespace speechenc
