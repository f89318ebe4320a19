#pragma once

#include <vector>

#include "speechenc/signal.hpp"

namespace speechenc {

// The M-sized tiling of a signal: f x t blocks, each block_rows x block_cols.
struct BlockGrid {
  Index M = 0;
  int dims = 1;
  Index f = 0;  // row block count
  Index t = 0;  // column block count

  Index block_rows() const { return dims == 1 ? 1 : M; }
  Index block_cols() const { return M; }
  Index block_elems() const { return block_rows() * block_cols(); }
  Index block_count() const { return f * t; }
};

// Flattened element count of one block: M for 1-D, M*M for 2-D.
Index block_elems_for(Index M, int dims);

struct Partitioned {
  BlockGrid grid;
  Signal padded;  // original_F/original_T carry the pre-padding extents

  Matrix block(Index bi, Index bj) const;
  std::vector<Matrix> blocks() const;  // row-major block order
};

// Zero-pads each axis up to the next multiple of M and tiles the result.
// An empty signal yields an empty grid (t == 0) rather than an error.
Partitioned partition(const Signal& signal, Index M);

// Writes `values` back into the (bi, bj) tile of `padded`.
void place_block(Matrix& padded, const BlockGrid& grid, Index bi, Index bj,
                 const Matrix& values);

// Row-major flattening: element (i, j) lands at index i*m + j.
Vector flatten(const Matrix& block);

// Exact inverse of flatten for an n x m target; ShapeError on length mismatch.
Matrix reshape(const Vector& v, Index rows, Index cols);

// Drops padding using the original_* metadata, restoring exact extents.
// A signal without original_* metadata is returned unchanged.
Signal trim_to_original(const Signal& padded);

}  // namespace speechenc
