#pragma once

#include <cstddef>

#include "clusmat/approx_product.hpp"
#include "clusmat/bitmatrix.hpp"
#include "clusmat/clustering.hpp"
#include "clusmat/spanning_tree.hpp"

namespace clusmat {

struct TreeProduct {
  IntMatrix product;
  /// Delta-rule applications summed over all columns.
  std::size_t delta_updates = 0;
  /// Largest number of delta-rule applications for a single column.
  std::size_t max_column_updates = 0;
};

/// Exact A*B by walking a spanning tree over the rows of A: the root row is
/// computed directly and every other row is derived from its tree neighbour
/// by +/-1 corrections over the coordinates where the two rows differ.
///
/// Columns are processed in blocks distributed over OpenMP threads. Each row
/// is derived once, when the traversal first reaches it, so a column costs
/// exactly ham_cost(tree) corrections.
TreeProduct mmclus_st(const BitMatrix& a, const BitMatrix& b, const SpanningTree& tree);

struct ExactResult {
  IntMatrix product;
  ClusteredSide side = ClusteredSide::RowsOfA;  // tree the product was computed on
  Clustering rows;
  Clustering columns;
  std::size_t row_tree_cost = 0;
  std::size_t column_tree_cost = 0;
  std::size_t delta_updates = 0;
  std::size_t max_column_updates = 0;
};

/// Cluster rows of A (ell centers) and columns of B (k centers), build both
/// star-plus-path trees and run mmclus_st on the side with the smaller
/// predicted delta work, r*ham(T_A) versus p*ham(T_B). `orientation` forces a
/// side when not Auto. The first farthest-point centers are row `first_row` of A
/// and column `first_col` of B.
ExactResult exact_clustered(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k,
                            Orientation orientation = Orientation::Auto, std::size_t first_row = 0,
                            std::size_t first_col = 0);

namespace serial {
/// Column-at-a-time walk of the full traversal U, recomputing revisited rows
/// with the delta rule exactly as stated; kept as a reference for the blocked kernel.
TreeProduct mmclus_st(const BitMatrix& a, const BitMatrix& b, const SpanningTree& tree);
}  // namespace serial

}  // namespace clusmat
