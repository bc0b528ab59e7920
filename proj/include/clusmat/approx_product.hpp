#pragma once

#include <cstdint>
#include <optional>

#include "clusmat/bitmatrix.hpp"
#include "clusmat/clustering.hpp"

namespace clusmat {

/// Which operand a one-sided approximation clusters. `Auto` clusters rows of A
/// when p >= r and columns of B otherwise, through (AB)^T = B^T A^T.
enum class Orientation { Auto, Rows, Columns };

enum class ClusteredSide { RowsOfA, ColumnsOfB, Both };

const char* to_string(ClusteredSide side);

struct ApproxResult {
  IntMatrix product;  // D, p x r
  ClusteredSide side = ClusteredSide::RowsOfA;
  std::optional<Clustering> rows;     // over rows of A
  std::optional<Clustering> columns;  // over columns of B (rows of B^T)
  /// Entrywise bound on |C - D|: the achieved radius, or the sum of both radii.
  std::size_t certificate = 0;
  std::optional<double> epsilon;
};

/// One-sided approximation: cluster `centers` rows of A (or columns of B),
/// multiply the center matrix with the other operand and broadcast each center
/// row of that small product to the members of its cluster.
ApproxResult mmclus_approx(const BitMatrix& a, const BitMatrix& b, std::size_t centers,
                           Orientation orientation = Orientation::Auto, std::size_t first = 0);

/// Two-sided randomized approximation: ell row centers of A and k column
/// centers of B from randomized_kcenter, D(i,j) = <center(A_i*), center(B_*j)>.
ApproxResult mmclus_r_approx(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k, double epsilon,
                             std::uint64_t seed);

/// Seed used for the column clustering of the two-sided variant.
std::uint64_t column_seed(std::uint64_t seed);

/// Broadcast: out(i, j) = small(row_label[i], col_label[j]); col_label empty means identity.
IntMatrix expand_center_product(const IntMatrix& small, std::span<const std::uint32_t> row_label,
                                std::span<const std::uint32_t> col_label = {});

}  // namespace clusmat
