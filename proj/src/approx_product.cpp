#include "clusmat/approx_product.hpp"

#include <algorithm>
#include <string>

namespace clusmat {

const char* to_string(ClusteredSide side) {
  switch (side) {
    case ClusteredSide::RowsOfA: return "rows";
    case ClusteredSide::ColumnsOfB: return "columns";
    case ClusteredSide::Both: return "both";
  }
  return "?";
}

std::uint64_t column_seed(std::uint64_t seed) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

IntMatrix expand_center_product(const IntMatrix& small, std::span<const std::uint32_t> row_label,
                                std::span<const std::uint32_t> col_label) {
  const std::size_t cols = col_label.empty() ? small.cols() : col_label.size();
  IntMatrix out(row_label.size(), cols);
  const auto p = static_cast<std::ptrdiff_t>(row_label.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < p; ++si) {
    const auto i = static_cast<std::size_t>(si);
    const auto src = small.row(row_label[i]);
    auto dst = out.row(i);
    if (col_label.empty()) {
      std::ranges::copy(src, dst.begin());
    } else {
      for (std::size_t j = 0; j < cols; ++j) dst[j] = src[col_label[j]];
    }
  }
  return out;
}

namespace {

void require_conformable(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

// Rows-of-A orientation with B given as its transpose.
ApproxResult approx_rows(const BitMatrix& a, const BitMatrix& bt, std::size_t ell, std::size_t first) {
  if (ell == 0 || ell > a.rows()) {
    throw ParameterError("ell=" + std::to_string(ell) + " must lie in [1, " + std::to_string(a.rows()) + "]");
  }
  Clustering clustering = gonzalez(a, ell, first);
  const BitMatrix center_rows = BitMatrix::gather_rows(a, clustering.centers);
  const IntMatrix small = naive_multiply_bt(center_rows, bt);

  ApproxResult out;
  out.product = expand_center_product(small, clustering.assignment);
  out.side = ClusteredSide::RowsOfA;
  out.certificate = clustering.radius;
  out.rows = std::move(clustering);
  return out;
}

}  // namespace

ApproxResult mmclus_approx(const BitMatrix& a, const BitMatrix& b, std::size_t centers, Orientation orientation,
                           std::size_t first) {
  require_conformable(a, b);
  if (orientation == Orientation::Auto) orientation = a.rows() >= b.cols() ? Orientation::Rows : Orientation::Columns;

  if (orientation == Orientation::Rows) return approx_rows(a, transpose(b), centers, first);

  // (AB)^T = B^T A^T: cluster rows of B^T, i.e. columns of B.
  ApproxResult flipped = approx_rows(transpose(b), a, centers, first);
  ApproxResult out;
  out.product = transpose(flipped.product);
  out.side = ClusteredSide::ColumnsOfB;
  out.certificate = flipped.certificate;
  out.columns = std::move(flipped.rows);
  return out;
}

ApproxResult mmclus_r_approx(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k, double epsilon,
                             std::uint64_t seed) {
  require_conformable(a, b);
  if (ell == 0 || ell > a.rows()) throw ParameterError("ell must lie in [1, p]");
  if (k == 0 || k > b.cols()) throw ParameterError("k must lie in [1, r]");

  const BitMatrix bt = transpose(b);
  Clustering row_clustering = randomized_kcenter(a, ell, epsilon, seed);
  Clustering col_clustering = randomized_kcenter(bt, k, epsilon, column_seed(seed));

  const BitMatrix a_centers = BitMatrix::gather_rows(a, row_clustering.centers);
  const BitMatrix bt_centers = BitMatrix::gather_rows(bt, col_clustering.centers);
  const IntMatrix small = naive_multiply_bt(a_centers, bt_centers);

  ApproxResult out;
  out.product = expand_center_product(small, row_clustering.assignment, col_clustering.assignment);
  out.side = ClusteredSide::Both;
  out.certificate = row_clustering.radius + col_clustering.radius;
  out.epsilon = epsilon;
  out.rows = std::move(row_clustering);
  out.columns = std::move(col_clustering);
  return out;
}

}  // namespace clusmat
