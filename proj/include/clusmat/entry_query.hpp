#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "clusmat/approx_product.hpp"
#include "clusmat/bitmatrix.hpp"

namespace clusmat {

/// One sorted list of u32 coordinates per point, stored contiguously.
class IndexSets {
 public:
  IndexSets() = default;

  /// Coordinates where row i of `points` differs from row label[i] of `centers`.
  static IndexSets differences(const BitMatrix& points, const BitMatrix& centers,
                               std::span<const std::uint32_t> label);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const std::uint32_t> operator[](std::size_t i) const {
    return std::span<const std::uint32_t>(indices_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  std::size_t total() const { return indices_.size(); }

  void write(std::ostream& out) const;
  static IndexSets read(std::istream& in);

  bool operator==(const IndexSets&) const = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> indices_;
};

struct QueryResult {
  std::uint32_t value = 0;
  std::size_t updates = 0;  // iterations of the correction loops
};

struct SweepResult {
  IntMatrix product;
  std::size_t max_updates = 0;
  std::size_t total_updates = 0;
};

/// Preprocessed operands answering exact entries C(i,j) = <A_i*, B_*j> in time
/// proportional to the clustering radius.
///
/// One-sided mode keeps D from mmclus_approx plus, for every clustered row,
/// the coordinates where it differs from its center. A query starts from D(i,j)
/// and applies a +/-1 correction for every such coordinate m with B(m,j) = 1.
/// When p < r the state is built for (B^T, A^T) and queries are swapped.
///
/// Two-sided mode starts from <center(A_i*), center(B_*j)> and corrects in two
/// stages: first toward <center(A_i*), B_*j> over the column's difference set
/// (using the stored center bits), then toward <A_i*, B_*j> over the row's
/// difference set (using the true column bits).
///
/// Immutable after construction; concurrent queries are safe.
class PreprocState {
 public:
  enum class Mode : std::uint32_t { OneSided = 0, TwoSided = 1 };

  /// `first` seeds farthest-point on whichever side gets clustered.
  static PreprocState one_sided(const BitMatrix& a, const BitMatrix& b, std::size_t centers,
                                Orientation orientation = Orientation::Auto, std::size_t first = 0);
  static PreprocState two_sided(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k,
                                double epsilon, std::uint64_t seed);

  std::size_t rows() const { return transposed_ ? right_t_.rows() : left_.rows(); }
  std::size_t cols() const { return transposed_ ? left_.rows() : right_t_.rows(); }
  Mode mode() const { return mode_; }
  bool transposed() const { return transposed_; }

  /// Radius of the clustering over rows of A (columns of B when transposed).
  std::size_t left_radius() const { return left_radius_; }
  /// Two-sided only: radius of the clustering over columns of B.
  std::size_t right_radius() const { return right_radius_; }
  /// Bound on update iterations of any single query.
  std::size_t update_bound() const { return left_radius_ + right_radius_; }

  /// The approximation D in the original (i, j) orientation.
  IntMatrix approximation() const;
  /// Difference sets of the clustered rows (internal orientation).
  const IndexSets& left_differences() const { return left_ind_; }

  std::uint32_t query(std::size_t i, std::size_t j) const { return query_counted(i, j).value; }
  QueryResult query_counted(std::size_t i, std::size_t j) const;
  std::vector<std::uint32_t> query_batch(std::span<const std::pair<std::size_t, std::size_t>> cells) const;

  /// All p*r entries; rows of the result are filled in parallel.
  SweepResult sweep() const;

  /// ".pps" container. The operands are not embedded, only their digests;
  /// `load` takes them back and rejects mismatches.
  void save(std::ostream& out) const;
  static PreprocState load(std::istream& in, const BitMatrix& a, const BitMatrix& b);

 private:
  PreprocState() = default;

  Mode mode_ = Mode::OneSided;
  bool transposed_ = false;
  double epsilon_ = 0.0;
  std::uint64_t seed_ = 0;
  std::uint64_t digest_a_ = 0;
  std::uint64_t digest_b_ = 0;

  // Internal orientation: product P = left_ * right_t_^T. Without transposition
  // left_ = A and right_t_ = B^T; otherwise left_ = B^T and right_t_ = A.
  BitMatrix left_;
  BitMatrix right_t_;
  IntMatrix d_;  // P-shaped approximation

  BitMatrix left_centers_;
  std::vector<std::uint32_t> left_label_;
  IndexSets left_ind_;
  std::size_t left_radius_ = 0;

  // Two-sided only.
  BitMatrix right_centers_;
  std::vector<std::uint32_t> right_label_;
  IndexSets right_ind_;
  std::size_t right_radius_ = 0;
};

/// Exact product by preprocessing once and querying every entry.
IntMatrix exact_via_queries(const BitMatrix& a, const BitMatrix& b, std::size_t centers);
IntMatrix exact_via_queries_randomized(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k,
                                       double epsilon, std::uint64_t seed);

}  // namespace clusmat
