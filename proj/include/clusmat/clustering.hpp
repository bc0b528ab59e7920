#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "clusmat/bitmatrix.hpp"

namespace clusmat {

/// k-center clustering of the rows of a BitMatrix.
///
/// Centers are always input points, stored as row indices in the order they
/// were chosen. `assignment[i]` is a position in `centers`, `distance[i]` the
/// Hamming distance from row i to that center and `radius` the maximum of
/// `distance`. A point chosen as a center is always assigned to itself.
struct Clustering {
  std::vector<std::size_t> centers;
  std::vector<std::uint32_t> assignment;
  std::vector<std::uint32_t> distance;
  std::size_t radius = 0;
  /// Farthest-point runs only: radius_history[t] is the radius with t+1 centers.
  std::vector<std::size_t> radius_history;

  std::size_t k() const { return centers.size(); }
  std::size_t center_of(std::size_t i) const { return centers[assignment[i]]; }
};

/// Per-point nearest center among an explicit center set.
struct NearestAssignment {
  std::vector<std::uint32_t> assignment;
  std::vector<std::uint32_t> distance;
  std::size_t radius = 0;
};

/// Farthest-point (Gonzalez) clustering: a 2-approximation of the optimal
/// k-center radius in O(n d k). The first center is row `first`; each further
/// center is the row farthest from its nearest current center (lowest index
/// wins ties). Per-point nearest distances are updated incrementally, in
/// parallel across points.
Clustering gonzalez(const BitMatrix& points, std::size_t k, std::size_t first = 0);

/// Map each point to a nearest row of `centers`, lowest center index on ties.
NearestAssignment assign_nearest(const BitMatrix& points, const BitMatrix& centers);

/// Points mapped by a sparse {+1, 0, -1} sign matrix (probabilities 1/6, 2/3,
/// 1/6) into `dim` integer coordinates. Squared distances approximate
/// scale() * hamming distance.
struct ProjectedPoints {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<std::int32_t> coords;  // count x dim, row-major

  const std::int32_t* point(std::size_t i) const { return coords.data() + i * dim; }
  double scale() const { return static_cast<double>(dim) / 3.0; }
  std::int64_t squared_distance(std::size_t a, std::size_t b) const;
};

/// Target dimension ceil(8 ln n / eps^2), clamped to [1, d].
std::size_t projection_dimension(std::size_t n, std::size_t d, double epsilon);

ProjectedPoints project(const BitMatrix& points, double epsilon, std::uint64_t seed);

/// Farthest-point selection on the projected points followed by an exact
/// Hamming reassignment, so the reported radius is exact in the original space.
Clustering randomized_kcenter(const BitMatrix& points, std::size_t k, double epsilon, std::uint64_t seed,
                              std::size_t first = 0);

/// Optimal radius over all k-subsets of the input points. Only for n <= 16, k <= 4.
std::size_t brute_force_discrete_kcenter(const BitMatrix& points, std::size_t k);

namespace serial {
Clustering gonzalez(const BitMatrix& points, std::size_t k, std::size_t first = 0);
}  // namespace serial

}  // namespace clusmat
