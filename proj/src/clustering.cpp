#include "clusmat/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace clusmat {

namespace {

void validate_k(std::size_t n, std::size_t k) {
  if (n == 0) throw ParameterError("empty point set");
  if (k == 0 || k > n) {
    throw ParameterError("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
  }
}

void validate_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("epsilon must lie in (0, 1/2)");
}

/// Next center: the farthest point, or, once every point sits on a center,
/// the lowest-index point not yet chosen.
template <typename Dist>
std::size_t pick_farthest(const std::vector<Dist>& dist, const std::vector<char>& is_center) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.size(); ++i)
    if (dist[i] > dist[best]) best = i;
  if (dist[best] == 0) {
    best = 0;
    while (is_center[best]) ++best;
  }
  return best;
}

}  // namespace

Clustering gonzalez(const BitMatrix& points, std::size_t k, std::size_t first) {
  const std::size_t n = points.rows();
  validate_k(n, k);
  if (first >= n) throw ParameterError("first center index out of range");

  Clustering out;
  out.centers.reserve(k);
  out.assignment.assign(n, 0);
  out.distance.resize(n);
  std::vector<char> is_center(n, 0);

  const auto sn = static_cast<std::ptrdiff_t>(n);
  std::size_t center = first;
  for (std::size_t t = 0; t < k; ++t) {
    if (t > 0) center = pick_farthest(out.distance, is_center);
    out.centers.push_back(center);
    is_center[center] = 1;
    const BitRow c = points.row(center);
    const auto label = static_cast<std::uint32_t>(t);
    std::size_t radius = 0;
#pragma omp parallel for schedule(static) reduction(max : radius)
    for (std::ptrdiff_t si = 0; si < sn; ++si) {
      const auto i = static_cast<std::size_t>(si);
      const auto d = static_cast<std::uint32_t>(hamming(points.row(i), c));
      if (t == 0 || d < out.distance[i]) {
        out.distance[i] = d;
        out.assignment[i] = label;
      }
      radius = std::max<std::size_t>(radius, out.distance[i]);
    }
    out.assignment[center] = label;
    out.distance[center] = 0;
    out.radius_history.push_back(radius);
  }
  out.radius = out.radius_history.back();
  return out;
}

NearestAssignment assign_nearest(const BitMatrix& points, const BitMatrix& centers) {
  if (centers.rows() == 0) throw ParameterError("no centers");
  if (points.cols() != centers.cols()) throw DimensionError("points and centers differ in dimension");
  const std::size_t n = points.rows();
  NearestAssignment out;
  out.assignment.assign(n, 0);
  out.distance.assign(n, 0);
  std::size_t radius = 0;
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) reduction(max : radius)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    const BitRow x = points.row(i);
    std::size_t best = hamming(x, centers.row(0));
    std::uint32_t label = 0;
    for (std::size_t c = 1; c < centers.rows() && best > 0; ++c) {
      const std::size_t d = hamming(x, centers.row(c));
      if (d < best) {
        best = d;
        label = static_cast<std::uint32_t>(c);
      }
    }
    out.assignment[i] = label;
    out.distance[i] = static_cast<std::uint32_t>(best);
    radius = std::max(radius, best);
  }
  out.radius = radius;
  return out;
}

std::int64_t ProjectedPoints::squared_distance(std::size_t a, std::size_t b) const {
  const std::int32_t* x = point(a);
  const std::int32_t* y = point(b);
  std::int64_t acc = 0;
  for (std::size_t c = 0; c < dim; ++c) {
    const std::int64_t diff = static_cast<std::int64_t>(x[c]) - y[c];
    acc += diff * diff;
  }
  return acc;
}

std::size_t projection_dimension(std::size_t n, std::size_t d, double epsilon) {
  validate_epsilon(epsilon);
  const double target = std::ceil(8.0 * std::log(static_cast<double>(n)) / (epsilon * epsilon));
  const auto m = static_cast<std::size_t>(std::max(1.0, target));
  return std::min(m, d);
}

ProjectedPoints project(const BitMatrix& points, double epsilon, std::uint64_t seed) {
  validate_epsilon(epsilon);
  const std::size_t n = points.rows();
  if (n < 2) throw ParameterError("projection needs at least two points");
  const std::size_t d = points.cols();
  const std::size_t m = projection_dimension(n, d, epsilon);

  // d x m sign matrix, drawn row by row from a single stream.
  std::vector<std::int8_t> signs(d * m);
  std::mt19937_64 rng(seed);
  for (auto& s : signs) {
    const std::uint64_t u = rng() % 6;
    s = u == 0 ? std::int8_t{1} : (u == 1 ? std::int8_t{-1} : std::int8_t{0});
  }

  ProjectedPoints out;
  out.count = n;
  out.dim = m;
  out.seed = seed;
  out.coords.assign(n * m, 0);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    std::int32_t* y = out.coords.data() + i * m;
    const auto words = points.row(i).words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      for (Word bits = words[w]; bits != 0; bits &= bits - 1) {
        const std::size_t h = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        const std::int8_t* s = signs.data() + h * m;
        for (std::size_t c = 0; c < m; ++c) y[c] += s[c];
      }
    }
  }
  return out;
}

Clustering randomized_kcenter(const BitMatrix& points, std::size_t k, double epsilon, std::uint64_t seed,
                              std::size_t first) {
  const std::size_t n = points.rows();
  validate_k(n, k);
  validate_epsilon(epsilon);
  if (first >= n) throw ParameterError("first center index out of range");

  std::vector<std::size_t> centers{first};
  if (n >= 2 && k > 1) {
    const ProjectedPoints proj = project(points, epsilon, seed);
    std::vector<std::int64_t> dist(n, std::numeric_limits<std::int64_t>::max());
    std::vector<char> is_center(n, 0);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    std::size_t center = first;
    for (std::size_t t = 0;; ++t) {
      is_center[center] = 1;
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t si = 0; si < sn; ++si) {
        const auto i = static_cast<std::size_t>(si);
        dist[i] = std::min(dist[i], proj.squared_distance(i, center));
      }
      if (t + 1 == k) break;
      center = pick_farthest(dist, is_center);
      centers.push_back(center);
    }
  }

  const BitMatrix center_rows = BitMatrix::gather_rows(points, centers);
  NearestAssignment nearest = assign_nearest(points, center_rows);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    nearest.assignment[centers[c]] = static_cast<std::uint32_t>(c);
    nearest.distance[centers[c]] = 0;
  }

  Clustering out;
  out.centers = std::move(centers);
  out.assignment = std::move(nearest.assignment);
  out.distance = std::move(nearest.distance);
  out.radius = out.distance.empty() ? 0 : *std::ranges::max_element(out.distance);
  return out;
}

std::size_t brute_force_discrete_kcenter(const BitMatrix& points, std::size_t k) {
  const std::size_t n = points.rows();
  validate_k(n, k);
  if (n > 16 || k > 4) throw ParameterError("instance too large for exhaustive search (n <= 16, k <= 4)");

  std::vector<std::size_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = hamming(points.row(a), points.row(b));

  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> pick(k);
  for (std::size_t t = 0; t < k; ++t) pick[t] = t;
  while (true) {
    std::size_t worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t nearest = std::numeric_limits<std::size_t>::max();
      for (const std::size_t c : pick) nearest = std::min(nearest, table[i * n + c]);
      worst = std::max(worst, nearest);
    }
    best = std::min(best, worst);

    // Next k-combination in lexicographic order.
    std::size_t t = k;
    while (t > 0 && pick[t - 1] == n - k + t - 1) --t;
    if (t == 0) break;
    ++pick[t - 1];
    for (std::size_t u = t; u < k; ++u) pick[u] = pick[u - 1] + 1;
  }
  return best;
}

namespace serial {

Clustering gonzalez(const BitMatrix& points, std::size_t k, std::size_t first) {
  const std::size_t n = points.rows();
  validate_k(n, k);
  if (first >= n) throw ParameterError("first center index out of range");

  Clustering out;
  out.assignment.assign(n, 0);
  out.distance.assign(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<char> is_center(n, 0);
  std::size_t center = first;
  for (std::size_t t = 0; t < k; ++t) {
    if (t > 0) center = pick_farthest(out.distance, is_center);
    out.centers.push_back(center);
    is_center[center] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = static_cast<std::uint32_t>(hamming(points.row(i), points.row(center)));
      if (d < out.distance[i]) {
        out.distance[i] = d;
        out.assignment[i] = static_cast<std::uint32_t>(t);
      }
    }
    out.assignment[center] = static_cast<std::uint32_t>(t);
    out.distance[center] = 0;
    out.radius_history.push_back(*std::ranges::max_element(out.distance));
  }
  out.radius = out.radius_history.back();
  return out;
}

}  // namespace serial

}  // namespace clusmat
