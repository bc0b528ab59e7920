#include "clusmat/planted.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace clusmat {

namespace {

bool bernoulli(std::mt19937_64& rng, double density) {
  // 53-bit uniform in [0, 1), identical on every platform.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < density;
}

void fill_random_row(std::mt19937_64& rng, BitMatrixBuilder& builder, std::size_t i, double density) {
  for (std::size_t j = 0; j < builder.cols(); ++j) builder.set(i, j, bernoulli(rng, density));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

}  // namespace

BitMatrix random_matrix(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw ParameterError("density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  BitMatrixBuilder builder(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) fill_random_row(rng, builder, i, density);
  return std::move(builder).build();
}

PlantedInstance generate_planted(const PlantedSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) throw ParameterError("planted matrix must be non-empty");
  if (spec.clusters == 0 || spec.clusters > spec.rows) throw ParameterError("clusters must lie in [1, rows]");
  if (spec.radius > spec.cols) throw ParameterError("radius must not exceed cols");
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw ParameterError("density must lie in [0, 1]");
  if (spec.cols < 63 && spec.clusters > (std::size_t{1} << spec.cols)) {
    throw ParameterError("more clusters than distinct points of this width");
  }

  std::mt19937_64 rng(spec.seed);

  // Distinct centers; a redraw that keeps colliding means the density leaves too few patterns.
  BitMatrixBuilder centers(spec.clusters, spec.cols);
  std::set<std::vector<Word>> seen;
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == 1000) throw ParameterError("cannot draw distinct centers at this density");
      fill_random_row(rng, centers, c, spec.density);
      auto words = centers.row_words(c);
      if (seen.emplace(words.begin(), words.end()).second) break;
    }
  }

  std::vector<std::uint32_t> cluster_of(spec.rows);
  for (std::size_t i = 0; i < spec.rows; ++i) cluster_of[i] = static_cast<std::uint32_t>(i % spec.clusters);
  std::shuffle(cluster_of.begin(), cluster_of.end(), rng);

  BitMatrixBuilder rows(spec.rows, spec.cols);
  std::vector<std::size_t> positions(spec.cols);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    std::ranges::copy(centers.row_words(cluster_of[i]), rows.row_words(i).begin());
    // Partial Fisher-Yates picks `flips` distinct coordinates.
    const std::size_t flips = uniform_below(rng, spec.radius + 1);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    for (std::size_t t = 0; t < flips; ++t) {
      const std::size_t pick = t + uniform_below(rng, spec.cols - t);
      std::swap(positions[t], positions[pick]);
      rows.flip(i, positions[t]);
    }
  }

  PlantedInstance out;
  out.matrix = std::move(rows).build();
  out.centers = std::move(centers).build();
  out.cluster_of = std::move(cluster_of);
  return out;
}

std::string describe(const PlantedSpec& spec) {
  std::ostringstream os;
  os << "planted rows=" << spec.rows << " cols=" << spec.cols << " clusters=" << spec.clusters
     << " radius=" << spec.radius << " density=" << spec.density << " seed=" << spec.seed;
  return os.str();
}

}  // namespace clusmat
