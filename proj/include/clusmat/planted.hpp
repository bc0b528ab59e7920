#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clusmat/bitmatrix.hpp"

namespace clusmat {

/// Rows drawn around hidden centers: each row copies one of `clusters`
/// distinct random centers and flips between 0 and `radius` distinct bits, so
/// the optimal k-center radius for k = clusters is at most `radius`.
struct PlantedSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t clusters = 1;
  std::size_t radius = 0;
  double density = 0.5;  // probability of a 1 in each center
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  BitMatrix matrix;
  BitMatrix centers;                     // clusters x cols
  std::vector<std::uint32_t> cluster_of;  // hidden cluster of each row
};

PlantedInstance generate_planted(const PlantedSpec& spec);

/// One-line "key=value" record of the spec, written next to generated files.
std::string describe(const PlantedSpec& spec);

/// i.i.d. Bernoulli(density) entries.
BitMatrix random_matrix(std::size_t rows, std::size_t cols, double density, std::uint64_t seed);

}  // namespace clusmat
