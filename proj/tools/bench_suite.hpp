#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace clusmat::tools {

/// Sweep description read from a `key = value` file. Lines starting with '#'
/// and blank lines are ignored; list values are comma separated.
///
///   shapes   = 256x256x256, 512x1024x256   # p x q x r
///   ells     = 8, 32
///   ks       = 8, 32
///   seeds    = 1, 2
///   clusters = 32        # planted clusters for rows of A and columns of B
///   radius   = 16        # planted flip radius
///   density  = 0.5
///   epsilon  = 0.25
///   algos    = naive, approx, r_approx, query, st
struct BenchConfig {
  std::vector<std::array<std::size_t, 3>> shapes;
  std::vector<std::size_t> ells{8};
  std::vector<std::size_t> ks{8};
  std::vector<std::uint64_t> seeds{1};
  std::size_t clusters = 8;
  std::size_t radius = 4;
  double density = 0.5;
  double epsilon = 0.25;
  std::vector<std::string> algos{"naive", "approx", "r_approx", "query", "st"};

  static BenchConfig parse(std::istream& in);
};

inline constexpr const char* kBenchHeader = "shape,ell,k,algo,time_ms,radius,ham_cost,delta_updates,max_err,seed";

/// One CSV row per (shape, seed, algo, ell, k); the naive baseline once per (shape, seed).
void run_bench(const BenchConfig& config, std::ostream& csv);

}  // namespace clusmat::tools
