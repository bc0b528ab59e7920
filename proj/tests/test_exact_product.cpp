#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "clusmat/exact_product.hpp"
#include "clusmat/planted.hpp"
#include "oracles.hpp"

using namespace clusmat;

namespace {

/// Uniformly random recursive tree: vertex order shuffled, each vertex
/// attached to a random earlier one.
std::vector<std::size_t> random_parents(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> parent(n, kNoParent);
  for (std::size_t t = 1; t < n; ++t) parent[order[t]] = order[rng() % t];
  return parent;
}

}  // namespace

TEST_CASE("cluster spanning tree shapes") {
  const auto pts = BitMatrix::from_strings({"000", "001", "111"});
  const Clustering c = gonzalez(pts, 2, 0);
  const SpanningTree t = build_cluster_spanning_tree(pts, c);
  CHECK(t.root() == 0);
  CHECK(t.parent(1) == 0);
  CHECK(t.parent(2) == 0);
  CHECK(t.edge_cost(1) == 1);
  CHECK(t.edge_cost(2) == 3);
  CHECK(t.ham_cost() == 4);

  SUBCASE("k = n gives a path") {
    const Clustering all = gonzalez(pts, 3, 0);
    const SpanningTree path = build_cluster_spanning_tree(pts, all);
    for (std::size_t t2 = 1; t2 < all.k(); ++t2) CHECK(path.parent(all.centers[t2]) == all.centers[t2 - 1]);
  }
  SUBCASE("k = 1 gives a star") {
    const Clustering one = gonzalez(pts, 1, 1);
    const SpanningTree star = build_cluster_spanning_tree(pts, one);
    CHECK(star.root() == 1);
    CHECK(star.parent(0) == 1);
    CHECK(star.parent(2) == 1);
    CHECK(star.ham_cost() == 1 + 2);
  }
  SUBCASE("centers must be members of their own cluster") {
    Clustering bad = c;
    bad.centers[1] = 1;
    CHECK_THROWS_AS(build_cluster_spanning_tree(pts, bad), ContractError);
  }
}

TEST_CASE("tree validation") {
  const auto pts = BitMatrix::from_strings({"00", "01", "11"});
  CHECK_THROWS_AS(SpanningTree::from_parents(pts, {kNoParent, 0}), ContractError);
  CHECK_THROWS_AS(SpanningTree::from_parents(pts, {kNoParent, kNoParent, 0}), ContractError);
  CHECK_THROWS_AS(SpanningTree::from_parents(pts, {kNoParent, 2, 1}), ContractError);
  CHECK_THROWS_AS(SpanningTree::from_parents(pts, {kNoParent, 1, 0}), ContractError);
  CHECK_NOTHROW(SpanningTree::from_parents(pts, {1, kNoParent, 1}));
}

TEST_CASE("traversal shapes") {
  SUBCASE("single vertex") {
    const auto pts = BitMatrix::from_strings({"01"});
    const Traversal w = traverse(pts, SpanningTree::from_parents(pts, {kNoParent}));
    CHECK(w.order == std::vector<std::size_t>{0});
    CHECK(w.steps.empty());
  }
  SUBCASE("path of two") {
    const auto pts = BitMatrix::from_strings({"0110", "1100"});
    const Traversal w = traverse(pts, SpanningTree::from_parents(pts, {kNoParent, 0}));
    CHECK(w.order == std::vector<std::size_t>{0, 1});
    REQUIRE(w.steps.size() == 1);
    CHECK(w.diff[w.steps[0].edge].size() == 2);
  }
  SUBCASE("star with two leaves revisits the center") {
    const auto pts = BitMatrix::from_strings({"000", "100", "011"});
    const Traversal w = traverse(pts, SpanningTree::from_parents(pts, {kNoParent, 0, 0}));
    CHECK(w.order == std::vector<std::size_t>{0, 1, 0, 2});
    REQUIRE(w.steps.size() == 3);
    CHECK(w.steps[1].revisit);
    CHECK(w.steps[1].edge == w.steps[0].edge);
    CHECK_FALSE(w.steps[2].revisit);
  }
}

TEST_CASE("traversal invariants on random trees") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    const auto pts = oracle::random_bits(n, 1 + rng() % 90, 0.5, rng);
    const SpanningTree tree = SpanningTree::from_parents(pts, random_parents(n, rng));
    const Traversal w = traverse(pts, tree);
    CHECK(w.order.front() == tree.root());
    CHECK(w.order.size() <= 2 * n - 1);
    std::vector<char> seen(n, 0);
    for (const std::size_t v : w.order) seen[v] = 1;
    CHECK(std::ranges::count(seen, 1) == static_cast<long>(n));
    std::size_t walked = 0;
    for (const auto& step : w.steps) {
      const bool adjacent = tree.parent(step.to) == step.from || tree.parent(step.from) == step.to;
      CHECK(adjacent);
      walked += w.diff[step.edge].size();
      CHECK(w.diff[step.edge].size() == oracle::hamming(pts, step.from, step.to));
    }
    CHECK(walked <= 2 * tree.ham_cost());
    std::size_t cost = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (v != tree.root()) cost += oracle::hamming(pts, v, tree.parent(v));
    CHECK(cost == tree.ham_cost());
  }
}

TEST_CASE("tree product is exact for any spanning tree") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t p = 1 + rng() % 60;
    const std::size_t q = 1 + rng() % 100;
    const std::size_t r = 1 + rng() % 300;
    const auto a = oracle::random_bits(p, q, 0.5, rng);
    const auto b = oracle::random_bits(q, r, 0.5, rng);
    const IntMatrix exact = oracle::schoolbook(a, b);
    const SpanningTree tree = SpanningTree::from_parents(a, random_parents(p, rng));

    const TreeProduct blocked = mmclus_st(a, b, tree);
    CHECK(blocked.product == exact);
    CHECK(blocked.max_column_updates <= 2 * tree.ham_cost());
    const TreeProduct literal = serial::mmclus_st(a, b, tree);
    CHECK(literal.product == exact);
    CHECK(literal.max_column_updates <= 2 * tree.ham_cost());
  }
}

TEST_CASE("tree product special cases") {
  std::mt19937_64 rng(61);
  const auto row = oracle::random_bits(1, 40, 0.5, rng);
  const auto b = oracle::random_bits(40, 7, 0.5, rng);
  const TreeProduct single = mmclus_st(row, b, SpanningTree::from_parents(row, {kNoParent}));
  CHECK(single.product == naive_multiply(row, b));
  CHECK(single.delta_updates == 0);

  BitMatrixBuilder rows(5, 40);
  for (std::size_t i = 0; i < 5; ++i) rows.set_row(i, row.row(0));
  const BitMatrix flat = std::move(rows).build();
  const TreeProduct zero = mmclus_st(flat, b, SpanningTree::from_parents(flat, {3, 3, 0, kNoParent, 2}));
  CHECK(zero.delta_updates == 0);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 7; ++j) CHECK(zero.product(i, j) == zero.product(0, j));

  const auto other = oracle::random_bits(4, 40, 0.5, rng);
  CHECK_THROWS_AS(mmclus_st(other, b, SpanningTree::from_parents(row, {kNoParent})), ContractError);
  CHECK_THROWS_AS(mmclus_st(row, other, SpanningTree::from_parents(row, {kNoParent})), DimensionError);
}

TEST_CASE("clustered exact product") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 1 + rng() % 60;
    const std::size_t q = 1 + rng() % 100;
    const std::size_t r = 1 + rng() % 60;
    const auto a = oracle::random_bits(p, q, 0.5, rng);
    const auto b = oracle::random_bits(q, r, 0.5, rng);
    const std::size_t ell = 1 + rng() % p;
    const std::size_t k = 1 + rng() % r;
    const ExactResult res = exact_clustered(a, b, ell, k);
    CHECK(res.product == oracle::schoolbook(a, b));
    CHECK(res.row_tree_cost <= (p - ell) * res.rows.radius + (ell - 1) * q);
    CHECK(res.column_tree_cost <= (r - k) * res.columns.radius + (k - 1) * q);
    const ExactResult swapped = exact_clustered(transpose(b), transpose(a), k, ell);
    CHECK(transpose(swapped.product) == res.product);
  }

  const auto a = oracle::random_bits(10, 20, 0.5, rng);
  const auto b = oracle::random_bits(20, 12, 0.5, rng);
  const ExactResult paths = exact_clustered(a, b, 10, 12);
  CHECK(paths.product == naive_multiply(a, b));
  CHECK_THROWS_AS(exact_clustered(a, b, 0, 1), ParameterError);
  CHECK_THROWS_AS(exact_clustered(a, b, 1, 13), ParameterError);
}

TEST_CASE("side selection follows the cheaper tree") {
  const auto a = generate_planted({.rows = 200, .cols = 256, .clusters = 4, .radius = 3, .seed = 1}).matrix;
  const auto b = random_matrix(256, 200, 0.5, 2);
  const ExactResult res = exact_clustered(a, b, 4, 4);
  CHECK(res.row_tree_cost < res.column_tree_cost);
  CHECK(res.side == ClusteredSide::RowsOfA);
  CHECK(res.product == naive_multiply(a, b));

  const ExactResult forced = exact_clustered(a, b, 4, 4, Orientation::Columns);
  CHECK(forced.side == ClusteredSide::ColumnsOfB);
  CHECK(forced.product == res.product);
}

TEST_CASE("parent list text format") {
  const std::vector<std::size_t> parent{2, kNoParent, 1};
  std::ostringstream out;
  write_parents(out, parent);
  CHECK(out.str() == "3\n2\n-1\n1\n");
  std::istringstream in(out.str());
  CHECK(read_parents(in) == parent);
  std::istringstream bad("2\n-1\n5\n");
  CHECK_THROWS_AS(read_parents(bad), ParseError);
}

TEST_CASE("tree product with long edges") {
  // Complementary rows differ in every column, so each row's corrections span several byte chunks.
  std::mt19937_64 rng(61);
  const std::size_t q = 600;
  BitMatrixBuilder rows(4, q);
  for (std::size_t h = 0; h < q; ++h) {
    rows.set(1, h, true);
    if (h % 3 == 0) rows.set(2, h, true);
    if (h % 2 == 0) rows.set(3, h, true);
  }
  const BitMatrix a = std::move(rows).build();
  BitMatrixBuilder ones(q, 300);
  for (std::size_t h = 0; h < q; ++h)
    for (std::size_t j = 0; j < 300; ++j) ones.set(h, j, true);
  for (const BitMatrix& b : {std::move(ones).build(), oracle::random_bits(q, 300, 0.5, rng)}) {
    const SpanningTree path = SpanningTree::from_parents(a, {kNoParent, 0, 1, 2});
    CHECK(mmclus_st(a, b, path).product == oracle::schoolbook(a, b));
    const SpanningTree star = SpanningTree::from_parents(a, {1, kNoParent, 1, 1});
    CHECK(mmclus_st(a, b, star).product == oracle::schoolbook(a, b));
  }
}
