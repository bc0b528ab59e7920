#include <doctest.h>

#include <random>
#include <sstream>

#include "clusmat/entry_query.hpp"
#include "oracles.hpp"

using namespace clusmat;

TEST_CASE("difference index sets") {
  const auto a = BitMatrix::from_strings({"101", "100"});
  const auto b = BitMatrix::from_strings({"1", "1", "1"});
  const PreprocState s = PreprocState::one_sided(a, b, 1);
  REQUIRE_FALSE(s.transposed());
  const IndexSets& ind = s.left_differences();
  CHECK(ind[0].empty());
  REQUIRE(ind[1].size() == 1);
  CHECK(ind[1][0] == 2);
  CHECK(s.left_radius() == 1);

  const auto same = BitMatrix::from_strings({"0110", "0110"});
  const PreprocState z = PreprocState::one_sided(same, BitMatrix::from_strings({"1", "0", "1", "1"}), 1);
  CHECK(z.left_differences().total() == 0);
}

TEST_CASE("one-sided query hand trace") {
  const auto a = BitMatrix::from_strings({"101", "100"});
  const auto b = BitMatrix::from_strings({"1", "1", "1"});
  const PreprocState s = PreprocState::one_sided(a, b, 1);
  CHECK(s.approximation()(1, 0) == 2);
  const QueryResult q = s.query_counted(1, 0);
  CHECK(q.value == 1);
  CHECK(q.updates == 1);
  const QueryResult q0 = s.query_counted(0, 0);
  CHECK(q0.value == 2);
  CHECK(q0.updates == 0);
  CHECK_THROWS_AS(s.query(2, 0), IndexError);
  CHECK_THROWS_AS(s.query(0, 1), IndexError);
}

TEST_CASE("every query matches the oracle, both modes") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 1 + rng() % 40;
    const std::size_t q = 1 + rng() % 60;
    const std::size_t r = 1 + rng() % 40;
    const auto a = oracle::random_bits(p, q, 0.5, rng);
    const auto b = oracle::random_bits(q, r, 0.5, rng);
    const IntMatrix exact = oracle::schoolbook(a, b);

    const PreprocState one = PreprocState::one_sided(a, b, 1 + rng() % std::min(p, r));
    const PreprocState two = PreprocState::two_sided(a, b, 1 + rng() % p, 1 + rng() % r, 0.25, rng());
    CHECK(one.transposed() == (p < r));
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        const QueryResult x = one.query_counted(i, j);
        REQUIRE(x.value == exact(i, j));
        CHECK(x.updates <= one.left_radius());
        const QueryResult y = two.query_counted(i, j);
        REQUIRE(y.value == exact(i, j));
        CHECK(y.updates <= two.left_radius() + two.right_radius());
      }
    }
  }
}

TEST_CASE("sweep and batch queries") {
  std::mt19937_64 rng(43);
  const auto a = oracle::random_bits(32, 48, 0.5, rng);
  const auto b = oracle::random_bits(48, 16, 0.5, rng);
  const IntMatrix exact = naive_multiply(a, b);
  CHECK(exact_via_queries(a, b, 4) == exact);
  CHECK(exact_via_queries_randomized(a, b, 4, 3, 0.25, 7) == exact);

  const PreprocState s = PreprocState::one_sided(a, b, 4);
  const SweepResult sw = s.sweep();
  CHECK(sw.product == exact);
  CHECK(sw.max_updates <= s.left_radius());

  const std::vector<std::pair<std::size_t, std::size_t>> cells{{0, 0}, {31, 15}, {5, 9}, {0, 0}};
  const auto values = s.query_batch(cells);
  for (std::size_t t = 0; t < cells.size(); ++t) CHECK(values[t] == exact(cells[t].first, cells[t].second));

  // Identical rows: one center, no corrections anywhere.
  BitMatrixBuilder rows(6, 48);
  for (std::size_t i = 0; i < 6; ++i) rows.set_row(i, a.row(0));
  const BitMatrix flat = std::move(rows).build();
  const SweepResult none = PreprocState::one_sided(flat, b, 1, Orientation::Rows).sweep();
  CHECK(none.total_updates == 0);
  CHECK(none.product == naive_multiply(flat, b));
}

TEST_CASE("state serialization") {
  std::mt19937_64 rng(47);
  const auto a = oracle::random_bits(20, 70, 0.5, rng);
  const auto b = oracle::random_bits(70, 30, 0.5, rng);
  const IntMatrix exact = naive_multiply(a, b);

  for (const bool randomized : {false, true}) {
    const PreprocState s = randomized ? PreprocState::two_sided(a, b, 5, 4, 0.25, 3) : PreprocState::one_sided(a, b, 5);
    std::stringstream buf;
    s.save(buf);
    const PreprocState back = PreprocState::load(buf, a, b);
    CHECK(back.mode() == s.mode());
    CHECK(back.transposed() == s.transposed());
    CHECK(back.left_radius() == s.left_radius());
    CHECK(back.right_radius() == s.right_radius());
    CHECK(back.approximation() == s.approximation());
    CHECK(back.sweep().product == exact);

    std::stringstream again;
    back.save(again);
    CHECK(again.str() == buf.str());

    std::stringstream wrong(buf.str());
    CHECK_THROWS_AS(PreprocState::load(wrong, a, a), ContractError);
  }

  std::stringstream junk("NOPE");
  CHECK_THROWS_AS(PreprocState::load(junk, a, b), ParseError);
}
