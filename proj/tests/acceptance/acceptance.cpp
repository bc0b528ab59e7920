// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clusmat/approx_product.hpp"
#include "clusmat/clustering.hpp"
#include "clusmat/entry_query.hpp"
#include "clusmat/exact_product.hpp"
#include "clusmat/io.hpp"
#include "clusmat/planted.hpp"

using namespace clusmat;
namespace fs = std::filesystem;
using steady = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(steady::time_point t0) { return std::chrono::duration<double>(steady::now() - t0).count(); }

struct Instance {
  BitMatrix a;
  BitMatrix b;
  std::size_t ell = 1;
  std::size_t k = 1;
  double density = 0.5;
};

/// Criterion 1 corpus: 200 seeded instances, p, q, r in [8, 256], densities {0.1, 0.5, 0.9}.
std::vector<Instance> random_corpus() {
  std::vector<Instance> corpus;
  std::mt19937_64 rng(20260101);
  const double densities[] = {0.1, 0.5, 0.9};
  for (std::size_t t = 0; t < 200; ++t) {
    std::uniform_int_distribution<std::size_t> dim(8, 256);
    const std::size_t p = dim(rng);
    const std::size_t q = dim(rng);
    const std::size_t r = dim(rng);
    const double density = densities[t % 3];
    Instance inst;
    inst.a = random_matrix(p, q, density, rng());
    inst.b = random_matrix(q, r, density, rng());
    inst.ell = 1 + rng() % p;
    inst.k = 1 + rng() % r;
    inst.density = density;
    corpus.push_back(std::move(inst));
  }
  return corpus;
}

Outcome criterion1(const std::vector<Instance>& corpus) {
  const auto t0 = steady::now();
  std::size_t mismatches = 0;
  for (const auto& inst : corpus) {
    const IntMatrix exact = naive_multiply(inst.a, inst.b);
    if (exact_clustered(inst.a, inst.b, inst.ell, inst.k).product != exact) ++mismatches;
    const std::size_t centers = inst.a.rows() >= inst.b.cols() ? inst.ell : inst.k;
    if (exact_via_queries(inst.a, inst.b, centers) != exact) ++mismatches;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << corpus.size() << " instances, " << mismatches << " mismatching products, " << secs << " s (limit 120 s)";
  return {mismatches == 0 && secs < 120.0, os.str()};
}

struct QueryCorpusStats {
  std::size_t instances = 0;
  std::size_t runs = 0;
  std::size_t wrong = 0;
  std::size_t bound_violations = 0;
  std::size_t max_updates_seen = 0;
};

/// Criteria 2 and 7: exhaustive query sweeps on 50 instances up to 64x96x48,
/// one-sided and two-sided, 5 seeds each.
QueryCorpusStats query_corpus() {
  QueryCorpusStats stats;
  std::mt19937_64 rng(777);
  for (std::size_t t = 0; t < 50; ++t) {
    const bool planted = t % 2 == 1;
    const std::size_t p = 1 + rng() % 64;
    const std::size_t q = planted ? 16 + rng() % 81 : 1 + rng() % 96;
    const std::size_t r = 1 + rng() % 48;
    const double density = (t % 3 == 0) ? 0.2 : (t % 3 == 1 ? 0.5 : 0.8);
    BitMatrix a;
    BitMatrix b;
    if (!planted) {
      a = random_matrix(p, q, density, rng());
      b = random_matrix(q, r, density, rng());
    } else {
      a = generate_planted({.rows = p, .cols = q, .clusters = 1 + rng() % std::min<std::size_t>(p, 8), .radius = rng() % (q + 1) / 4,
                            .density = density, .seed = rng()})
              .matrix;
      b = transpose(generate_planted({.rows = r, .cols = q, .clusters = 1 + rng() % std::min<std::size_t>(r, 8), .radius = rng() % (q + 1) / 4,
                                      .density = density, .seed = rng()})
                        .matrix);
    }
    const IntMatrix exact = naive_multiply(a, b);
    ++stats.instances;

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const std::size_t ell = 1 + (rng() % p);
      const std::size_t k = 1 + (rng() % r);
      const PreprocState one = PreprocState::one_sided(a, b, p >= r ? ell : k);
      const PreprocState two = PreprocState::two_sided(a, b, ell, k, 0.25, seed);
      for (const PreprocState* s : {&one, &two}) {
        ++stats.runs;
        for (std::size_t i = 0; i < p; ++i) {
          for (std::size_t j = 0; j < r; ++j) {
            const QueryResult res = s->query_counted(i, j);
            if (res.value != exact(i, j)) ++stats.wrong;
            // One-sided: left radius only (right radius is zero); two-sided: sum.
            if (res.updates > s->left_radius() + s->right_radius()) ++stats.bound_violations;
            stats.max_updates_seen = std::max(stats.max_updates_seen, res.updates);
          }
        }
      }
    }
  }
  return stats;
}

Outcome criterion3(const std::vector<Instance>& corpus) {
  std::size_t violations = 0;
  std::size_t checks = 0;
  std::size_t worst_slack = 0;
  std::uint64_t seed = 1;
  for (const auto& inst : corpus) {
    const IntMatrix exact = naive_multiply(inst.a, inst.b);
    const std::size_t centers = inst.a.rows() >= inst.b.cols() ? inst.ell : inst.k;
    const ApproxResult one = mmclus_approx(inst.a, inst.b, centers);
    ++checks;
    if (max_abs_difference(exact, one.product) > one.certificate) ++violations;
    worst_slack = std::max<std::size_t>(worst_slack, one.certificate - max_abs_difference(exact, one.product));
    for (const double eps : {0.1, 0.25, 0.49}) {
      const ApproxResult two = mmclus_r_approx(inst.a, inst.b, inst.ell, inst.k, eps, seed++);
      ++checks;
      if (max_abs_difference(exact, two.product) > two.certificate) ++violations;
    }
  }
  std::ostringstream os;
  os << checks << " approximations, " << violations << " certificate violations";
  return {violations == 0, os.str()};
}

Outcome criterion4() {
  std::size_t runs = 0;
  std::size_t gonzalez_ok = 0;
  std::size_t randomized_ok = 0;
  std::ostringstream per_config;
  for (const std::size_t clusters : {4, 16, 64}) {
    for (const std::size_t s : {0, 4, 16}) {
      std::size_t config_ok = 0;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const PlantedSpec spec{.rows = 512, .cols = 256, .clusters = clusters, .radius = s, .density = 0.5,
                               .seed = seed * 1000 + clusters * 10 + s};
        const BitMatrix m = generate_planted(spec).matrix;
        ++runs;
        if (gonzalez(m, clusters).radius <= 2 * s) ++gonzalez_ok;
        if (static_cast<double>(randomized_kcenter(m, clusters, 0.25, seed).radius) <= 2.25 * static_cast<double>(s)) {
          ++randomized_ok;
          ++config_ok;
        }
      }
      per_config << " c" << clusters << "/s" << s << ":" << config_ok << "/20";
    }
  }
  const double frac = static_cast<double>(randomized_ok) / static_cast<double>(runs);
  std::ostringstream os;
  os << "gonzalez " << gonzalez_ok << "/" << runs << " within 2s; randomized " << randomized_ok << "/" << runs
     << " within 2.25s (need >= 90%);" << per_config.str();
  return {gonzalez_ok == runs && frac >= 0.90, os.str()};
}

Outcome criterion5() {
  std::mt19937_64 rng(55);
  std::size_t violations = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 14;
    const std::size_t d = 1 + rng() % 10;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(3, n);
    const BitMatrix pts = random_matrix(n, d, 0.5, rng());
    if (gonzalez(pts, k, rng() % n).radius > 2 * brute_force_discrete_kcenter(pts, k)) ++violations;
  }
  return {violations == 0, "100 sets, " + std::to_string(violations) + " violations of radius <= 2 * OPT"};
}

Outcome criterion6(const std::vector<Instance>& corpus) {
  std::size_t trees = 0;
  std::size_t cost_violations = 0;
  std::size_t delta_violations = 0;
  auto check_tree = [&](const BitMatrix& points, std::size_t centers, const BitMatrix& other) {
    const Clustering c = gonzalez(points, centers);
    const SpanningTree tree = build_cluster_spanning_tree(points, c);
    ++trees;
    const std::size_t n = points.rows();
    if (tree.ham_cost() > (n - centers) * c.radius + (centers - 1) * points.cols()) ++cost_violations;
    // Per-column corrections for both the literal walk and the blocked kernel.
    const TreeProduct literal = serial::mmclus_st(points, other, tree);
    const TreeProduct blocked = mmclus_st(points, other, tree);
    if (literal.max_column_updates > 2 * tree.ham_cost()) ++delta_violations;
    if (blocked.max_column_updates > 2 * tree.ham_cost()) ++delta_violations;
  };
  for (const auto& inst : corpus) {
    check_tree(inst.a, inst.ell, inst.b);
    check_tree(transpose(inst.b), inst.k, transpose(inst.a));
  }
  for (const std::size_t clusters : {4, 16, 64}) {
    for (const std::size_t s : {0, 4, 16}) {
      const BitMatrix m = generate_planted({.rows = 512, .cols = 256, .clusters = clusters, .radius = s, .seed = s})
                              .matrix;
      check_tree(m, clusters, random_matrix(256, 64, 0.5, clusters));
    }
  }
  std::ostringstream os;
  os << trees << " trees, " << cost_violations << " cost-bound violations, " << delta_violations
     << " per-column update violations";
  return {cost_violations == 0 && delta_violations == 0, os.str()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLUSMAT_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion8() {
  const fs::path dir = fs::temp_directory_path() / ("clusmat_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string a = (dir / "a.bmb").string();
  const std::string b = (dir / "b.bmb").string();
  if (run_cli("gen --rows 2048 --cols 2048 --clusters 32 --radius 16 --seed 11 --out " + a) != 0 ||
      run_cli("gen --rows 2048 --cols 2048 --clusters 32 --radius 16 --seed 12 --columns --out " + b) != 0) {
    fs::remove_all(dir);
    return {false, "instance generation failed"};
  }
  const std::string ops = "multiply --a " + a + " --b " + b;
  auto time_run = [&](const std::string& extra, const fs::path& out) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = steady::now();
      if (run_cli(ops + extra + " --out " + out.string() + " 2>/dev/null") != 0) return -1.0;
      best = std::min(best, seconds_since(t0));
    }
    return best;
  };
  const auto t_start = steady::now();
  const double naive = time_run(" --algo naive", dir / "naive.csv");
  const double st = time_run(" --algo st --ell 32 --k 32", dir / "st.csv");
  const bool same = slurp(dir / "naive.csv") == slurp(dir / "st.csv");
  const double total = seconds_since(t_start);
  fs::remove_all(dir);

  std::ostringstream os;
  os << "naive " << naive << " s, st " << st << " s, ratio " << (st > 0 ? naive / st : 0.0)
     << ", outputs identical: " << (same ? "yes" : "no") << ", budget used " << total << " s of 300";
  return {naive > 0 && st > 0 && st < naive && same && total < 300.0, os.str()};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&failures](int id, const char* name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
  };

  const std::vector<Instance> corpus = random_corpus();
  report(1, "exact products equal the naive oracle", criterion1(corpus));

  const QueryCorpusStats q = query_corpus();
  {
    std::ostringstream os;
    os << q.instances << " instances, " << q.runs << " preprocessings, " << q.wrong << " wrong entries";
    report(2, "exhaustive query correctness", {q.wrong == 0 && q.instances == 50, os.str()});
  }
  report(3, "approximation certificate holds", criterion3(corpus));
  report(4, "planted radius bounds", criterion4());
  report(5, "farthest-point within twice the optimum", criterion5());
  report(6, "spanning-tree cost and delta-update bounds", criterion6(corpus));
  {
    std::ostringstream os;
    os << q.bound_violations << " queries over the radius bound (max updates seen " << q.max_updates_seen << ")";
    report(7, "query work bounded by clustering radius", {q.bound_violations == 0, os.str()});
  }
  report(8, "tree product beats naive at desk scale", criterion8());

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
