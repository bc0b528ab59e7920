#include "bench_suite.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

#include "clusmat/approx_product.hpp"
#include "clusmat/entry_query.hpp"
#include "clusmat/errors.hpp"
#include "clusmat/exact_product.hpp"
#include "clusmat/planted.hpp"

namespace clusmat::tools {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    std::string item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T number(const std::string& token, const std::string& key) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("config: bad value '" + token + "' for " + key);
  }
  return value;
}

template <typename T>
std::vector<T> numbers(const std::string& value, const std::string& key) {
  std::vector<T> out;
  for (const auto& item : split(value, ',')) out.push_back(number<T>(item, key));
  if (out.empty()) throw ParseError("config: empty list for " + key);
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct Row {
  std::string algo;
  std::size_t ell = 0;
  std::size_t k = 0;
  double time_ms = 0;
  std::size_t radius = 0;
  std::size_t ham_cost = 0;
  std::size_t delta_updates = 0;
  std::size_t max_err = 0;
};

}  // namespace

BenchConfig BenchConfig::parse(std::istream& in) {
  BenchConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    if (key == "shapes") {
      cfg.shapes.clear();
      for (const auto& item : split(value, ',')) {
        const auto dims = split(item, 'x');
        if (dims.size() != 3) throw ParseError("config: shape '" + item + "' is not p x q x r");
        std::array<std::size_t, 3> shape{};
        for (std::size_t d = 0; d < 3; ++d) {
          shape[d] = number<std::size_t>(dims[d], key);
          if (shape[d] == 0) throw ParseError("config: zero dimension in '" + item + "'");
        }
        cfg.shapes.push_back(shape);
      }
    } else if (key == "ells") {
      cfg.ells = numbers<std::size_t>(value, key);
    } else if (key == "ks") {
      cfg.ks = numbers<std::size_t>(value, key);
    } else if (key == "seeds") {
      cfg.seeds = numbers<std::uint64_t>(value, key);
    } else if (key == "clusters") {
      cfg.clusters = number<std::size_t>(value, key);
    } else if (key == "radius") {
      cfg.radius = number<std::size_t>(value, key);
    } else if (key == "density") {
      cfg.density = number<double>(value, key);
    } else if (key == "epsilon") {
      cfg.epsilon = number<double>(value, key);
    } else if (key == "algos") {
      cfg.algos = split(value, ',');
      for (const auto& a : cfg.algos) {
        if (a != "naive" && a != "approx" && a != "r_approx" && a != "query" && a != "st") {
          throw ParseError("config: unknown algo '" + a + "'");
        }
      }
    } else {
      throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (cfg.shapes.empty()) throw ParseError("config: no shapes given");
  return cfg;
}

void run_bench(const BenchConfig& cfg, std::ostream& csv) {
  using clock = std::chrono::steady_clock;
  const auto wants = [&cfg](const char* algo) { return std::ranges::find(cfg.algos, algo) != cfg.algos.end(); };

  csv << kBenchHeader << '\n';
  for (const auto& [p, q, r] : cfg.shapes) {
    std::ostringstream shape_name;
    shape_name << p << 'x' << q << 'x' << r;
    for (const std::uint64_t seed : cfg.seeds) {
      const BitMatrix a = generate_planted({.rows = p,
                                            .cols = q,
                                            .clusters = std::min(cfg.clusters, p),
                                            .radius = std::min(cfg.radius, q),
                                            .density = cfg.density,
                                            .seed = seed})
                              .matrix;
      const BitMatrix b = transpose(generate_planted({.rows = r,
                                                      .cols = q,
                                                      .clusters = std::min(cfg.clusters, r),
                                                      .radius = std::min(cfg.radius, q),
                                                      .density = cfg.density,
                                                      .seed = seed ^ 0x5bd1e995ULL})
                                        .matrix);

      auto start = clock::now();
      const IntMatrix exact = naive_multiply(a, b);
      std::vector<Row> rows;
      rows.push_back({.algo = "naive", .time_ms = elapsed_ms(start)});

      for (const std::size_t ell_raw : cfg.ells) {
        for (const std::size_t k_raw : cfg.ks) {
          const std::size_t ell = std::clamp<std::size_t>(ell_raw, 1, p);
          const std::size_t k = std::clamp<std::size_t>(k_raw, 1, r);
          if (wants("approx")) {
            start = clock::now();
            // One-sided: cluster the longer side with its own parameter.
            const ApproxResult res = mmclus_approx(a, b, p >= r ? ell : k);
            const double t = elapsed_ms(start);
            rows.push_back({.algo = "approx", .ell = ell, .k = k, .time_ms = t, .radius = res.certificate,
                            .max_err = max_abs_difference(exact, res.product)});
          }
          if (wants("r_approx")) {
            start = clock::now();
            const ApproxResult res = mmclus_r_approx(a, b, ell, k, cfg.epsilon, seed);
            const double t = elapsed_ms(start);
            rows.push_back({.algo = "r_approx", .ell = ell, .k = k, .time_ms = t, .radius = res.certificate,
                            .max_err = max_abs_difference(exact, res.product)});
          }
          if (wants("query")) {
            start = clock::now();
            const PreprocState state = PreprocState::one_sided(a, b, p >= r ? ell : k);
            const SweepResult sweep = state.sweep();
            const double t = elapsed_ms(start);
            rows.push_back({.algo = "query", .ell = ell, .k = k, .time_ms = t, .radius = state.left_radius(),
                            .ham_cost = state.left_differences().total(),
                            .delta_updates = sweep.total_updates,
                            .max_err = max_abs_difference(exact, sweep.product)});
          }
          if (wants("st")) {
            start = clock::now();
            const ExactResult res = exact_clustered(a, b, ell, k);
            const double t = elapsed_ms(start);
            const bool row_side = res.side == ClusteredSide::RowsOfA;
            rows.push_back({.algo = "st", .ell = ell, .k = k, .time_ms = t,
                            .radius = row_side ? res.rows.radius : res.columns.radius,
                            .ham_cost = row_side ? res.row_tree_cost : res.column_tree_cost,
                            .delta_updates = res.delta_updates,
                            .max_err = max_abs_difference(exact, res.product)});
          }
        }
      }

      for (const Row& row : rows) {
        csv << shape_name.str() << ',' << row.ell << ',' << row.k << ',' << row.algo << ',' << row.time_ms << ','
            << row.radius << ',' << row.ham_cost << ',' << row.delta_updates << ',' << row.max_err << ',' << seed
            << '\n';
      }
    }
  }
}

}  // namespace clusmat::tools
