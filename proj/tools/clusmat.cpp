// clusmat: command-line front end for clustered 0-1 matrix multiplication.
//
//   clusmat gen      --rows P --cols Q --clusters C --radius S [--density D] [--seed N] [--columns] --out FILE
//   clusmat convert  --in FILE --out FILE
//   clusmat multiply --a A --b B [--algo naive|st|query] [--ell L] [--k K] [--first-center I|random] [--out CSV]
//   clusmat approx   --a A --b B --ell L [--randomized --k K --epsilon E --seed N] [--verify] [--out CSV]
//   clusmat preproc  --a A --b B --ell L [--randomized --k K --epsilon E --seed N] --out STATE.pps
//   clusmat query    --a A --b B --state STATE.pps (--cell I,J ... | --cells FILE)
//   clusmat bench    --config FILE [--out CSV]
//
// Matrix data goes to stdout or --out; statistics and diagnostics go to stderr.
// Exit codes: 0 success, 1 other errors, 2 shape mismatch, 3 parse error.

#include <CLI11.hpp>
#include <omp.h>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "bench_suite.hpp"
#include "clusmat/approx_product.hpp"
#include "clusmat/entry_query.hpp"
#include "clusmat/exact_product.hpp"
#include "clusmat/io.hpp"
#include "clusmat/planted.hpp"

namespace {

using namespace clusmat;
using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point start) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

/// Writes to a file, or to stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void require(bool present, const char* flag, const char* algo) {
  if (!present) throw ParameterError(std::string(flag) + " is required for " + algo);
}

Orientation parse_side(const std::string& side) {
  if (side == "auto") return Orientation::Auto;
  if (side == "rows") return Orientation::Rows;
  return Orientation::Columns;
}

struct Common {
  std::string a_path;
  std::string b_path;
  std::optional<std::size_t> ell;
  std::optional<std::size_t> k;
  double epsilon = 0.25;
  std::uint64_t seed = 1;
  bool randomized = false;
  std::string side = "auto";
  std::string first_center = "0";
  std::string out;

  void add_operands(CLI::App* cmd) {
    cmd->add_option("--a", a_path, "Left operand (.bm or .bmb)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--b", b_path, "Right operand (.bm or .bmb)")->required()->check(CLI::ExistingFile);
  }
  void add_clustering(CLI::App* cmd) {
    cmd->add_option("--ell", ell, "Number of row centers for A");
    cmd->add_option("--k", k, "Number of column centers for B");
    cmd->add_option("--side", side, "Side to cluster")->check(CLI::IsMember({"auto", "rows", "columns"}));
    cmd->add_option("--first-center", first_center, "First farthest-point center: an index, or 'random' (uses --seed)");
  }

  /// First center among n points. A fixed index is shared by both sides; a
  /// random one is drawn per side from --seed.
  std::size_t first_of(std::size_t n, std::uint64_t side_salt) const {
    if (first_center == "random") return std::mt19937_64(seed ^ side_salt)() % n;
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(first_center.data(), first_center.data() + first_center.size(), index);
    if (ec != std::errc{} || ptr != first_center.data() + first_center.size()) {
      throw ParseError("--first-center must be an index or 'random': " + first_center);
    }
    return index;
  }
  std::size_t first_for(const BitMatrix& a, const BitMatrix& b, Orientation o) const {
    return o == Orientation::Rows ? first_of(a.rows(), 0) : first_of(b.cols(), 1);
  }
  void add_randomized(CLI::App* cmd) {
    cmd->add_flag("--randomized", randomized, "Two-sided randomized clustering");
    cmd->add_option("--epsilon", epsilon, "Projection accuracy in (0, 1/2)");
    cmd->add_option("--seed", seed, "RNG seed");
  }

  /// Centers for a one-sided run: --ell clusters rows of A, --k clusters columns of B.
  std::pair<std::size_t, Orientation> one_sided(const BitMatrix& a, const BitMatrix& b, const char* algo) const {
    Orientation o = parse_side(side);
    if (o == Orientation::Auto) o = a.rows() >= b.cols() ? Orientation::Rows : Orientation::Columns;
    if (o == Orientation::Rows) {
      require(ell.has_value(), "--ell", algo);
      return {*ell, o};
    }
    require(k.has_value() || ell.has_value(), "--k", algo);
    return {k.value_or(ell.value_or(1)), o};
  }
};

int run_gen(const PlantedSpec& spec, bool columns, const std::string& out) {
  PlantedSpec effective = spec;
  if (columns) std::swap(effective.rows, effective.cols);
  BitMatrix m = generate_planted(effective).matrix;
  if (columns) m = transpose(m);
  io::save_matrix(out, m);
  std::ofstream meta(out + ".meta");
  meta << describe(effective) << (columns ? " orientation=columns" : " orientation=rows") << '\n';
  return 0;
}

int run_multiply(const Common& c, const std::string& algo, const std::string& tree_path) {
  const BitMatrix a = io::load_matrix(c.a_path);
  const BitMatrix b = io::load_matrix(c.b_path);
  if (a.cols() != b.rows()) throw DimensionError("A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                 ", B is " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  IntMatrix product;
  std::ostringstream stats;
  const auto start = clock_type::now();
  if (algo == "naive") {
    product = naive_multiply(a, b);
    stats << "algo=naive";
  } else if (algo == "st" && !tree_path.empty()) {
    std::ifstream in(tree_path);
    if (!in) throw std::runtime_error("cannot open " + tree_path);
    const SpanningTree tree = SpanningTree::from_parents(a, read_parents(in));
    TreeProduct tp = mmclus_st(a, b, tree);
    product = std::move(tp.product);
    stats << "algo=st tree=external ham_cost_rows=" << tree.ham_cost() << " delta_updates=" << tp.delta_updates;
  } else if (algo == "st") {
    require(c.ell.has_value(), "--ell", "st");
    require(c.k.has_value(), "--k", "st");
    ExactResult res =
        exact_clustered(a, b, *c.ell, *c.k, parse_side(c.side), c.first_of(a.rows(), 0), c.first_of(b.cols(), 1));
    product = std::move(res.product);
    stats << "algo=st side=" << to_string(res.side) << " radius_rows=" << res.rows.radius
          << " radius_cols=" << res.columns.radius << " ham_cost_rows=" << res.row_tree_cost
          << " ham_cost_cols=" << res.column_tree_cost << " delta_updates=" << res.delta_updates;
  } else {
    std::optional<PreprocState> state;
    if (c.randomized) {
      require(c.ell.has_value(), "--ell", "query");
      require(c.k.has_value(), "--k", "query");
      state.emplace(PreprocState::two_sided(a, b, *c.ell, *c.k, c.epsilon, c.seed));
    } else {
      const auto [centers, orientation] = c.one_sided(a, b, "query");
      state.emplace(PreprocState::one_sided(a, b, centers, orientation, c.first_for(a, b, orientation)));
    }
    SweepResult sweep = state->sweep();
    product = std::move(sweep.product);
    stats << "algo=query radius_rows=" << (state->transposed() ? state->right_radius() : state->left_radius())
          << " radius_cols=" << (state->transposed() ? state->left_radius() : state->right_radius())
          << " query_updates=" << sweep.total_updates << " max_query_updates=" << sweep.max_updates;
  }
  const double elapsed = ms_since(start);

  Output out(c.out);
  io::write_csv(out.stream(), product);
  std::cerr << "stats " << stats.str() << " time_ms=" << elapsed << '\n';
  return 0;
}

int run_approx(const Common& c, bool verify) {
  const BitMatrix a = io::load_matrix(c.a_path);
  const BitMatrix b = io::load_matrix(c.b_path);
  if (a.cols() != b.rows()) throw DimensionError("inner dimensions differ");
  const auto start = clock_type::now();
  ApproxResult res;
  if (c.randomized) {
    require(c.ell.has_value(), "--ell", "randomized approx");
    require(c.k.has_value(), "--k", "randomized approx");
    res = mmclus_r_approx(a, b, *c.ell, *c.k, c.epsilon, c.seed);
  } else {
    const auto [centers, orientation] = c.one_sided(a, b, "approx");
    res = mmclus_approx(a, b, centers, orientation, c.first_for(a, b, orientation));
  }
  const double elapsed = ms_since(start);

  Output out(c.out);
  io::write_csv(out.stream(), res.product);
  std::cerr << "certificate=" << res.certificate << '\n';
  std::cerr << "stats side=" << to_string(res.side) << " time_ms=" << elapsed << '\n';
  if (verify) std::cerr << "observed_max_err=" << max_abs_difference(naive_multiply(a, b), res.product) << '\n';
  return 0;
}

int run_preproc(const Common& c) {
  const BitMatrix a = io::load_matrix(c.a_path);
  const BitMatrix b = io::load_matrix(c.b_path);
  if (a.cols() != b.rows()) throw DimensionError("inner dimensions differ");
  std::optional<PreprocState> state;
  if (c.randomized) {
    require(c.ell.has_value(), "--ell", "randomized preproc");
    require(c.k.has_value(), "--k", "randomized preproc");
    state.emplace(PreprocState::two_sided(a, b, *c.ell, *c.k, c.epsilon, c.seed));
  } else {
    const auto [centers, orientation] = c.one_sided(a, b, "preproc");
    state.emplace(PreprocState::one_sided(a, b, centers, orientation, c.first_for(a, b, orientation)));
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + c.out);
  state->save(out);
  std::cerr << "stats mode=" << (state->mode() == PreprocState::Mode::TwoSided ? "two_sided" : "one_sided")
            << " transposed=" << state->transposed() << " update_bound=" << state->update_bound() << '\n';
  return 0;
}

std::pair<std::size_t, std::size_t> parse_cell(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("cell must be 'i,j': " + text);
  try {
    return {std::stoull(text.substr(0, comma)), std::stoull(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ParseError("cell must be 'i,j': " + text);
  }
}

int run_query(const Common& c, const std::string& state_path, const std::vector<std::string>& cells_arg,
              const std::string& cells_file) {
  const BitMatrix a = io::load_matrix(c.a_path);
  const BitMatrix b = io::load_matrix(c.b_path);
  std::ifstream in(state_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + state_path);
  const PreprocState state = PreprocState::load(in, a, b);

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (const auto& text : cells_arg) cells.push_back(parse_cell(text));
  if (!cells_file.empty()) {
    std::ifstream list(cells_file);
    if (!list) throw std::runtime_error("cannot open " + cells_file);
    std::string line;
    while (std::getline(list, line))
      if (!line.empty()) cells.push_back(parse_cell(line));
  }
  const auto values = state.query_batch(cells);
  Output out(c.out);
  for (std::size_t t = 0; t < cells.size(); ++t) {
    out.stream() << cells[t].first << ',' << cells[t].second << ',' << values[t] << '\n';
  }
  return 0;
}

void apply_thread_limit(int threads) {
  if (const char* env = std::getenv("CLUSMAT_THREADS"); env != nullptr && *env != '\0') {
    threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"Clustered 0-1 matrix multiplication"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: all cores; CLUSMAT_THREADS overrides)");

  PlantedSpec spec;
  bool gen_columns = false;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a planted clustered matrix");
  gen->add_option("--rows", spec.rows, "Rows p")->required();
  gen->add_option("--cols", spec.cols, "Columns q")->required();
  gen->add_option("--clusters", spec.clusters, "Hidden centers")->required();
  gen->add_option("--radius", spec.radius, "Max flipped bits per row")->required();
  gen->add_option("--density", spec.density, "Density of 1s in centers");
  gen->add_option("--seed", spec.seed, "RNG seed");
  gen->add_flag("--columns", gen_columns, "Plant the structure in columns instead of rows");
  gen->add_option("--out", gen_out, "Output path (.bm or .bmb)")->required();

  std::string convert_in;
  std::string convert_out;
  auto* convert = app.add_subcommand("convert", "Convert between .bm and .bmb");
  convert->add_option("--in", convert_in)->required()->check(CLI::ExistingFile);
  convert->add_option("--out", convert_out)->required();

  Common mul;
  std::string algo = "naive";
  std::string tree_path;
  auto* multiply = app.add_subcommand("multiply", "Exact product");
  mul.add_operands(multiply);
  mul.add_clustering(multiply);
  mul.add_randomized(multiply);
  multiply->add_option("--algo", algo)->check(CLI::IsMember({"naive", "st", "query"}));
  multiply->add_option("--tree", tree_path, "Parent list of a spanning tree over rows of A (st only)")
      ->check(CLI::ExistingFile)
      ->group("");
  multiply->add_option("--out", mul.out, "Product CSV (default stdout)");

  Common apx;
  bool verify = false;
  auto* approx = app.add_subcommand("approx", "Approximate product with an additive error certificate");
  apx.add_operands(approx);
  apx.add_clustering(approx);
  apx.add_randomized(approx);
  approx->add_flag("--verify", verify, "Also compute the exact product and report the observed error");
  approx->add_option("--out", apx.out, "D as CSV (default stdout)");

  Common pre;
  auto* preproc = app.add_subcommand("preproc", "Preprocess operands for entry queries");
  pre.add_operands(preproc);
  pre.add_clustering(preproc);
  pre.add_randomized(preproc);
  preproc->add_option("--out", pre.out, "State file (.pps)")->required();

  Common qry;
  std::string state_path;
  std::vector<std::string> cells;
  std::string cells_file;
  auto* query = app.add_subcommand("query", "Answer exact entries from a preprocessed state");
  qry.add_operands(query);
  query->add_option("--state", state_path)->required()->check(CLI::ExistingFile);
  query->add_option("--cell", cells, "Entry as i,j (0-based); repeatable");
  query->add_option("--cells", cells_file, "File with one i,j per line")->check(CLI::ExistingFile);
  query->add_option("--out", qry.out, "Output (default stdout)");

  std::string config_path;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep and emit a CSV report");
  bench->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "Report CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  apply_thread_limit(threads);

  try {
    if (*gen) return run_gen(spec, gen_columns, gen_out);
    if (*convert) {
      io::save_matrix(convert_out, io::load_matrix(convert_in));
      return 0;
    }
    if (*multiply) return run_multiply(mul, algo, tree_path);
    if (*approx) return run_approx(apx, verify);
    if (*preproc) return run_preproc(pre);
    if (*query) return run_query(qry, state_path, cells, cells_file);
    if (*bench) {
      std::ifstream in(config_path);
      const auto cfg = tools::BenchConfig::parse(in);
      Output out(bench_out);
      tools::run_bench(cfg, out.stream());
      return 0;
    }
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
