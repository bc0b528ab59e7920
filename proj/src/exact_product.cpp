#include "clusmat/exact_product.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <string>

namespace clusmat {

namespace {

constexpr std::size_t kColumnBlock = 256;
constexpr std::size_t kByteChunk = 127;

void check_operands(const BitMatrix& a, const BitMatrix& b, const SpanningTree& tree) {
  if (a.cols() != b.rows()) {
    throw DimensionError("cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  if (tree.size() != a.rows()) throw ContractError("tree does not span the rows of A");
}

// GCC/Clang vector extension: a kColumnBlock-byte slice is kLanes registers.
using ByteLane = std::int8_t __attribute__((vector_size(32)));
constexpr std::size_t kLanes = kColumnBlock / sizeof(ByteLane);

// Byte i of kSpread[x] is bit i of x.
constexpr std::array<std::uint64_t, 256> kSpread = [] {
  std::array<std::uint64_t, 256> t{};
  for (std::size_t x = 0; x < 256; ++x)
    for (std::size_t i = 0; i < 8; ++i) t[x] |= static_cast<std::uint64_t>((x >> i) & 1U) << (8 * i);
  return t;
}();

// Columns [j0, j0 + kColumnBlock) of B, one byte per entry; columns past r read as 0.
void expand_block(const BitMatrix& b, std::size_t j0, ByteLane* out) {
  const std::size_t w0 = j0 / kWordBits;
  for (std::size_t h = 0; h < b.rows(); ++h) {
    const auto words = b.row(h).words();
    auto* dst = reinterpret_cast<unsigned char*>(out + h * kLanes);
    for (std::size_t w = 0; w < kColumnBlock / kWordBits; ++w) {
      const Word bits = w0 + w < words.size() ? words[w0 + w] : 0;
      for (std::size_t i = 0; i < 8; ++i) {
        const std::uint64_t spread = kSpread[(bits >> (8 * i)) & 0xff];
        std::memcpy(dst + w * kWordBits + 8 * i, &spread, sizeof spread);
      }
    }
  }
}

}  // namespace

TreeProduct mmclus_st(const BitMatrix& a, const BitMatrix& b, const SpanningTree& tree) {
  check_operands(a, b, tree);
  const Traversal walk = traverse(a, tree);

  // Rows in the order the walk first reaches them; each is derived from its parent.
  std::vector<std::size_t> discovery;
  discovery.reserve(a.rows());
  for (const auto& step : walk.steps)
    if (!step.revisit) discovery.push_back(step.to);

  const std::size_t q = a.cols();
  const std::size_t r = b.cols();
  const std::size_t root = tree.root();
  TreeProduct out;
  out.product = IntMatrix(a.rows(), r);
  const auto blocks = static_cast<std::ptrdiff_t>((r + kColumnBlock - 1) / kColumnBlock);

#pragma omp parallel
  {
    std::vector<ByteLane> expanded(q * kLanes);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
      const std::size_t j0 = static_cast<std::size_t>(blk) * kColumnBlock;
      const std::size_t width = std::min(kColumnBlock, r - j0);
      expand_block(b, j0, expanded.data());

      std::uint32_t* root_out = out.product.row(root).data() + j0;
      std::fill_n(root_out, width, 0U);
      const auto root_words = a.row(root).words();
      for (std::size_t w = 0; w < root_words.size(); ++w) {
        for (Word bits = root_words[w]; bits != 0; bits &= bits - 1) {
          const auto* e = reinterpret_cast<const std::uint8_t*>(
              expanded.data() + (w * kWordBits + std::countr_zero(bits)) * kLanes);
          for (std::size_t t = 0; t < width; ++t) root_out[t] += e[t];
        }
      }

      // Corrections are summed in byte lanes held in registers, then widened while
      // adding the parent's slice. A byte holds any sum of up to 127 terms of +-1.
      for (const std::size_t v : discovery) {
        const std::uint32_t* base = out.product.row(tree.parent(v)).data() + j0;
        std::uint32_t* dst = out.product.row(v).data() + j0;
        const BitRow row = a.row(v);
        const auto diff = walk.diff[v];
        std::size_t c0 = 0;
        do {
          const std::size_t c1 = std::min(diff.size(), c0 + kByteChunk);
          ByteLane acc[kLanes] = {};
          for (std::size_t c = c0; c < c1; ++c) {
            const std::uint32_t h = diff[c];
            const ByteLane* e = expanded.data() + static_cast<std::size_t>(h) * kLanes;
            if (row[h]) {
              for (std::size_t l = 0; l < kLanes; ++l) acc[l] += e[l];
            } else {
              for (std::size_t l = 0; l < kLanes; ++l) acc[l] -= e[l];
            }
          }
          const auto* bytes = reinterpret_cast<const std::int8_t*>(acc);
          for (std::size_t t = 0; t < width; ++t) dst[t] = base[t] + static_cast<std::uint32_t>(std::int32_t{bytes[t]});
          base = dst;
          c0 = c1;
        } while (c0 < diff.size());
      }
    }
  }

  out.max_column_updates = tree.ham_cost();
  out.delta_updates = r * tree.ham_cost();
  return out;
}

ExactResult exact_clustered(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k,
                            Orientation orientation, std::size_t first_row, std::size_t first_col) {
  if (a.cols() != b.rows()) throw DimensionError("inner dimensions differ");
  if (ell == 0 || ell > a.rows()) throw ParameterError("ell must lie in [1, p]");
  if (k == 0 || k > b.cols()) throw ParameterError("k must lie in [1, r]");

  const BitMatrix bt = transpose(b);
  ExactResult out;
  out.rows = gonzalez(a, ell, first_row);
  out.columns = gonzalez(bt, k, first_col);
  const SpanningTree row_tree = build_cluster_spanning_tree(a, out.rows);
  const SpanningTree col_tree = build_cluster_spanning_tree(bt, out.columns);
  out.row_tree_cost = row_tree.ham_cost();
  out.column_tree_cost = col_tree.ham_cost();

  if (orientation == Orientation::Auto) {
    const std::size_t row_work = b.cols() * row_tree.ham_cost();
    const std::size_t col_work = a.rows() * col_tree.ham_cost();
    orientation = row_work <= col_work ? Orientation::Rows : Orientation::Columns;
  }

  TreeProduct tp;
  if (orientation == Orientation::Rows) {
    tp = mmclus_st(a, b, row_tree);
    out.product = std::move(tp.product);
    out.side = ClusteredSide::RowsOfA;
  } else {
    tp = mmclus_st(bt, transpose(a), col_tree);
    out.product = transpose(tp.product);
    out.side = ClusteredSide::ColumnsOfB;
  }
  out.delta_updates = tp.delta_updates;
  out.max_column_updates = tp.max_column_updates;
  return out;
}

namespace serial {

TreeProduct mmclus_st(const BitMatrix& a, const BitMatrix& b, const SpanningTree& tree) {
  check_operands(a, b, tree);
  const Traversal walk = traverse(a, tree);
  const BitMatrix bt = transpose(b);
  const std::size_t p = a.rows();

  TreeProduct out;
  out.product = IntMatrix(p, b.cols());
  std::vector<std::int64_t> column(p);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const BitRow bj = bt.row(j);
    const std::size_t s = walk.order.front();
    column[s] = static_cast<std::int64_t>(inner_product(a.row(s), bj));
    std::size_t updates = 0;
    for (const auto& step : walk.steps) {
      const std::size_t m = step.from;
      const std::size_t i = step.to;
      column[i] = column[m];
      for (const std::uint32_t h : walk.diff[step.edge]) {
        if (a(i, h) && bj[h]) ++column[i];
        if (a(m, h) && bj[h]) --column[i];
      }
      updates += walk.diff[step.edge].size();
    }
    for (std::size_t i = 0; i < p; ++i) out.product(i, j) = static_cast<std::uint32_t>(column[i]);
    out.delta_updates += updates;
    out.max_column_updates = std::max(out.max_column_updates, updates);
  }
  return out;
}

}  // namespace serial

}  // namespace clusmat
