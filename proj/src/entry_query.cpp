#include "clusmat/entry_query.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "clusmat/io.hpp"

namespace clusmat {

IndexSets IndexSets::differences(const BitMatrix& points, const BitMatrix& centers,
                                 std::span<const std::uint32_t> label) {
  if (points.cols() != centers.cols()) throw DimensionError("points and centers differ in dimension");
  if (label.size() != points.rows()) throw DimensionError("one label per point required");
  IndexSets out;
  out.offsets_.reserve(points.rows() + 1);
  out.offsets_.push_back(0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto x = points.row(i).words();
    const auto c = centers.row(label[i]).words();
    for (std::size_t w = 0; w < x.size(); ++w) {
      for (Word diff = x[w] ^ c[w]; diff != 0; diff &= diff - 1) {
        out.indices_.push_back(static_cast<std::uint32_t>(w * kWordBits + std::countr_zero(diff)));
      }
    }
    out.offsets_.push_back(out.indices_.size());
  }
  return out;
}

void IndexSets::write(std::ostream& out) const {
  io::put_u64(out, size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto set = (*this)[i];
    io::put_u32(out, static_cast<std::uint32_t>(set.size()));
    for (const std::uint32_t m : set) io::put_u32(out, m);
  }
}

IndexSets IndexSets::read(std::istream& in) {
  IndexSets out;
  const std::uint64_t n = io::get_u64(in);
  out.offsets_.reserve(n + 1);
  out.offsets_.push_back(0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t len = io::get_u32(in);
    for (std::uint32_t t = 0; t < len; ++t) {
      const std::uint32_t m = io::get_u32(in);
      if (t > 0 && m <= out.indices_.back()) throw ParseError("index set not strictly increasing");
      out.indices_.push_back(m);
    }
    out.offsets_.push_back(out.indices_.size());
  }
  return out;
}

PreprocState PreprocState::one_sided(const BitMatrix& a, const BitMatrix& b, std::size_t centers,
                                     Orientation orientation, std::size_t first) {
  ApproxResult approx = mmclus_approx(a, b, centers, orientation, first);

  PreprocState s;
  s.mode_ = Mode::OneSided;
  s.digest_a_ = io::digest(a);
  s.digest_b_ = io::digest(b);
  s.transposed_ = approx.side == ClusteredSide::ColumnsOfB;
  Clustering clustering;
  if (s.transposed_) {
    s.left_ = transpose(b);
    s.right_t_ = a;
    s.d_ = transpose(approx.product);
    clustering = std::move(*approx.columns);
  } else {
    s.left_ = a;
    s.right_t_ = transpose(b);
    s.d_ = std::move(approx.product);
    clustering = std::move(*approx.rows);
  }
  s.left_centers_ = BitMatrix::gather_rows(s.left_, clustering.centers);
  s.left_label_ = std::move(clustering.assignment);
  s.left_ind_ = IndexSets::differences(s.left_, s.left_centers_, s.left_label_);
  s.left_radius_ = clustering.radius;
  return s;
}

PreprocState PreprocState::two_sided(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k,
                                     double epsilon, std::uint64_t seed) {
  ApproxResult approx = mmclus_r_approx(a, b, ell, k, epsilon, seed);

  PreprocState s;
  s.mode_ = Mode::TwoSided;
  s.epsilon_ = epsilon;
  s.seed_ = seed;
  s.digest_a_ = io::digest(a);
  s.digest_b_ = io::digest(b);
  s.left_ = a;
  s.right_t_ = transpose(b);
  s.d_ = std::move(approx.product);

  s.left_centers_ = BitMatrix::gather_rows(s.left_, approx.rows->centers);
  s.left_label_ = std::move(approx.rows->assignment);
  s.left_ind_ = IndexSets::differences(s.left_, s.left_centers_, s.left_label_);
  s.left_radius_ = approx.rows->radius;

  s.right_centers_ = BitMatrix::gather_rows(s.right_t_, approx.columns->centers);
  s.right_label_ = std::move(approx.columns->assignment);
  s.right_ind_ = IndexSets::differences(s.right_t_, s.right_centers_, s.right_label_);
  s.right_radius_ = approx.columns->radius;
  return s;
}

IntMatrix PreprocState::approximation() const { return transposed_ ? transpose(d_) : d_; }

QueryResult PreprocState::query_counted(std::size_t i, std::size_t j) const {
  if (i >= rows() || j >= cols()) {
    throw IndexError("query (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                     std::to_string(rows()) + "x" + std::to_string(cols()));
  }
  const std::size_t u = transposed_ ? j : i;
  const std::size_t v = transposed_ ? i : j;

  const BitRow row = left_.row(u);
  const BitRow column = right_t_.row(v);
  std::int64_t value = d_(u, v);
  QueryResult result;

  if (mode_ == Mode::TwoSided) {
    // <center_u, center_v> -> <center_u, column>
    const BitRow row_center = left_centers_.row(left_label_[u]);
    for (const std::uint32_t m : right_ind_[v]) {
      if (row_center[m]) value += column[m] ? 1 : -1;
    }
    result.updates += right_ind_[v].size();
  }

  // <center_u, column> -> <row, column>; at m the row bit is the complement of the center bit.
  for (const std::uint32_t m : left_ind_[u]) {
    if (column[m]) value += row[m] ? 1 : -1;
  }
  result.updates += left_ind_[u].size();
  result.value = static_cast<std::uint32_t>(value);
  return result;
}

std::vector<std::uint32_t> PreprocState::query_batch(std::span<const std::pair<std::size_t, std::size_t>> cells) const {
  // Throwing out of a parallel region terminates, so check bounds first.
  for (const auto& [i, j] : cells) {
    if (i >= rows() || j >= cols()) {
      throw IndexError("query (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                       std::to_string(rows()) + "x" + std::to_string(cols()));
    }
  }
  std::vector<std::uint32_t> out(cells.size());
  const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const auto& [i, j] = cells[static_cast<std::size_t>(t)];
    out[static_cast<std::size_t>(t)] = query(i, j);
  }
  return out;
}

SweepResult PreprocState::sweep() const {
  SweepResult out;
  out.product = IntMatrix(rows(), cols());
  const auto p = static_cast<std::ptrdiff_t>(rows());
  const std::size_t r = cols();
  std::size_t max_updates = 0;
  std::size_t total_updates = 0;
#pragma omp parallel for schedule(static) reduction(max : max_updates) reduction(+ : total_updates)
  for (std::ptrdiff_t si = 0; si < p; ++si) {
    const auto i = static_cast<std::size_t>(si);
    auto dst = out.product.row(i);
    for (std::size_t j = 0; j < r; ++j) {
      const QueryResult q = query_counted(i, j);
      dst[j] = q.value;
      max_updates = std::max(max_updates, q.updates);
      total_updates += q.updates;
    }
  }
  out.max_updates = max_updates;
  out.total_updates = total_updates;
  return out;
}

namespace {

constexpr std::array<char, 4> kStateMagic = {'P', 'P', 'S', '1'};

void write_labels(std::ostream& out, const std::vector<std::uint32_t>& labels) {
  io::put_u64(out, labels.size());
  for (const std::uint32_t v : labels) io::put_u32(out, v);
}

std::vector<std::uint32_t> read_labels(std::istream& in, std::size_t expected, std::size_t bound) {
  const std::uint64_t n = io::get_u64(in);
  if (n != expected) throw ParseError("label array has wrong length");
  std::vector<std::uint32_t> labels(n);
  for (auto& v : labels) {
    v = io::get_u32(in);
    if (v >= bound) throw ParseError("label out of range");
  }
  return labels;
}

}  // namespace

void PreprocState::save(std::ostream& out) const {
  out.write(kStateMagic.data(), kStateMagic.size());
  io::put_u32(out, static_cast<std::uint32_t>(mode_));
  io::put_u32(out, transposed_ ? 1U : 0U);
  io::put_u64(out, digest_a_);
  io::put_u64(out, digest_b_);
  io::put_u64(out, std::bit_cast<std::uint64_t>(epsilon_));
  io::put_u64(out, seed_);
  io::put_u64(out, left_radius_);
  io::put_u64(out, right_radius_);

  io::put_u64(out, d_.rows());
  io::put_u64(out, d_.cols());
  for (const std::uint32_t v : d_.values()) io::put_u32(out, v);

  io::write_bmb(out, left_centers_);
  write_labels(out, left_label_);
  left_ind_.write(out);
  if (mode_ == Mode::TwoSided) {
    io::write_bmb(out, right_centers_);
    write_labels(out, right_label_);
    right_ind_.write(out);
  }
}

PreprocState PreprocState::load(std::istream& in, const BitMatrix& a, const BitMatrix& b) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kStateMagic) throw ParseError("bad .pps magic");

  PreprocState s;
  const std::uint32_t mode = io::get_u32(in);
  if (mode > 1) throw ParseError("unknown preprocessing mode");
  s.mode_ = static_cast<Mode>(mode);
  s.transposed_ = io::get_u32(in) != 0;
  s.digest_a_ = io::get_u64(in);
  s.digest_b_ = io::get_u64(in);
  if (s.digest_a_ != io::digest(a) || s.digest_b_ != io::digest(b)) {
    throw ContractError("state was built for different matrices");
  }
  s.epsilon_ = std::bit_cast<double>(io::get_u64(in));
  s.seed_ = io::get_u64(in);
  s.left_radius_ = io::get_u64(in);
  s.right_radius_ = io::get_u64(in);

  s.left_ = s.transposed_ ? transpose(b) : a;
  s.right_t_ = s.transposed_ ? a : transpose(b);

  const std::uint64_t d_rows = io::get_u64(in);
  const std::uint64_t d_cols = io::get_u64(in);
  if (d_rows != s.left_.rows() || d_cols != s.right_t_.rows()) throw ParseError("stored D has wrong shape");
  s.d_ = IntMatrix(d_rows, d_cols);
  for (auto& v : s.d_.values()) v = io::get_u32(in);

  s.left_centers_ = io::read_bmb(in);
  if (s.left_centers_.cols() != s.left_.cols()) throw ParseError("center width mismatch");
  s.left_label_ = read_labels(in, s.left_.rows(), s.left_centers_.rows());
  s.left_ind_ = IndexSets::read(in);
  if (s.left_ind_.size() != s.left_.rows()) throw ParseError("index sets do not cover every row");
  if (s.mode_ == Mode::TwoSided) {
    s.right_centers_ = io::read_bmb(in);
    if (s.right_centers_.cols() != s.right_t_.cols()) throw ParseError("center width mismatch");
    s.right_label_ = read_labels(in, s.right_t_.rows(), s.right_centers_.rows());
    s.right_ind_ = IndexSets::read(in);
    if (s.right_ind_.size() != s.right_t_.rows()) throw ParseError("index sets do not cover every column");
  }
  return s;
}

IntMatrix exact_via_queries(const BitMatrix& a, const BitMatrix& b, std::size_t centers) {
  return PreprocState::one_sided(a, b, centers).sweep().product;
}

IntMatrix exact_via_queries_randomized(const BitMatrix& a, const BitMatrix& b, std::size_t ell, std::size_t k,
                                       double epsilon, std::uint64_t seed) {
  return PreprocState::two_sided(a, b, ell, k, epsilon, seed).sweep().product;
}

}  // namespace clusmat
