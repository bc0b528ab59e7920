#include "clusmat/bitmatrix.hpp"

#include <algorithm>
#include <string>

namespace clusmat {

namespace {

void require_same_length(BitRow a, BitRow b) {
  if (a.size() != b.size()) {
    throw DimensionError("bit rows of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
}

void require_conformable(const BitMatrix& a, std::size_t b_rows, std::size_t b_cols) {
  if (a.cols() != b_rows) {
    throw DimensionError("cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " by " + std::to_string(b_rows) + "x" + std::to_string(b_cols));
  }
}

inline std::uint32_t and_popcount(const Word* x, const Word* y, std::size_t n) {
  std::uint32_t acc = 0;
  for (std::size_t w = 0; w < n; ++w) acc += static_cast<std::uint32_t>(std::popcount(x[w] & y[w]));
  return acc;
}

}  // namespace

std::size_t hamming(BitRow a, BitRow b) {
  require_same_length(a, b);
  std::size_t acc = 0;
  const auto x = a.words();
  const auto y = b.words();
  for (std::size_t w = 0; w < x.size(); ++w) acc += static_cast<std::size_t>(std::popcount(x[w] ^ y[w]));
  return acc;
}

std::size_t inner_product(BitRow a, BitRow b) {
  require_same_length(a, b);
  return and_popcount(a.words().data(), b.words().data(), a.words().size());
}

BitMatrix BitMatrix::gather_rows(const BitMatrix& src, std::span<const std::size_t> indices) {
  BitMatrixBuilder builder(indices.size(), src.cols());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= src.rows()) throw IndexError("row index " + std::to_string(indices[t]) + " out of range");
    builder.set_row(t, src.row(indices[t]));
  }
  return std::move(builder).build();
}

BitMatrix BitMatrix::from_strings(std::span<const std::string_view> rows) {
  if (rows.empty()) throw DimensionError("matrix must have at least one row");
  const std::size_t cols = rows.front().size();
  BitMatrixBuilder builder(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("ragged rows in matrix literal");
    for (std::size_t j = 0; j < cols; ++j) {
      const char c = rows[i][j];
      if (c != '0' && c != '1') throw ParseError(std::string("unexpected character '") + c + "'");
      if (c == '1') builder.set(i, j);
    }
  }
  return std::move(builder).build();
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
  return from_strings(std::span<const std::string_view>(rows.begin(), rows.size()));
}

BitMatrix BitMatrix::from_words(std::size_t rows, std::size_t cols, std::vector<Word> words) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  const std::size_t stride = words_for(cols);
  if (words.size() != rows * stride) throw DimensionError("packed payload has wrong word count");
  const Word mask = tail_mask(cols);
  for (std::size_t i = 0; i < rows; ++i) words[i * stride + stride - 1] &= mask;
  return BitMatrix(rows, cols, std::move(words));
}

BitMatrixBuilder::BitMatrixBuilder(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  data_.assign(rows * stride_, 0);
}

void BitMatrixBuilder::set(std::size_t i, std::size_t j, bool value) {
  Word& w = data_[i * stride_ + j / kWordBits];
  const Word bit = Word{1} << (j % kWordBits);
  w = value ? (w | bit) : (w & ~bit);
}

void BitMatrixBuilder::flip(std::size_t i, std::size_t j) {
  data_[i * stride_ + j / kWordBits] ^= Word{1} << (j % kWordBits);
}

bool BitMatrixBuilder::get(std::size_t i, std::size_t j) const {
  return (data_[i * stride_ + j / kWordBits] >> (j % kWordBits)) & 1U;
}

void BitMatrixBuilder::set_row(std::size_t i, BitRow src) {
  if (src.size() != cols_) throw DimensionError("row length does not match builder width");
  std::ranges::copy(src.words(), data_.begin() + static_cast<std::ptrdiff_t>(i * stride_));
}

BitMatrix BitMatrixBuilder::build() && {
  const Word mask = tail_mask(cols_);
  for (std::size_t i = 0; i < rows_; ++i) data_[i * stride_ + stride_ - 1] &= mask;
  return BitMatrix(rows_, cols_, std::move(data_));
}

BitMatrix transpose(const BitMatrix& m) {
  BitMatrixBuilder out(m.cols(), m.rows());
  // 64 source rows at a time so each destination word is assembled in a register.
  for (std::size_t i0 = 0; i0 < m.rows(); i0 += kWordBits) {
    const std::size_t i1 = std::min(m.rows(), i0 + kWordBits);
    const std::size_t dst_word = i0 / kWordBits;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Word acc = 0;
      for (std::size_t i = i0; i < i1; ++i) acc |= static_cast<Word>(m(i, j)) << (i - i0);
      out.row_words(j)[dst_word] = acc;
    }
  }
  return std::move(out).build();
}

IntMatrix transpose(const IntMatrix& m) {
  IntMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

IntMatrix naive_multiply_bt(const BitMatrix& a, const BitMatrix& bt) {
  require_conformable(a, bt.cols(), bt.rows());
  IntMatrix c(a.rows(), bt.rows());
  const std::size_t stride = a.words_per_row();
  const Word* aw = a.words().data();
  const Word* bw = bt.words().data();
  const auto p = static_cast<std::ptrdiff_t>(a.rows());
  const std::size_t r = bt.rows();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < p; ++i) {
    const Word* arow = aw + static_cast<std::size_t>(i) * stride;
    auto out = c.row(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < r; ++j) out[j] = and_popcount(arow, bw + j * stride, stride);
  }
  return c;
}

IntMatrix naive_multiply(const BitMatrix& a, const BitMatrix& b) {
  require_conformable(a, b.rows(), b.cols());
  return naive_multiply_bt(a, transpose(b));
}

std::uint32_t max_abs_difference(const IntMatrix& x, const IntMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("matrices differ in shape");
  std::uint32_t worst = 0;
  const auto xs = x.values();
  const auto ys = y.values();
  for (std::size_t t = 0; t < xs.size(); ++t) worst = std::max(worst, xs[t] > ys[t] ? xs[t] - ys[t] : ys[t] - xs[t]);
  return worst;
}

namespace serial {

IntMatrix naive_multiply(const BitMatrix& a, const BitMatrix& b) {
  require_conformable(a, b.rows(), b.cols());
  const BitMatrix bt = transpose(b);
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      c(i, j) = and_popcount(a.row(i).words().data(), bt.row(j).words().data(), a.words_per_row());
  return c;
}

}  // namespace serial

}  // namespace clusmat
