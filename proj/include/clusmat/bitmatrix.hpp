#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "clusmat/errors.hpp"

namespace clusmat {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

/// Mask of the valid bits in the last word of a `bits`-long packed vector.
constexpr Word tail_mask(std::size_t bits) {
  const std::size_t rem = bits % kWordBits;
  return rem == 0 ? ~Word{0} : (Word{1} << rem) - 1;
}

/// Read-only view of one packed 0-1 vector. Bit h lives in word h/64 at position h%64.
class BitRow {
 public:
  BitRow() = default;
  BitRow(std::span<const Word> words, std::size_t len) : words_(words), len_(len) {}

  std::size_t size() const { return len_; }
  std::span<const Word> words() const { return words_; }
  bool operator[](std::size_t h) const { return (words_[h / kWordBits] >> (h % kWordBits)) & 1U; }

 private:
  std::span<const Word> words_;
  std::size_t len_ = 0;
};

/// Number of coordinates in which a and b differ.
std::size_t hamming(BitRow a, BitRow b);

/// Number of coordinates in which both a and b are 1.
std::size_t inner_product(BitRow a, BitRow b);

/// Dense row-major 0-1 matrix, rows packed into 64-bit words. Immutable once
/// built; padding bits past `cols()` are always zero.
class BitMatrix {
 public:
  BitMatrix() = default;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return stride_; }

  BitRow row(std::size_t i) const { return {std::span<const Word>(data_).subspan(i * stride_, stride_), cols_}; }
  bool operator()(std::size_t i, std::size_t j) const { return row(i)[j]; }

  /// Entire packed payload, rows concatenated.
  std::span<const Word> words() const { return data_; }

  bool operator==(const BitMatrix&) const = default;

  /// Matrix whose rows are the selected rows of `src`, in the given order.
  static BitMatrix gather_rows(const BitMatrix& src, std::span<const std::size_t> indices);

  /// Build from strings of '0'/'1'; all strings must have equal length.
  static BitMatrix from_strings(std::span<const std::string_view> rows);
  static BitMatrix from_strings(std::initializer_list<std::string_view> rows);

  /// Adopt packed words; padding bits are cleared.
  static BitMatrix from_words(std::size_t rows, std::size_t cols, std::vector<Word> words);

 private:
  friend class BitMatrixBuilder;
  BitMatrix(std::size_t rows, std::size_t cols, std::vector<Word> data)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(std::move(data)) {}

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

/// Mutable staging area for a BitMatrix. `build()` hands the storage over.
class BitMatrixBuilder {
 public:
  BitMatrixBuilder(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void set(std::size_t i, std::size_t j, bool value = true);
  void flip(std::size_t i, std::size_t j);
  bool get(std::size_t i, std::size_t j) const;
  void set_row(std::size_t i, BitRow src);
  std::span<Word> row_words(std::size_t i) { return std::span<Word>(data_).subspan(i * stride_, stride_); }

  BitMatrix build() &&;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t stride_;
  std::vector<Word> data_;
};

/// Dense row-major matrix of 32-bit counts; holds exact and approximate products.
class IntMatrix {
 public:
  using value_type = std::uint32_t;

  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  value_type operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<value_type> row(std::size_t i) { return std::span<value_type>(data_).subspan(i * cols_, cols_); }
  std::span<const value_type> row(std::size_t i) const {
    return std::span<const value_type>(data_).subspan(i * cols_, cols_);
  }
  std::span<const value_type> values() const { return data_; }
  std::span<value_type> values() { return data_; }

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

BitMatrix transpose(const BitMatrix& m);
IntMatrix transpose(const IntMatrix& m);

/// Schoolbook product over the integers: C(i,j) = <A_i*, B_*j>, computed as
/// AND-popcount against rows of a materialized B transpose. Rows of C are
/// distributed over OpenMP threads.
IntMatrix naive_multiply(const BitMatrix& a, const BitMatrix& b);

/// Same as naive_multiply but with B already transposed (bt = B^T).
IntMatrix naive_multiply_bt(const BitMatrix& a, const BitMatrix& bt);

/// Largest |x(i,j) - y(i,j)| over all entries.
std::uint32_t max_abs_difference(const IntMatrix& x, const IntMatrix& y);

namespace serial {
IntMatrix naive_multiply(const BitMatrix& a, const BitMatrix& b);
}  // namespace serial

}  // namespace clusmat
