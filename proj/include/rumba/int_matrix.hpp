#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace rumba {

using IntVector = std::vector<std::int64_t>;

/// Dense integer matrix, row-major, 64-bit entries. All arithmetic helpers
/// that operate on it are overflow-checked.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> entries);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows);
  /// Builds an M x K matrix whose columns are the given vectors (all of length M).
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const std::int64_t> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  IntVector column(std::size_t c) const;
  const std::vector<std::int64_t>& entries() const noexcept { return entries_; }

  IntMatrix transpose() const;
  /// Copies `block` into this matrix with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const IntMatrix& block);

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> entries_;
};

/// Rank over Q by fraction-free (Bareiss) elimination.
std::size_t rank(const IntMatrix& a);

/// Exact determinant of a square matrix (Bareiss).
std::int64_t determinant(const IntMatrix& a);

IntVector mat_vec(const IntMatrix& a, std::span<const std::int64_t> x);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);

bool is_zero(std::span<const std::int64_t> v);
bool is_nonnegative(std::span<const std::int64_t> v);

}  // namespace rumba
