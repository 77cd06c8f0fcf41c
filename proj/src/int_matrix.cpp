#include "rumba/int_matrix.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "rumba/checked.hpp"
#include "rumba/error.hpp"

namespace rumba {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw InputError("matrix entry count " + std::to_string(entries_.size()) +
                     " does not match " + std::to_string(rows_) + "x" +
                     std::to_string(cols_));
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(
    std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<std::int64_t> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw InputError("ragged matrix literal");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return IntMatrix(r, c, std::move(entries));
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVector>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw InputError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

void IntMatrix::set_block(std::size_t r0, std::size_t c0, const IntMatrix& block) {
  if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_)
    throw InputError("block does not fit");
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c) (*this)(r0 + r, c0 + c) = block(r, c);
}

namespace {

// One Bareiss sweep. Returns the rank and leaves `det_sign` holding the sign
// flips from row swaps; the last pivot is the determinant for square input.
struct BareissResult {
  std::size_t rank = 0;
  int sign = 1;
  std::int64_t last_pivot = 1;
};

BareissResult bareiss(IntMatrix m, const char* op) {
  BareissResult res;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::int64_t prev = 1;
  std::size_t pr = 0;
  for (std::size_t c = 0; c < cols && pr < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = pr; r < rows; ++r)
      if (m(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    if (piv != pr) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(m(piv, k), m(pr, k));
      res.sign = -res.sign;
    }
    const std::int64_t p = m(pr, c);
    for (std::size_t r = pr + 1; r < rows; ++r) {
      const std::int64_t f = m(r, c);
      for (std::size_t k = c + 1; k < cols; ++k) {
        const __int128 num = static_cast<__int128>(m(r, k)) * p -
                             static_cast<__int128>(f) * m(pr, k);
        const __int128 q = num / prev;
        if (q > INT64_MAX || q < INT64_MIN)
          throw OverflowError(std::string("integer overflow in ") + op +
                              " (elimination column " + std::to_string(c) + ")");
        m(r, k) = static_cast<std::int64_t>(q);
      }
      m(r, c) = 0;
    }
    prev = p;
    res.last_pivot = p;
    ++pr;
  }
  res.rank = pr;
  return res;
}

}  // namespace

std::size_t rank(const IntMatrix& a) {
  if (a.empty()) throw InputError("rank of an empty matrix");
  return bareiss(a, "rank").rank;
}

std::int64_t determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("determinant of a non-square matrix");
  if (a.rows() == 0) return 1;
  const auto res = bareiss(a, "determinant");
  if (res.rank < a.rows()) return 0;
  return res.sign * res.last_pivot;
}

IntVector mat_vec(const IntMatrix& a, std::span<const std::int64_t> x) {
  if (x.size() != a.cols())
    throw InputError("mat_vec dimension mismatch: matrix has " + std::to_string(a.cols()) +
                     " columns, vector has " + std::to_string(x.size()) + " entries");
  IntVector y(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::int64_t acc = 0;
    const auto row = a.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0 && x[c] != 0) acc = checked::fma(acc, row[c], x[c], "mat_vec");
    y[r] = acc;
  }
  return y;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("mat_mul dimension mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::int64_t aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) = checked::fma(c(i, j), aik, b(k, j), "mat_mul");
    }
  return c;
}

bool is_zero(std::span<const std::int64_t> v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t e) { return e == 0; });
}

bool is_nonnegative(std::span<const std::int64_t> v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t e) { return e >= 0; });
}

}  // namespace rumba
