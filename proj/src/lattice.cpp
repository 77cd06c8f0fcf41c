#include "rumba/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "rumba/checked.hpp"
#include "rumba/error.hpp"

namespace rumba {

namespace {

std::int64_t abs_checked(std::int64_t v) {
  return v < 0 ? checked::neg(v, "hermite_normal_form") : v;
}

void swap_columns(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, a), m(r, b));
}

void negate_column(IntMatrix& m, std::size_t c, const std::string& op) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = checked::neg(m(r, c), op);
}

// col[dst] -= q * col[src]
void axpy_column(IntMatrix& m, std::size_t dst, std::size_t src, std::int64_t q,
                 const std::string& op) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (m(r, src) != 0)
      m(r, dst) = checked::sub(m(r, dst), checked::mul(q, m(r, src), op), op);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t max_norm(const IntVector& v) {
  std::int64_t m = 0;
  for (auto e : v) m = std::max(m, abs_checked(e));
  return m;
}

void size_reduce(std::vector<IntVector>& cols) {
  for (std::size_t c = 1; c < cols.size(); ++c) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t d = 0; d < c; ++d) {
        long double dot = 0, nn = 0;
        for (std::size_t r = 0; r < cols[c].size(); ++r) {
          dot += static_cast<long double>(cols[c][r]) * cols[d][r];
          nn += static_cast<long double>(cols[d][r]) * cols[d][r];
        }
        const auto q = static_cast<std::int64_t>(std::llround(dot / nn));
        if (q == 0) continue;
        IntVector cand(cols[c].size());
        for (std::size_t r = 0; r < cand.size(); ++r)
          cand[r] = checked::sub(cols[c][r], checked::mul(q, cols[d][r], "size_reduce"),
                                 "size_reduce");
        if (max_norm(cand) < max_norm(cols[c])) {
          cols[c] = std::move(cand);
          improved = true;
        }
      }
    }
  }
}

}  // namespace

HermiteForm hermite_normal_form(const IntMatrix& a) {
  if (a.empty()) throw InputError("hermite_normal_form of an empty matrix");
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  IntMatrix h = a;
  IntMatrix u = IntMatrix::identity(m);
  std::size_t p = 0;  // next pivot column

  for (std::size_t i = 0; i < n && p < m; ++i) {
    const std::string op = "hermite_normal_form (row " + std::to_string(i) + ")";
    // Euclid on row i across columns p..m-1.
    for (;;) {
      std::size_t best = m;
      std::int64_t best_abs = 0;
      for (std::size_t c = p; c < m; ++c) {
        if (h(i, c) == 0) continue;
        const std::int64_t av = abs_checked(h(i, c));
        if (best == m || av < best_abs) {
          best = c;
          best_abs = av;
        }
      }
      if (best == m) break;  // row is zero from p on
      swap_columns(h, p, best);
      swap_columns(u, p, best);
      bool others = false;
      for (std::size_t c = p + 1; c < m; ++c) {
        if (h(i, c) == 0) continue;
        const std::int64_t q = h(i, c) / h(i, p);
        axpy_column(h, c, p, q, op);
        axpy_column(u, c, p, q, op);
        if (h(i, c) != 0) others = true;
      }
      if (!others) break;
    }
    if (h(i, p) == 0) continue;
    if (h(i, p) < 0) {
      negate_column(h, p, op);
      negate_column(u, p, op);
    }
    const std::int64_t piv = h(i, p);
    for (std::size_t c = 0; c < p; ++c) {
      const std::int64_t q = floor_div(h(i, c), piv);
      if (q == 0) continue;
      axpy_column(h, c, p, q, op);
      axpy_column(u, c, p, q, op);
    }
    ++p;
  }
  return HermiteForm{std::move(h), std::move(u), p};
}

void check_kernel(const IntMatrix& a, const IntMatrix& basis) {
  if (basis.cols() == 0) return;
  if (basis.rows() != a.cols())
    throw InputError("basis has " + std::to_string(basis.rows()) + " rows but A has " +
                     std::to_string(a.cols()) + " columns");
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    const IntVector col = basis.column(c);
    if (is_zero(col)) throw InputError("basis column " + std::to_string(c) + " is zero");
    if (!is_zero(mat_vec(a, col)))
      throw InputError("basis column " + std::to_string(c) + " is not in the kernel of A");
  }
}

LatticeBasis LatticeBasis::user_supplied(const IntMatrix& a, IntMatrix basis) {
  check_kernel(a, basis);
  return LatticeBasis(std::move(basis), BasisSource::UserSupplied);
}

LatticeBasis make_computed_basis(const IntMatrix& a, IntMatrix basis) {
  check_kernel(a, basis);
  return LatticeBasis(std::move(basis), BasisSource::ComputedKernel);
}

LatticeBasis kernel_lattice_basis(const IntMatrix& a, KernelOptions options) {
  const HermiteForm hnf = hermite_normal_form(a);
  std::vector<IntVector> cols;
  for (std::size_t c = hnf.rank; c < a.cols(); ++c) cols.push_back(hnf.U.column(c));
  if (options.size_reduce) size_reduce(cols);
  return make_computed_basis(a, IntMatrix::from_columns(a.cols(), cols));
}

}  // namespace rumba
