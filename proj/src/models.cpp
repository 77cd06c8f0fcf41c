#include "rumba/models.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "rumba/checked.hpp"
#include "rumba/error.hpp"
#include "rumba/random.hpp"

namespace rumba::models {

void ModelInstance::validate() const {
  if (x0.size() != A.cols() || u.size() != A.rows())
    throw InputError(label + ": dimension mismatch between A, u and x0");
  if (!is_nonnegative(x0)) throw InputError(label + ": x0 has negative entries");
  if (mat_vec(A, x0) != u) throw InputError(label + ": A*x0 != u");
  if (structured_basis) check_kernel(A, structured_basis->matrix());
}

IntMatrix independence_matrix(std::size_t rows, std::size_t cols) {
  IntMatrix a(rows + cols, rows * cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      a(i, j * rows + i) = 1;
      a(rows + j, j * rows + i) = 1;
    }
  return a;
}

ModelInstance independence_model(const IntMatrix& table) {
  if (table.empty()) throw InputError("independence model needs a nonempty table");
  if (!is_nonnegative(table.entries()))
    throw InputError("independence model table has negative entries");
  const std::size_t r = table.rows();
  const std::size_t c = table.cols();
  ModelInstance m;
  m.A = independence_matrix(r, c);
  m.x0.resize(r * c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) m.x0[j * r + i] = table(i, j);
  m.u = mat_vec(m.A, m.x0);
  m.label = "independence " + std::to_string(r) + "x" + std::to_string(c);
  return m;
}

IntMatrix ds98_table() {
  return IntMatrix::from_rows({
      {68, 119, 26, 7},
      {20, 84, 17, 94},
      {15, 54, 14, 10},
      {5, 29, 14, 16},
  });
}

ModelInstance ds98_model() {
  ModelInstance m = independence_model(ds98_table());
  m.label = "ds98";
  return m;
}

std::int64_t ThreeWayTable::total() const {
  std::int64_t s = 0;
  for (auto v : cells) s = checked::add(s, v, "table total");
  return s;
}

IntMatrix two_factor_matrix(std::size_t q) {
  if (q == 0) throw InputError("Q must be positive");
  IntMatrix a(2 * q, q * q);
  for (std::size_t b = 0; b < q; ++b)
    for (std::size_t c = 0; c < q; ++c) {
      a(b, b * q + c) = 1;
      a(q + c, b * q + c) = 1;
    }
  return a;
}

IntMatrix no3way_matrix(std::size_t q) {
  const IntMatrix star = two_factor_matrix(q);
  const std::size_t q2 = q * q;
  IntMatrix a(3 * q2, q * q2);
  const IntMatrix eye = IntMatrix::identity(q2);
  for (std::size_t blk = 0; blk < q; ++blk) {
    a.set_block(blk * 2 * q, blk * q2, star);
    a.set_block(2 * q2, blk * q2, eye);
  }
  return a;
}

IntMatrix no3way_structured_basis(std::size_t q) {
  const IntMatrix star = kernel_lattice_basis(two_factor_matrix(q)).matrix();
  const std::size_t q2 = q * q;
  const std::size_t ks = star.cols();
  IntMatrix neg(star.rows(), ks);
  for (std::size_t r = 0; r < star.rows(); ++r)
    for (std::size_t c = 0; c < ks; ++c) neg(r, c) = -star(r, c);
  IntMatrix b(q * q2, (q - 1) * ks);
  for (std::size_t blk = 0; blk + 1 < q; ++blk) {
    b.set_block(blk * q2, blk * ks, star);
    b.set_block((q - 1) * q2, blk * ks, neg);
  }
  return b;
}

ModelInstance no3way_model(const ThreeWayTable& table) {
  const std::size_t q = table.q;
  if (q == 0 || table.cells.size() != q * q * q)
    throw InputError("no3way table must hold Q^3 cells");
  if (!is_nonnegative(table.cells)) throw InputError("no3way table has negative entries");
  ModelInstance m;
  m.A = no3way_matrix(q);
  m.x0 = table.cells;
  m.u = mat_vec(m.A, m.x0);
  m.structured_basis = LatticeBasis::user_supplied(m.A, no3way_structured_basis(q));
  m.label = "no3way Q=" + std::to_string(q);
  return m;
}

ThreeWayTable sparse_table(std::size_t q, double sparsity, std::uint64_t seed) {
  if (q == 0) throw InputError("Q must be positive");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw InputError("sparsity must lie in (0, 1]");
  const std::size_t cells = q * q * q;
  const auto support_size = static_cast<std::size_t>(std::llround(sparsity * cells));
  if (support_size == 0) throw InputError("sparsity leaves an empty support");

  Rng rng(seed);
  std::vector<std::size_t> order(cells);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first support_size entries are the support.
  for (std::size_t i = 0; i < support_size; ++i) {
    const std::size_t j = i + rng.below(cells - i);
    std::swap(order[i], order[j]);
  }
  ThreeWayTable t{q, IntVector(cells, 0)};
  const std::size_t draws = 5 * cells;
  for (std::size_t n = 0; n < draws; ++n) ++t.cells[order[rng.below(support_size)]];
  return t;
}

IntMatrix ak_matrix(std::size_t k) {
  if (k == 0) throw InputError("k must be at least 1");
  IntMatrix a(2 * k + 1, 4 * k + 2);
  for (std::size_t i = 0; i < k; ++i) {
    a(i, i) = 1;
    a(i, k + i) = 1;
    a(i, 4 * k) = -1;
    a(k + i, 2 * k + i) = 1;
    a(k + i, 3 * k + i) = 1;
    a(k + i, 4 * k + 1) = -1;
  }
  for (std::size_t c = 4 * k; c < 4 * k + 2; ++c) a(2 * k, c) = 1;
  return a;
}

IntVector ak_x0(std::size_t k) {
  IntVector x(4 * k + 2, 0);
  for (std::size_t i = k; i < 2 * k; ++i) x[i] = 1;
  x[4 * k] = 1;
  return x;
}

IntVector ak_x1(std::size_t k) {
  IntVector x(4 * k + 2, 0);
  for (std::size_t i = 3 * k; i < 4 * k; ++i) x[i] = 1;
  x[4 * k + 1] = 1;
  return x;
}

IntVector ak_bridge_move(std::size_t k) {
  const IntVector x0 = ak_x0(k);
  const IntVector x1 = ak_x1(k);
  IntVector b(x0.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = x1[i] - x0[i];
  return b;
}

ModelInstance ak_model(std::size_t k, bool start_in_second_segment) {
  ModelInstance m;
  m.A = ak_matrix(k);
  m.u.assign(2 * k + 1, 0);
  m.u.back() = 1;
  m.x0 = start_in_second_segment ? ak_x1(k) : ak_x0(k);
  m.label = "ak k=" + std::to_string(k);
  return m;
}

std::uint64_t ak_fiber_size(std::size_t k) {
  if (k == 0) throw InputError("k must be at least 1");
  if (k + 1 >= 64) throw InputError("2^(k+1) does not fit in 64 bits for k = " + std::to_string(k));
  return std::uint64_t{1} << (k + 1);
}

}  // namespace rumba::models
