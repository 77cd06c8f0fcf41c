#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "rumba/int_matrix.hpp"
#include "rumba/lattice.hpp"

namespace rumba::models {

/// A problem instance: constraint matrix, right-hand side, one feasible
/// point and optionally a hand-built lattice basis.
struct ModelInstance {
  IntMatrix A;
  IntVector u;
  IntVector x0;
  std::optional<LatticeBasis> structured_basis;
  std::string label;

  /// Throws InputError unless A*x0 = u, x0 >= 0 and the structured basis (if
  /// any) lies in ker(A).
  void validate() const;
};

/// Row and column sums of an r x c table. The table is flattened column by
/// column (cell (i, j) -> j*r + i); A's first r rows give row sums, the next
/// c rows give column sums.
IntMatrix independence_matrix(std::size_t rows, std::size_t cols);
ModelInstance independence_model(const IntMatrix& table);

/// Eye colour by hair colour counts for 592 people, the 4x4 table used in the
/// lattice-basis experiments of Diaconis and Sturmfels (1998).
IntMatrix ds98_table();
ModelInstance ds98_model();

/// Q x Q x Q table stored flat; cell (a, b, c) lives at a*Q*Q + b*Q + c.
struct ThreeWayTable {
  std::size_t q = 0;
  IntVector cells;

  std::int64_t& at(std::size_t a, std::size_t b, std::size_t c) {
    return cells[(a * q + b) * q + c];
  }
  std::int64_t total() const;
};

/// 2Q x Q^2 two-factor configuration of a Q x Q table (row sums, then
/// column sums), flattening (b, c) -> b*Q + c.
IntMatrix two_factor_matrix(std::size_t q);

/// 3Q^2 x Q^3 no-three-way-interaction configuration: Q diagonal copies of
/// the two-factor matrix above a row of Q identity blocks I_{Q^2}.
IntMatrix no3way_matrix(std::size_t q);

/// Block lattice basis (Q-1)K* columns: B* on the diagonal and -B* along the
/// last block row, with B* the kernel basis of the two-factor matrix.
IntMatrix no3way_structured_basis(std::size_t q);

ModelInstance no3way_model(const ThreeWayTable& table);

/// Random sparse table: a support of round(S*Q^3) distinct cells, then 5*Q^3
/// draws with replacement from that support, each adding one count.
ThreeWayTable sparse_table(std::size_t q, double sparsity, std::uint64_t seed);

/// (2k+1) x (4k+2) segmented-fiber family with u = e_{2k+1}.
IntMatrix ak_matrix(std::size_t k);
/// Start in the first segment: ones on coordinates k..2k-1 and 4k.
IntVector ak_x0(std::size_t k);
/// Start in the second segment: ones on coordinates 3k..4k-1 and 4k+1.
IntVector ak_x1(std::size_t k);
/// The single move joining the two segments, ak_x1 - ak_x0.
IntVector ak_bridge_move(std::size_t k);
ModelInstance ak_model(std::size_t k, bool start_in_second_segment = false);

/// 2^(k+1). Throws InputError when that does not fit in 64 bits.
std::uint64_t ak_fiber_size(std::size_t k);

}  // namespace rumba::models
