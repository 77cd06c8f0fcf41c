#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rumba/fiber_store.hpp"
#include "rumba/int_matrix.hpp"

namespace rumba::oracle {

/// Per-coordinate upper bounds for enumeration, or "auto" (derived from A and
/// u, valid only when A >= 0 and u >= 0).
struct BoxBound {
  std::optional<IntVector> upper;

  static BoxBound automatic() { return {}; }
  static BoxBound uniform(std::size_t m, std::int64_t bound) {
    return {IntVector(m, bound)};
  }
  static BoxBound explicit_bounds(IntVector bounds) { return {std::move(bounds)}; }
};

/// Resolves `bound` against (A, u). Auto: x_j <= min over {i : A_ij > 0} of
/// floor(u_i / A_ij). Throws InputError when that is not well defined.
IntVector resolve_bound(const IntMatrix& a, std::span<const std::int64_t> u,
                        const BoxBound& bound);

inline constexpr std::size_t kDefaultLimit = 10'000'000;

/// All x with 0 <= x <= bound and A*x = u, sorted lexicographically. Depth
/// first over coordinates in `order` (identity when empty) with interval
/// pruning on each constraint's residual. Throws LimitError once more than
/// `limit` elements are found.
std::vector<IntVector> enumerate_fiber(const IntMatrix& a, std::span<const std::int64_t> u,
                                       const BoxBound& bound,
                                       std::size_t limit = kDefaultLimit,
                                       std::span<const std::size_t> order = {});

struct SubsetReport {
  bool sound = true;  // every sampled element is in the oracle fiber
  double coverage = 0.0;
  std::size_t sampled = 0;
  std::size_t oracle = 0;
  std::vector<IntVector> missing;     // in the oracle set, never sampled
  std::vector<IntVector> extraneous;  // sampled but not in the fiber
};

SubsetReport verify_subset(const FiberStore& sampled, const std::vector<IntVector>& oracle_fiber);

}  // namespace rumba::oracle
