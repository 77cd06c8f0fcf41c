#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rumba/int_matrix.hpp"

namespace rumba {

/// Deduplicated set of fiber elements (vectors of length M) in insertion
/// order, with the per-step lists of newly discovered elements.
///
/// Elements live in one flat buffer; an open-addressing table of element
/// indices gives exact membership (hash, then full-vector comparison).
/// Element 0 is the starting point x0 and belongs to no step list.
class FiberStore {
 public:
  using Index = std::uint32_t;

  FiberStore() = default;
  /// Store holding only x0.
  explicit FiberStore(std::span<const std::int64_t> x0);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return count_; }

  std::span<const std::int64_t> element(std::size_t index) const {
    return {data_.data() + index * dim_, dim_};
  }
  IntVector element_vector(std::size_t index) const {
    auto e = element(index);
    return IntVector(e.begin(), e.end());
  }

  bool contains(std::span<const std::int64_t> x) const;

  /// Starts the bookkeeping for a new step; subsequent inserts are credited
  /// to it. Steps are numbered 1, 2, ...
  void begin_step();
  std::size_t steps() const noexcept { return step_new_.size(); }

  /// Inserts x if absent. Returns true if x was new.
  bool insert(std::span<const std::int64_t> x);

  /// Indices first discovered during step t (1-based).
  const std::vector<Index>& step_new(std::size_t t) const { return step_new_.at(t - 1); }

  /// Appends every element of `other` not already present. Step lists of
  /// `other` are not carried over; merged elements join the current step if
  /// one is open.
  void merge(const FiberStore& other);

  std::vector<IntVector> elements() const;

 private:
  std::uint64_t hash(std::span<const std::int64_t> x) const;
  std::size_t find_slot(std::span<const std::int64_t> x, std::uint64_t h) const;
  void grow();

  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<std::int64_t> data_;
  std::vector<std::uint64_t> hashes_;  // per element
  std::vector<Index> slots_;           // 0 = empty, otherwise index + 1
  std::vector<std::vector<Index>> step_new_;
};

}  // namespace rumba
