#include "rumba/fiber_store.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "rumba/error.hpp"

namespace rumba {

FiberStore::FiberStore(std::span<const std::int64_t> x0) : dim_(x0.size()) {
  slots_.assign(64, 0);
  insert(x0);
}

std::uint64_t FiberStore::hash(std::span<const std::int64_t> x) const {
  std::uint64_t h = 0x243f6a8885a308d3ULL ^ x.size();
  for (std::int64_t v : x) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  h ^= h >> 33;
  return h;
}

std::size_t FiberStore::find_slot(std::span<const std::int64_t> x, std::uint64_t h) const {
  const std::size_t mask = slots_.size() - 1;
  std::size_t s = static_cast<std::size_t>(h) & mask;
  for (;;) {
    const Index entry = slots_[s];
    if (entry == 0) return s;
    const std::size_t idx = entry - 1;
    if (hashes_[idx] == h &&
        std::memcmp(data_.data() + idx * dim_, x.data(), dim_ * sizeof(std::int64_t)) == 0)
      return s;
    s = (s + 1) & mask;
  }
}

bool FiberStore::contains(std::span<const std::int64_t> x) const {
  if (x.size() != dim_ || slots_.empty()) return false;
  return slots_[find_slot(x, hash(x))] != 0;
}

void FiberStore::begin_step() { step_new_.emplace_back(); }

bool FiberStore::insert(std::span<const std::int64_t> x) {
  if (slots_.empty()) {
    dim_ = x.size();
    slots_.assign(64, 0);
  }
  if (x.size() != dim_)
    throw InputError("fiber element has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(dim_));
  const std::uint64_t h = hash(x);
  std::size_t s = find_slot(x, h);
  if (slots_[s] != 0) return false;
  if (count_ >= std::numeric_limits<Index>::max() - 1)
    throw LimitError("fiber store is full");
  data_.insert(data_.end(), x.begin(), x.end());
  hashes_.push_back(h);
  const auto idx = static_cast<Index>(count_++);
  if (!step_new_.empty()) step_new_.back().push_back(idx);
  if (2 * count_ > slots_.size()) {
    grow();
  } else {
    slots_[s] = idx + 1;
  }
  return true;
}

void FiberStore::grow() {
  std::vector<Index> fresh(slots_.size() * 2, 0);
  const std::size_t mask = fresh.size() - 1;
  for (std::size_t idx = 0; idx < count_; ++idx) {
    std::size_t s = static_cast<std::size_t>(hashes_[idx]) & mask;
    while (fresh[s] != 0) s = (s + 1) & mask;
    fresh[s] = static_cast<Index>(idx + 1);
  }
  slots_ = std::move(fresh);
}

void FiberStore::merge(const FiberStore& other) {
  for (std::size_t i = 0; i < other.size(); ++i) insert(other.element(i));
}

std::vector<IntVector> FiberStore::elements() const {
  std::vector<IntVector> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) out.push_back(element_vector(i));
  return out;
}

}  // namespace rumba
