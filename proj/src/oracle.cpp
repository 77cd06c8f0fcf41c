#include "rumba/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rumba/checked.hpp"
#include "rumba/error.hpp"

namespace rumba::oracle {

IntVector resolve_bound(const IntMatrix& a, std::span<const std::int64_t> u,
                        const BoxBound& bound) {
  const std::size_t m = a.cols();
  if (bound.upper) {
    if (bound.upper->size() != m)
      throw InputError("box bound has length " + std::to_string(bound.upper->size()) +
                       ", expected " + std::to_string(m));
    if (!is_nonnegative(*bound.upper)) throw InputError("box bound has negative entries");
    return *bound.upper;
  }
  if (!is_nonnegative(a.entries()) || !is_nonnegative(u))
    throw InputError("auto bound needs A >= 0 and u >= 0; pass an explicit bound");
  IntVector ub(m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a(i, j) > 0) {
        const std::int64_t b = u[i] / a(i, j);
        ub[j] = ub[j] < 0 ? b : std::min(ub[j], b);
      }
    if (ub[j] < 0)
      throw InputError("auto bound: column " + std::to_string(j) +
                       " has no positive entry, so x_" + std::to_string(j) +
                       " is unbounded");
  }
  return ub;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

class Enumerator {
 public:
  Enumerator(const IntMatrix& a, std::span<const std::int64_t> u, IntVector ub,
             std::vector<std::size_t> order, std::size_t limit)
      : a_(a), ub_(std::move(ub)), order_(std::move(order)), limit_(limit),
        n_(a.rows()), m_(a.cols()), res_(u.begin(), u.end()), x_(m_, 0) {
    // lo_/hi_[s*n + r]: range of sum_{s' >= s} A[r][order[s']] * x over the box.
    lo_.assign((m_ + 1) * n_, 0);
    hi_.assign((m_ + 1) * n_, 0);
    for (std::size_t s = m_; s-- > 0;) {
      const std::size_t j = order_[s];
      for (std::size_t r = 0; r < n_; ++r) {
        const std::int64_t t = checked::mul(a_(r, j), ub_[j], "enumerate_fiber");
        lo_[s * n_ + r] = checked::add(lo_[(s + 1) * n_ + r], std::min<std::int64_t>(t, 0),
                                       "enumerate_fiber");
        hi_[s * n_ + r] = checked::add(hi_[(s + 1) * n_ + r], std::max<std::int64_t>(t, 0),
                                       "enumerate_fiber");
      }
    }
  }

  std::vector<IntVector> run() {
    bool ok = true;
    for (std::size_t r = 0; r < n_; ++r)
      ok = ok && res_[r] >= lo_[r] && res_[r] <= hi_[r];
    if (ok) descend(0);
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void descend(std::size_t s) {
    if (s == m_) {
      if (out_.size() >= limit_)
        throw LimitError("fiber enumeration exceeded the limit of " + std::to_string(limit_) +
                         " elements");
      out_.push_back(x_);
      return;
    }
    const std::size_t j = order_[s];
    const std::int64_t* lo_next = &lo_[(s + 1) * n_];
    const std::int64_t* hi_next = &hi_[(s + 1) * n_];
    std::int64_t lo = 0, hi = ub_[j];
    for (std::size_t r = 0; r < n_ && lo <= hi; ++r) {
      const std::int64_t c = a_(r, j);
      // Need c*x in [res - hi_next, res - lo_next].
      const std::int64_t want_lo = res_[r] - hi_next[r];
      const std::int64_t want_hi = res_[r] - lo_next[r];
      if (c == 0) {
        if (want_lo > 0 || want_hi < 0) return;
      } else if (c > 0) {
        lo = std::max(lo, ceil_div(want_lo, c));
        hi = std::min(hi, floor_div(want_hi, c));
      } else {
        lo = std::max(lo, ceil_div(want_hi, c));
        hi = std::min(hi, floor_div(want_lo, c));
      }
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      x_[j] = v;
      for (std::size_t r = 0; r < n_; ++r) res_[r] -= a_(r, j) * v;
      descend(s + 1);
      for (std::size_t r = 0; r < n_; ++r) res_[r] += a_(r, j) * v;
    }
    x_[j] = 0;
  }

  const IntMatrix& a_;
  IntVector ub_;
  std::vector<std::size_t> order_;
  std::size_t limit_;
  std::size_t n_, m_;
  IntVector res_, x_;
  std::vector<std::int64_t> lo_, hi_;
  std::vector<IntVector> out_;
};

}  // namespace

std::vector<IntVector> enumerate_fiber(const IntMatrix& a, std::span<const std::int64_t> u,
                                       const BoxBound& bound, std::size_t limit,
                                       std::span<const std::size_t> order) {
  if (a.empty()) throw InputError("enumerate_fiber: empty constraint matrix");
  if (u.size() != a.rows()) throw InputError("enumerate_fiber: u has the wrong length");
  IntVector ub = resolve_bound(a, u, bound);
  std::vector<std::size_t> ord(order.begin(), order.end());
  if (ord.empty()) {
    ord.resize(a.cols());
    std::iota(ord.begin(), ord.end(), std::size_t{0});
  } else {
    std::vector<std::size_t> check = ord;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i)
      if (check[i] != i || check.size() != a.cols())
        throw InputError("enumerate_fiber: order is not a permutation of the coordinates");
  }
  return Enumerator(a, u, std::move(ub), std::move(ord), limit).run();
}

SubsetReport verify_subset(const FiberStore& sampled,
                           const std::vector<IntVector>& oracle_fiber) {
  std::vector<IntVector> truth = oracle_fiber;
  std::sort(truth.begin(), truth.end());
  std::vector<IntVector> got = sampled.elements();
  std::sort(got.begin(), got.end());

  SubsetReport rep;
  rep.sampled = got.size();
  rep.oracle = truth.size();
  std::set_difference(got.begin(), got.end(), truth.begin(), truth.end(),
                      std::back_inserter(rep.extraneous));
  std::set_difference(truth.begin(), truth.end(), got.begin(), got.end(),
                      std::back_inserter(rep.missing));
  rep.sound = rep.extraneous.empty();
  rep.coverage = truth.empty() ? 0.0
                               : static_cast<double>(truth.size() - rep.missing.size()) /
                                     static_cast<double>(truth.size());
  return rep;
}

}  // namespace rumba::oracle
