#include "rumba/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

#include "rumba/checked.hpp"
#include "rumba/error.hpp"

namespace rumba {

namespace {

constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kSelectStream = 2;
constexpr std::size_t kBlock = 256;

Rng sample_rng(const StreamKey& key, std::size_t j) {
  return Rng::stream(key.seed, {kSampleStream, key.step, key.iteration, j});
}

[[noreturn]] void rethrow_overflow(const StreamKey& key, std::size_t j) {
  throw OverflowError("integer overflow forming x_t + B*Y at step " + std::to_string(key.step) +
                      ", iteration " + std::to_string(key.iteration) + ", sample " +
                      std::to_string(j));
}

void check_loop_inputs(std::span<const std::int64_t> x_t, const MoveSet& moves,
                       const GammaParams& params, const FiberStore& fiber) {
  if (moves.size() != params.size())
    throw InputError("basis has " + std::to_string(moves.size()) +
                     " columns but parameters have length " + std::to_string(params.size()));
  if (moves.size() > 0 && moves.dimension() != x_t.size())
    throw InputError("basis rows do not match the length of x_t");
  if (fiber.size() > 0 && fiber.dimension() != x_t.size())
    throw InputError("fiber store dimension does not match x_t");
}

}  // namespace

MoveSet::MoveSet(const LatticeBasis& basis) : MoveSet(basis.matrix()) {}

MoveSet::MoveSet(const IntMatrix& basis) : dim_(basis.rows()), columns_(basis.cols()) {
  for (std::size_t c = 0; c < basis.cols(); ++c)
    for (std::size_t r = 0; r < basis.rows(); ++r)
      if (basis(r, c) != 0)
        columns_[c].push_back({static_cast<std::uint32_t>(r), basis(r, c)});
}

void MoveSet::apply(std::span<const std::int64_t> x, std::span<const std::int64_t> y,
                    std::span<std::int64_t> out) const {
  std::copy(x.begin(), x.end(), out.begin());
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    const std::int64_t yk = y[k];
    if (yk == 0) continue;
    for (const Entry& e : columns_[k]) {
      std::int64_t prod;
      if (__builtin_mul_overflow(yk, e.value, &prod) ||
          __builtin_add_overflow(out[e.row], prod, &out[e.row]))
        throw OverflowError("integer overflow in x + B*y");
    }
  }
}

void RunConfig::validate(std::size_t k) const {
  if (steps < 1 || iterations < 1 || samples < 1)
    throw InputError("T, I and J must all be at least 1");
  for (const auto* v : {&alpha0_plus, &alpha0_minus, &beta0_plus, &beta0_minus})
    if (!v->empty() && v->size() != k)
      throw InputError("prior vector has length " + std::to_string(v->size()) +
                       ", expected K = " + std::to_string(k));
  if (pi.kind == PiPolicy::Kind::Fixed && !(pi.pi >= 0.0 && pi.pi <= 1.0))
    throw InputError("fixed pi must lie in [0, 1]");
  initial_params(k);  // checks shapes >= 0 and rates > 0
}

GammaParams RunConfig::initial_params(std::size_t k) const {
  const double a0 = k == 0 ? 0.0 : 1.0 / static_cast<double>(k);
  auto pick = [k](const std::vector<double>& v, double dflt) {
    return v.empty() ? std::vector<double>(k, dflt) : v;
  };
  return GammaParams(pick(alpha0_plus, a0), pick(alpha0_minus, a0), pick(beta0_plus, 1.0),
                     pick(beta0_minus, 1.0));
}

bool same_counts(const RunMetrics& a, const RunMetrics& b) {
  if (a.iterations.size() != b.iterations.size() || a.steps.size() != b.steps.size())
    return false;
  for (std::size_t n = 0; n < a.iterations.size(); ++n) {
    const auto& x = a.iterations[n];
    const auto& y = b.iterations[n];
    if (x.step != y.step || x.iteration != y.iteration ||
        x.samples_in_fiber != y.samples_in_fiber || x.new_points != y.new_points ||
        x.cumulative_unique != y.cumulative_unique || x.step_new_so_far != y.step_new_so_far)
      return false;
  }
  for (std::size_t n = 0; n < a.steps.size(); ++n) {
    const auto& x = a.steps[n];
    const auto& y = b.steps[n];
    if (x.step != y.step || x.cumulative_unique != y.cumulative_unique ||
        x.step_new != y.step_new)
      return false;
  }
  return true;
}

SampleLoopResult sample_loop_serial(std::span<const std::int64_t> x_t, std::size_t samples,
                                    const MoveSet& moves, const GammaParams& params,
                                    FiberStore& fiber, StreamKey key,
                                    const SampleObserver& observer) {
  check_loop_inputs(x_t, moves, params, fiber);
  const std::size_t k = params.size();
  const RateVector rates = params.rates();
  IntVector sum_plus(k, 0), sum_minus(k, 0);
  IntVector x(x_t.size());
  SampleLoopResult res;
  for (std::size_t j = 0; j < samples; ++j) {
    Rng rng = sample_rng(key, j);
    const CoefficientDraw draw = sample_coefficient_vector(rates, rng);
    try {
      moves.apply(x_t, draw.y, x);
    } catch (const OverflowError&) {
      rethrow_overflow(key, j);
    }
    const bool in_fiber = is_nonnegative(x);
    const bool accepted = in_fiber && fiber.insert(x);
    if (in_fiber) ++res.samples_in_fiber;
    if (accepted) {
      ++res.new_points;
      for (std::size_t c = 0; c < k; ++c) {
        sum_plus[c] = checked::add(sum_plus[c], draw.y_plus[c], "posterior_update");
        sum_minus[c] = checked::add(sum_minus[c], draw.y_minus[c], "posterior_update");
      }
    }
    if (observer)
      observer(SampleEvent{key.step, key.iteration, j, &rates, draw.y_plus, draw.y_minus,
                           in_fiber, accepted});
  }
  res.params = params;
  res.params.absorb(sum_plus, sum_minus, static_cast<std::int64_t>(res.new_points));
  return res;
}

SampleLoopResult sample_loop_parallel(std::span<const std::int64_t> x_t, std::size_t samples,
                                      const MoveSet& moves, const GammaParams& params,
                                      FiberStore& fiber, StreamKey key,
                                      const SampleObserver& observer) {
  check_loop_inputs(x_t, moves, params, fiber);
  const std::size_t k = params.size();
  const std::size_t m = x_t.size();
  const RateVector rates = params.rates();
  std::vector<PoissonSampler> draw_plus, draw_minus;
  draw_plus.reserve(k);
  draw_minus.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    draw_plus.emplace_back(rates.lambda_plus[c]);
    draw_minus.emplace_back(rates.lambda_minus[c]);
  }

  const std::size_t block = std::min(samples, kBlock);
  std::vector<std::int64_t> yp(block * k), ym(block * k), y(block * k), xs(block * m);
  std::vector<char> in_fiber(block), overflow(block);
  IntVector sum_plus(k, 0), sum_minus(k, 0);
  SampleLoopResult res;

  for (std::size_t base = 0; base < samples; base += block) {
    const auto n = static_cast<std::ptrdiff_t>(std::min(block, samples - base));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < n; ++b) {
      Rng rng = sample_rng(key, base + static_cast<std::size_t>(b));
      std::int64_t* bp = yp.data() + b * k;
      std::int64_t* bm = ym.data() + b * k;
      std::int64_t* by = y.data() + b * k;
      for (std::size_t c = 0; c < k; ++c) {
        bp[c] = draw_plus[c](rng);
        bm[c] = draw_minus[c](rng);
        by[c] = bp[c] - bm[c];
      }
      std::span<std::int64_t> out(xs.data() + b * m, m);
      overflow[b] = 0;
      try {
        moves.apply(x_t, {by, k}, out);
        in_fiber[b] = is_nonnegative(out) ? 1 : 0;
      } catch (const OverflowError&) {
        overflow[b] = 1;
        in_fiber[b] = 0;
      }
    }

    for (std::ptrdiff_t b = 0; b < n; ++b) {
      const std::size_t j = base + static_cast<std::size_t>(b);
      if (overflow[b]) rethrow_overflow(key, j);
      const std::span<const std::int64_t> bp(yp.data() + b * k, k);
      const std::span<const std::int64_t> bm(ym.data() + b * k, k);
      const bool feasible = in_fiber[b] != 0;
      const bool accepted = feasible && fiber.insert({xs.data() + b * m, m});
      if (feasible) ++res.samples_in_fiber;
      if (accepted) {
        ++res.new_points;
        for (std::size_t c = 0; c < k; ++c) {
          sum_plus[c] = checked::add(sum_plus[c], bp[c], "posterior_update");
          sum_minus[c] = checked::add(sum_minus[c], bm[c], "posterior_update");
        }
      }
      if (observer)
        observer(SampleEvent{key.step, key.iteration, j, &rates, bp, bm, feasible, accepted});
    }
  }
  res.params = params;
  res.params.absorb(sum_plus, sum_minus, static_cast<std::int64_t>(res.new_points));
  return res;
}

SampleLoopResult sample_loop(std::span<const std::int64_t> x_t, std::size_t samples,
                             const MoveSet& moves, const GammaParams& params,
                             FiberStore& fiber, StreamKey key, Kernel kernel,
                             const SampleObserver& observer) {
  return kernel == Kernel::Serial
             ? sample_loop_serial(x_t, samples, moves, params, fiber, key, observer)
             : sample_loop_parallel(x_t, samples, moves, params, fiber, key, observer);
}

UpdateLoopResult update_loop(std::span<const std::int64_t> x_t, std::size_t iterations,
                             std::size_t samples, const MoveSet& moves,
                             const GammaParams& prior, FiberStore& fiber, std::uint64_t seed,
                             std::size_t step, Kernel kernel,
                             const SampleObserver& observer) {
  // x_t may point into the store, which reallocates on insert.
  const IntVector start(x_t.begin(), x_t.end());
  UpdateLoopResult res{prior.prior(), {}};
  res.iterations.reserve(iterations);
  for (std::size_t i = 1; i <= iterations; ++i) {
    auto it = sample_loop(start, samples, moves, res.params, fiber, StreamKey{seed, step, i},
                          kernel, observer);
    res.params = it.params;
    res.iterations.push_back(std::move(it));
  }
  return res;
}

FiberStore::Index select_next(const FiberStore& fiber, std::size_t step, PiPolicy policy,
                              Rng& rng) {
  if (fiber.size() == 0) throw InputError("select_next on an empty fiber store");
  const std::vector<FiberStore::Index>* fresh =
      step >= 1 && step <= fiber.steps() ? &fiber.step_new(step) : nullptr;
  bool use_fresh = fresh != nullptr && !fresh->empty();
  if (use_fresh && policy.kind == PiPolicy::Kind::Fixed) use_fresh = rng.uniform() < policy.pi;
  if (use_fresh) return (*fresh)[rng.below(fresh->size())];
  return static_cast<FiberStore::Index>(rng.below(fiber.size()));
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void validate_instance(const IntMatrix& a, std::span<const std::int64_t> u,
                       std::span<const std::int64_t> x0, const LatticeBasis& basis) {
  if (a.empty()) throw InputError("constraint matrix is empty");
  if (u.size() != a.rows())
    throw InputError("right-hand side has length " + std::to_string(u.size()) + ", expected " +
                     std::to_string(a.rows()));
  if (x0.size() != a.cols())
    throw InputError("x0 has length " + std::to_string(x0.size()) + ", expected " +
                     std::to_string(a.cols()));
  if (!is_nonnegative(x0)) throw InputError("x0 has negative entries");
  const IntVector ax = mat_vec(a, x0);
  if (!std::equal(ax.begin(), ax.end(), u.begin(), u.end()))
    throw InputError("x0 is infeasible: A*x0 != u");
  if (!basis.empty() && basis.dimension() != a.cols())
    throw InputError("basis has " + std::to_string(basis.dimension()) + " rows, expected " +
                     std::to_string(a.cols()));
  check_kernel(a, basis.matrix());
}

}  // namespace

RunResult rumba(const RunConfig& config, const IntMatrix& a, std::span<const std::int64_t> u,
                std::span<const std::int64_t> x0, const LatticeBasis& basis,
                const SampleObserver& observer) {
  validate_instance(a, u, x0, basis);
  const std::size_t k = basis.size();
  config.validate(k);
  const GammaParams prior = config.initial_params(k);
  const MoveSet moves(basis);

  RunResult run{FiberStore(x0), {}, {}};
  FiberStore::Index current = 0;
  const auto start = Clock::now();
  for (std::size_t t = 1; t <= config.steps; ++t) {
    const auto step_start = Clock::now();
    run.fiber.begin_step();
    run.starts.push_back(current);
    const IntVector x_t = run.fiber.element_vector(current);
    const std::size_t before = run.fiber.size();
    GammaParams params = prior;
    std::size_t step_new = 0;
    for (std::size_t i = 1; i <= config.iterations; ++i) {
      auto it = sample_loop(x_t, config.samples, moves, params, run.fiber,
                            StreamKey{config.seed, t, i}, config.kernel, observer);
      params = std::move(it.params);
      step_new += it.new_points;
      run.metrics.iterations.push_back(IterationMetrics{t, i, it.samples_in_fiber,
                                                        it.new_points, run.fiber.size(),
                                                        step_new, ms_since(start)});
    }
    if (config.check_soundness)
      for (auto idx : run.fiber.step_new(t)) {
        const auto x = run.fiber.element(idx);
        const IntVector ax = mat_vec(a, x);
        if (!is_nonnegative(x) || !std::equal(ax.begin(), ax.end(), u.begin(), u.end()))
          throw std::logic_error("sampler inserted a point outside the fiber");
      }
    run.metrics.steps.push_back(
        StepMetrics{t, run.fiber.size(), run.fiber.size() - before, ms_since(step_start)});
    Rng select_rng = Rng::stream(config.seed, {kSelectStream, t});
    current = select_next(run.fiber, t, config.pi, select_rng);
  }
  return run;
}

}  // namespace rumba
