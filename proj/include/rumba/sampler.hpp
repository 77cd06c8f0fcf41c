#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rumba/distributions.hpp"
#include "rumba/fiber_store.hpp"
#include "rumba/int_matrix.hpp"
#include "rumba/lattice.hpp"
#include "rumba/random.hpp"

namespace rumba {

/// Lattice basis laid out for repeated x_t + B*Y evaluation: each column is
/// kept as a sparse (row, value) list.
class MoveSet {
 public:
  MoveSet() = default;
  explicit MoveSet(const LatticeBasis& basis);
  explicit MoveSet(const IntMatrix& basis);

  std::size_t size() const noexcept { return columns_.size(); }  // K
  std::size_t dimension() const noexcept { return dim_; }        // M

  /// out = x + B*y, overflow-checked. Throws OverflowError on overflow.
  void apply(std::span<const std::int64_t> x, std::span<const std::int64_t> y,
             std::span<std::int64_t> out) const;

 private:
  struct Entry {
    std::uint32_t row;
    std::int64_t value;
  };
  std::size_t dim_ = 0;
  std::vector<std::vector<Entry>> columns_;
};

/// Next-start selection rule after each step.
struct PiPolicy {
  enum class Kind { Indicator, Fixed };
  Kind kind = Kind::Indicator;
  double pi = 1.0;

  static PiPolicy indicator() { return {}; }
  static PiPolicy fixed(double p) { return {Kind::Fixed, p}; }
};

/// Which implementation of the sample loop to run. Both consume identical
/// per-sample random streams and produce identical results.
enum class Kernel { Serial, Parallel };

struct RunConfig {
  std::size_t steps = 1;       // T
  std::size_t iterations = 1;  // I
  std::size_t samples = 1;     // J
  // Empty means the default: alpha0 = 1/K, beta0 = 1.
  std::vector<double> alpha0_plus, alpha0_minus, beta0_plus, beta0_minus;
  PiPolicy pi = PiPolicy::indicator();
  std::uint64_t seed = 0;
  Kernel kernel = Kernel::Parallel;
  /// Re-verify A*x = u for every inserted element (slow; for tests).
  bool check_soundness = false;

  /// Throws InputError for T, I, J < 1, bad vector lengths, beta <= 0, pi
  /// outside [0, 1].
  void validate(std::size_t k) const;
  GammaParams initial_params(std::size_t k) const;
};

struct IterationMetrics {
  std::size_t step = 0;
  std::size_t iteration = 0;
  std::size_t samples_in_fiber = 0;  // X >= 0, duplicates included
  std::size_t new_points = 0;
  std::size_t cumulative_unique = 0;
  std::size_t step_new_so_far = 0;
  double elapsed_ms = 0.0;  // since run start
};

struct StepMetrics {
  std::size_t step = 0;
  std::size_t cumulative_unique = 0;
  std::size_t step_new = 0;
  double wall_ms = 0.0;
};

struct RunMetrics {
  std::vector<IterationMetrics> iterations;
  std::vector<StepMetrics> steps;
};

/// Compares every counter, ignoring wall-clock fields.
bool same_counts(const RunMetrics& a, const RunMetrics& b);

/// Per-sample trace, delivered in sample order after the batch is merged.
struct SampleEvent {
  std::size_t step;
  std::size_t iteration;
  std::size_t sample;
  const RateVector* rates;  // rates the draw used
  std::span<const std::int64_t> y_plus;
  std::span<const std::int64_t> y_minus;
  bool in_fiber;
  bool accepted;  // in fiber and new
};
using SampleObserver = std::function<void(const SampleEvent&)>;

/// Identifies the random streams of one sample loop.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::uint64_t iteration = 0;
};

struct SampleLoopResult {
  GammaParams params;
  std::size_t samples_in_fiber = 0;
  std::size_t new_points = 0;
};

/// One batch of J proposals from x_t with rates frozen at alpha/beta. New
/// nonnegative proposals are inserted into `fiber` and their coefficients
/// folded into the returned parameters.
SampleLoopResult sample_loop(std::span<const std::int64_t> x_t, std::size_t samples,
                             const MoveSet& moves, const GammaParams& params,
                             FiberStore& fiber, StreamKey key,
                             Kernel kernel = Kernel::Parallel,
                             const SampleObserver& observer = {});

/// Reference implementation: plain sequential loop over samples.
SampleLoopResult sample_loop_serial(std::span<const std::int64_t> x_t, std::size_t samples,
                                    const MoveSet& moves, const GammaParams& params,
                                    FiberStore& fiber, StreamKey key,
                                    const SampleObserver& observer = {});

/// OpenMP kernel: proposals are drawn and checked in parallel in blocks, then
/// merged in sample order.
SampleLoopResult sample_loop_parallel(std::span<const std::int64_t> x_t, std::size_t samples,
                                      const MoveSet& moves, const GammaParams& params,
                                      FiberStore& fiber, StreamKey key,
                                      const SampleObserver& observer = {});

struct UpdateLoopResult {
  GammaParams params;
  std::vector<SampleLoopResult> iterations;
};

/// I sample loops from x_t, threading parameters from `prior` onwards.
UpdateLoopResult update_loop(std::span<const std::int64_t> x_t, std::size_t iterations,
                             std::size_t samples, const MoveSet& moves,
                             const GammaParams& prior, FiberStore& fiber, std::uint64_t seed,
                             std::size_t step, Kernel kernel = Kernel::Parallel,
                             const SampleObserver& observer = {});

/// Index of the next starting element, chosen from step `step`'s new
/// elements and/or the whole store according to `policy`.
FiberStore::Index select_next(const FiberStore& fiber, std::size_t step, PiPolicy policy,
                              Rng& rng);

struct RunResult {
  FiberStore fiber;
  RunMetrics metrics;
  std::vector<FiberStore::Index> starts;  // x_t index used at each step
};

/// Full run: validates the instance, then T rounds of update_loop followed by
/// select_next. Deterministic given config.seed.
RunResult rumba(const RunConfig& config, const IntMatrix& a, std::span<const std::int64_t> u,
                std::span<const std::int64_t> x0, const LatticeBasis& basis,
                const SampleObserver& observer = {});

}  // namespace rumba
