#include <gtest/gtest.h>

#include <map>
#include <set>

#include "rumba/error.hpp"
#include "rumba/lattice.hpp"
#include "rumba/models.hpp"
#include "rumba/oracle.hpp"
#include "rumba/sampler.hpp"
#include "test_support.hpp"

using namespace rumba;
namespace ts = testing_support;

namespace {

struct Instance {
  models::ModelInstance model;
  LatticeBasis basis;
};

Instance independence(const IntMatrix& table) {
  auto m = models::independence_model(table);
  auto b = kernel_lattice_basis(m.A);
  return {std::move(m), std::move(b)};
}

Instance ak(std::size_t k) {
  auto m = models::ak_model(k);
  auto b = kernel_lattice_basis(m.A);
  return {std::move(m), std::move(b)};
}

RunConfig config(std::size_t t, std::size_t i, std::size_t j, std::uint64_t seed) {
  RunConfig c;
  c.steps = t;
  c.iterations = i;
  c.samples = j;
  c.seed = seed;
  return c;
}

RunResult run(const Instance& in, const RunConfig& c) {
  return rumba::rumba(c, in.model.A, in.model.u, in.model.x0, in.basis);
}

std::set<IntVector> as_set(const FiberStore& f) {
  auto e = f.elements();
  return {e.begin(), e.end()};
}

std::set<IntVector> oracle_set(const models::ModelInstance& m) {
  // A_k has negative entries but a 0/1 fiber.
  auto bound = is_nonnegative(m.A.entries()) ? oracle::BoxBound::automatic()
                                             : oracle::BoxBound::uniform(m.A.cols(), 1);
  auto e = oracle::enumerate_fiber(m.A, m.u, bound);
  return {e.begin(), e.end()};
}

void expect_sound(const models::ModelInstance& m, const FiberStore& f) {
  for (const auto& x : f.elements()) {
    ASSERT_TRUE(is_nonnegative(x));
    ASSERT_EQ(mat_vec(m.A, x), m.u);
  }
}

}  // namespace

TEST(SampleLoop, EmptyBasisReproducesStart) {
  IntMatrix a = IntMatrix::identity(2);
  IntVector x0{1, 2};
  auto basis = kernel_lattice_basis(a);
  ASSERT_TRUE(basis.empty());
  MoveSet moves(basis);
  FiberStore fiber(x0);
  auto params = GammaParams::uniform(0, 0.0, 1.0);
  for (auto kernel : {Kernel::Serial, Kernel::Parallel}) {
    auto r = sample_loop(x0, 50, moves, params, fiber, {1, 1, 1}, kernel);
    EXPECT_EQ(r.samples_in_fiber, 50u);
    EXPECT_EQ(r.new_points, 0u);
    EXPECT_EQ(r.params, params);
  }
  EXPECT_EQ(fiber.size(), 1u);
}

TEST(SampleLoop, ZeroRatesNeverMove) {
  auto in = independence(IntMatrix::from_rows({{2, 1}, {1, 2}}));
  MoveSet moves(in.basis);
  FiberStore fiber(in.model.x0);
  auto params = GammaParams::uniform(in.basis.size(), 0.0, 1.0);
  auto r = sample_loop(in.model.x0, 300, moves, params, fiber, {4, 1, 1});
  EXPECT_EQ(r.samples_in_fiber, 300u);
  EXPECT_EQ(r.new_points, 0u);
  EXPECT_EQ(fiber.size(), 1u);
  EXPECT_EQ(r.params, params);
}

TEST(SampleLoop, TwoByTwoUnitMarginsFindsBothTables) {
  auto in = independence(IntMatrix::identity(2));
  MoveSet moves(in.basis);
  FiberStore fiber(in.model.x0);
  fiber.begin_step();
  auto params = RunConfig{}.initial_params(in.basis.size());
  auto r = sample_loop(in.model.x0, 200, moves, params, fiber, {2, 1, 1});
  EXPECT_EQ(fiber.size(), 2u);
  EXPECT_EQ(r.new_points, 1u);
  EXPECT_LE(r.samples_in_fiber, 200u);
  EXPECT_EQ(as_set(fiber), (std::set<IntVector>{{1, 0, 0, 1}, {0, 1, 1, 0}}));
}

TEST(SampleLoop, SerialAndParallelAgree) {
  auto in = independence(models::ds98_table());
  MoveSet moves(in.basis);
  auto params = RunConfig{}.initial_params(in.basis.size());
  params.absorb(IntVector(9, 2), IntVector(9, 1), 3);
  FiberStore fa(in.model.x0), fb(in.model.x0);
  // 1000 samples spans several parallel blocks.
  auto ra = sample_loop_serial(in.model.x0, 1000, moves, params, fa, {7, 3, 2});
  auto rb = sample_loop_parallel(in.model.x0, 1000, moves, params, fb, {7, 3, 2});
  EXPECT_EQ(ra.params, rb.params);
  EXPECT_EQ(ra.new_points, rb.new_points);
  EXPECT_EQ(ra.samples_in_fiber, rb.samples_in_fiber);
  EXPECT_EQ(fa.elements(), fb.elements());
  EXPECT_GT(ra.new_points, 0u);
}

TEST(SampleLoop, DimensionMismatchIsInputError) {
  auto in = independence(IntMatrix::identity(2));
  MoveSet moves(in.basis);
  FiberStore fiber(in.model.x0);
  auto wrong_k = GammaParams::uniform(3, 1.0, 1.0);
  EXPECT_THROW(sample_loop(in.model.x0, 10, moves, wrong_k, fiber, {}), InputError);
  auto params = GammaParams::uniform(1, 1.0, 1.0);
  EXPECT_THROW(sample_loop(IntVector{1, 0, 0}, 10, moves, params, fiber, {}), InputError);
}

TEST(SampleLoop, OverflowNamesTheSample) {
  const std::int64_t big = std::int64_t{1} << 62;
  IntMatrix a = IntMatrix::from_rows({{1, 1}});
  auto basis = LatticeBasis::user_supplied(a, IntMatrix::from_rows({{big}, {-big}}));
  MoveSet moves(basis);
  IntVector x0{big, big};
  FiberStore fiber(x0);
  auto params = GammaParams::uniform(1, 5.0, 1.0);
  for (auto kernel : {Kernel::Serial, Kernel::Parallel}) {
    try {
      sample_loop(x0, 100, moves, params, fiber, {1, 1, 1}, kernel);
      FAIL() << "expected overflow";
    } catch (const OverflowError& e) {
      EXPECT_NE(std::string(e.what()).find("sample"), std::string::npos);
    }
  }
}

// Replay: log every sample, then recompute the posterior from the accepted
// draws alone.
TEST(SampleLoop, ParameterAccountingReplay) {
  auto in = independence(models::ds98_table());
  MoveSet moves(in.basis);
  const std::size_t k = in.basis.size();
  auto params = RunConfig{}.initial_params(k);
  for (auto kernel : {Kernel::Serial, Kernel::Parallel}) {
    FiberStore fiber(in.model.x0);
    std::vector<AcceptedPair> accepted;
    std::size_t in_fiber = 0, events = 0;
    const RateVector* seen_rates = nullptr;
    auto r = sample_loop(in.model.x0, 700, moves, params, fiber, {3, 1, 1}, kernel,
                         [&](const SampleEvent& e) {
                           EXPECT_EQ(e.sample, events);
                           ++events;
                           if (seen_rates == nullptr) seen_rates = e.rates;
                           // lambda frozen for the whole batch
                           EXPECT_EQ(e.rates, seen_rates);
                           EXPECT_EQ(e.rates->lambda_plus, params.rates().lambda_plus);
                           EXPECT_EQ(e.rates->lambda_minus, params.rates().lambda_minus);
                           in_fiber += e.in_fiber;
                           if (e.accepted)
                             accepted.emplace_back(IntVector(e.y_plus.begin(), e.y_plus.end()),
                                                   IntVector(e.y_minus.begin(), e.y_minus.end()));
                         });
    EXPECT_EQ(events, 700u);
    EXPECT_EQ(in_fiber, r.samples_in_fiber);
    EXPECT_EQ(accepted.size(), r.new_points);
    EXPECT_EQ(posterior_update(params, accepted), r.params);
    for (std::size_t c = 0; c < k; ++c) {
      std::int64_t sp = 0;
      for (const auto& [yp, ym] : accepted) sp += yp[c];
      EXPECT_EQ(r.params.alpha_plus()[c], params.alpha_plus()[c] + static_cast<double>(sp));
      EXPECT_EQ(r.params.beta_plus()[c],
                params.beta_plus()[c] + static_cast<double>(accepted.size()));
    }
  }
}

TEST(UpdateLoop, ResetsToPriorAndThreadsParameters) {
  auto in = independence(models::ds98_table());
  MoveSet moves(in.basis);
  auto prior = RunConfig{}.initial_params(in.basis.size());
  auto dirty = prior;
  dirty.absorb(IntVector(9, 5), IntVector(9, 5), 4);
  FiberStore fa(in.model.x0), fb(in.model.x0);
  auto a = update_loop(in.model.x0, 3, 100, moves, dirty, fa, 11, 1);
  auto b = update_loop(in.model.x0, 3, 100, moves, prior, fb, 11, 1);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(fa.elements(), fb.elements());
  ASSERT_EQ(a.iterations.size(), 3u);
  EXPECT_EQ(a.params, a.iterations.back().params);
  std::int64_t total = 0;
  for (const auto& it : a.iterations) total += static_cast<std::int64_t>(it.new_points);
  EXPECT_EQ(a.params.accepted(), total);
}

TEST(UpdateLoop, SingleIterationIsOneSampleLoop) {
  auto in = independence(models::ds98_table());
  MoveSet moves(in.basis);
  auto prior = RunConfig{}.initial_params(in.basis.size());
  FiberStore fa(in.model.x0), fb(in.model.x0);
  auto a = update_loop(in.model.x0, 1, 100, moves, prior, fa, 5, 2);
  auto b = sample_loop(in.model.x0, 100, moves, prior, fb, {5, 2, 1});
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(fa.elements(), fb.elements());
}

TEST(UpdateLoop, TwoByTwoQuietsAfterDiscovery) {
  auto in = independence(IntMatrix::identity(2));
  MoveSet moves(in.basis);
  FiberStore fiber(in.model.x0);
  auto r = update_loop(in.model.x0, 5, 200, moves, RunConfig{}.initial_params(1), fiber, 1, 1);
  EXPECT_EQ(fiber.size(), 2u);
  bool found = false;
  for (const auto& it : r.iterations) {
    EXPECT_LE(it.samples_in_fiber, 200u);
    if (found) EXPECT_EQ(it.new_points, 0u);
    found = found || it.new_points > 0;
  }
  EXPECT_TRUE(found);
}

TEST(SelectNext, IndicatorPolicy) {
  FiberStore f(IntVector{0});
  f.begin_step();
  f.insert(IntVector{1});
  f.insert(IntVector{2});
  f.begin_step();
  f.insert(IntVector{3});
  f.begin_step();
  Rng rng(1);
  // F*_2 = {3}: always picked.
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select_next(f, 2, PiPolicy::indicator(), rng), 3u);
  // F*_3 empty: uniform over all four.
  std::map<FiberStore::Index, int> counts;
  const int n = 40000;
  for (int i = 0; i < n; ++i) ++counts[select_next(f, 3, PiPolicy::indicator(), rng)];
  ASSERT_EQ(counts.size(), 4u);
  for (auto& [idx, c] : counts) EXPECT_NEAR(c / double(n), 0.25, 0.01);
}

TEST(SelectNext, FixedMixtureProbabilities) {
  FiberStore f(IntVector{10});  // c
  f.insert(IntVector{11});      // d
  f.begin_step();
  f.insert(IntVector{0});  // a
  f.insert(IntVector{1});  // b
  Rng rng(2024);
  const int n = 100000;
  std::map<FiberStore::Index, int> counts;
  for (int i = 0; i < n; ++i) ++counts[select_next(f, 1, PiPolicy::fixed(0.5), rng)];
  // 0.5 * 1/2 + 0.5 * 1/4 for new elements, 0.5 * 1/4 for old ones.
  const double sd = std::sqrt(0.375 * 0.625 / n);
  EXPECT_NEAR(counts[2] / double(n), 0.375, 5 * sd);
  EXPECT_NEAR(counts[3] / double(n), 0.375, 5 * sd);
  EXPECT_NEAR(counts[0] / double(n), 0.125, 5 * sd);
  EXPECT_NEAR(counts[1] / double(n), 0.125, 5 * sd);
  // pi = 0 ignores the new elements entirely.
  std::map<FiberStore::Index, int> flat;
  for (int i = 0; i < n; ++i) ++flat[select_next(f, 1, PiPolicy::fixed(0.0), rng)];
  for (auto& [idx, c] : flat) EXPECT_NEAR(c / double(n), 0.25, 0.01);
}

TEST(Rumba, UniqueSolutionInstance) {
  IntMatrix a = IntMatrix::identity(2);
  auto basis = kernel_lattice_basis(a);
  auto r = rumba::rumba(config(3, 2, 10, 1), a, IntVector{1, 2}, IntVector{1, 2}, basis);
  EXPECT_EQ(r.fiber.size(), 1u);
  ASSERT_EQ(r.metrics.iterations.size(), 6u);
  for (const auto& m : r.metrics.iterations) {
    EXPECT_EQ(m.new_points, 0u);
    EXPECT_EQ(m.samples_in_fiber, 10u);
  }
}

TEST(Rumba, ThreeByThreePermutations) {
  auto in = independence(IntMatrix::identity(3));
  auto want = oracle_set(in.model);
  ASSERT_EQ(want.size(), 6u);
  auto r = run(in, config(10, 5, 200, 3));
  EXPECT_EQ(as_set(r.fiber), want);
}

TEST(Rumba, ValidatesInstance) {
  auto in = independence(IntMatrix::identity(2));
  auto c = config(1, 1, 1, 0);
  IntVector bad_x0{1, 1, 0, 0};
  EXPECT_THROW(rumba::rumba(c, in.model.A, in.model.u, bad_x0, in.basis), InputError);
  IntVector negative{2, -1, -1, 2};
  auto u2 = mat_vec(in.model.A, negative);
  EXPECT_THROW(rumba::rumba(c, in.model.A, u2, negative, in.basis), InputError);
  auto zero_t = config(0, 1, 1, 0);
  EXPECT_THROW(run(in, zero_t), InputError);
  auto bad_beta = c;
  bad_beta.beta0_plus = {0.0};
  EXPECT_THROW(run(in, bad_beta), InputError);
  auto bad_pi = c;
  bad_pi.pi = PiPolicy::fixed(1.5);
  EXPECT_THROW(run(in, bad_pi), InputError);
  auto bad_len = c;
  bad_len.alpha0_plus = {1.0, 2.0};
  EXPECT_THROW(run(in, bad_len), InputError);
}

TEST(Rumba, MetricsInvariantsAndSoundness) {
  auto in = independence(models::ds98_table());
  auto c = config(6, 4, 150, 21);
  c.check_soundness = true;
  auto r = run(in, c);
  expect_sound(in.model, r.fiber);
  ASSERT_EQ(r.metrics.steps.size(), 6u);
  ASSERT_EQ(r.metrics.iterations.size(), 24u);
  std::size_t prev = 1, total_new = 0;
  for (std::size_t t = 1; t <= 6; ++t) {
    const auto& s = r.metrics.steps[t - 1];
    EXPECT_GE(s.cumulative_unique, prev);
    prev = s.cumulative_unique;
    std::size_t sum = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& it = r.metrics.iterations[(t - 1) * 4 + i];
      EXPECT_EQ(it.step, t);
      EXPECT_EQ(it.iteration, i + 1);
      EXPECT_LE(it.samples_in_fiber, 150u);
      sum += it.new_points;
      EXPECT_EQ(it.step_new_so_far, sum);
    }
    EXPECT_EQ(s.step_new, sum);
    EXPECT_EQ(r.fiber.step_new(t).size(), sum);
    total_new += sum;
  }
  EXPECT_EQ(total_new + 1, r.fiber.size());
  // Each start is x0 or an element discovered before its step.
  EXPECT_EQ(r.starts[0], 0u);
  for (std::size_t t = 2; t <= 6; ++t) {
    const auto& prev_new = r.fiber.step_new(t - 1);
    if (!prev_new.empty())
      EXPECT_NE(std::find(prev_new.begin(), prev_new.end(), r.starts[t - 1]), prev_new.end());
  }
}

TEST(Rumba, DeterministicAndKernelIndependent) {
  auto in = independence(models::ds98_table());
  auto c = config(4, 3, 300, 99);
  auto a = run(in, c);
  auto b = run(in, c);
  c.kernel = Kernel::Serial;
  auto s = run(in, c);
  EXPECT_EQ(a.fiber.elements(), b.fiber.elements());
  EXPECT_TRUE(same_counts(a.metrics, b.metrics));
  EXPECT_EQ(a.fiber.elements(), s.fiber.elements());
  EXPECT_TRUE(same_counts(a.metrics, s.metrics));
  EXPECT_EQ(a.starts, s.starts);
  c.seed = 100;
  EXPECT_NE(run(in, c).fiber.elements(), a.fiber.elements());
}

TEST(Rumba, Ds98EarlyIterationsStayProductive) {
  auto in = independence(models::ds98_table());
  auto r = run(in, config(3, 5, 100, 1));
  for (const auto& it : r.metrics.iterations) EXPECT_GE(it.new_points, 50u) << it.step << "/" << it.iteration;
}

// J -> infinity: one large sample loop from x0 finds every element of a
// small fiber.
TEST(Convergence, LargeSingleBatchCoversSmallFibers) {
  std::vector<Instance> instances;
  instances.push_back(independence(IntMatrix::identity(3)));
  instances.push_back(independence(IntMatrix::from_rows({{1, 1, 0}, {0, 1, 1}})));
  instances.push_back(ak(2));
  for (const auto& in : instances) {
    auto want = oracle_set(in.model);
    ASSERT_LE(want.size(), 50u);
    int full = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      MoveSet moves(in.basis);
      FiberStore fiber(in.model.x0);
      sample_loop(in.model.x0, 100000, moves, RunConfig{}.initial_params(in.basis.size()), fiber,
                  {seed, 1, 1});
      full += as_set(fiber) == want;
    }
    EXPECT_GE(full, 20) << in.model.label << " fiber size " << want.size();
  }
}

// T -> infinity on A_4 (32 elements) with a modest per-step budget.
TEST(Convergence, StepsCoverA4) {
  auto in = ak(4);
  int full = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = run(in, config(200, 3, 100, seed));
    full += r.fiber.size() == 32;
    expect_sound(in.model, r.fiber);
  }
  EXPECT_GE(full, 19);
}
