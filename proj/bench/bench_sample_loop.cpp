// Serial reference vs OpenMP sample loop on the built-in instances.
//
//   ./rumba_bench --benchmark_filter=no3way
//   OMP_NUM_THREADS=8 ./rumba_bench

#include <benchmark/benchmark.h>

#include "rumba/lattice.hpp"
#include "rumba/models.hpp"
#include "rumba/sampler.hpp"

namespace {

struct Fixture {
  rumba::models::ModelInstance model;
  rumba::MoveSet moves;
  rumba::GammaParams params;
};

Fixture make(const rumba::models::ModelInstance& m) {
  const rumba::LatticeBasis basis =
      m.structured_basis ? *m.structured_basis : rumba::kernel_lattice_basis(m.A);
  const std::size_t k = basis.size();
  return {m, rumba::MoveSet(basis), rumba::GammaParams::uniform(k, 1.0 / k, 1.0)};
}

const Fixture& instance(int which) {
  static const Fixture ds98 = make(rumba::models::ds98_model());
  static const Fixture ak10 = make(rumba::models::ak_model(10));
  static const Fixture no3way =
      make(rumba::models::no3way_model(rumba::models::sparse_table(10, 1.0, 1)));
  switch (which) {
    case 0: return ds98;
    case 1: return ak10;
    default: return no3way;
  }
}

void run_loop(benchmark::State& state, rumba::Kernel kernel) {
  const Fixture& f = instance(static_cast<int>(state.range(0)));
  const auto samples = static_cast<std::size_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    rumba::FiberStore fiber(f.model.x0);
    auto res = rumba::sample_loop(f.model.x0, samples, f.moves, f.params, fiber,
                                  rumba::StreamKey{seed++, 1, 1}, kernel);
    benchmark::DoNotOptimize(res.new_points);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples));
}

void BM_SampleLoopSerial(benchmark::State& state) { run_loop(state, rumba::Kernel::Serial); }
void BM_SampleLoopParallel(benchmark::State& state) { run_loop(state, rumba::Kernel::Parallel); }

// range(0): 0 = ds98, 1 = ak k=10, 2 = no3way Q=10
BENCHMARK(BM_SampleLoopSerial)->ArgNames({"instance", "J"})->ArgsProduct({{0, 1, 2}, {100, 1000}});
BENCHMARK(BM_SampleLoopParallel)->ArgNames({"instance", "J"})->ArgsProduct({{0, 1, 2}, {100, 1000}});

}  // namespace

BENCHMARK_MAIN();
