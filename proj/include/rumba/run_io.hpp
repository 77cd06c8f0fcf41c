#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rumba/fiber_store.hpp"
#include "rumba/sampler.hpp"

namespace rumba::io {

/// Fixed metrics.csv header, one data row per (step, iteration).
inline constexpr const char* kMetricsHeader =
    "step,iteration,samples_in_fiber,new_points,cumulative_unique,step_new_so_far,elapsed_ms";

void write_metrics_csv(std::ostream& out, const RunMetrics& metrics);
void write_metrics_csv(const std::filesystem::path& path, const RunMetrics& metrics);

/// Fiber dump: "# M=<M> count=<n> seed=<seed>", then one element per line.
void write_fiber_dump(std::ostream& out, const std::vector<IntVector>& elements,
                      std::size_t dimension, std::uint64_t seed);
void write_fiber_dump(std::ostream& out, const FiberStore& fiber, std::uint64_t seed);
void write_fiber_dump(const std::filesystem::path& path, const FiberStore& fiber,
                      std::uint64_t seed);
void write_fiber_dump(const std::filesystem::path& path, const std::vector<IntVector>& elements,
                      std::size_t dimension, std::uint64_t seed);

struct FiberDump {
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  std::vector<IntVector> elements;
};
FiberDump read_fiber_dump(const std::filesystem::path& path);

/// Whitespace-separated reals ('#' comments allowed), for per-component priors.
std::vector<double> read_real_vector(const std::filesystem::path& path);

}  // namespace rumba::io
