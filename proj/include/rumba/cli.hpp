#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rumba/lattice.hpp"
#include "rumba/models.hpp"
#include "rumba/oracle.hpp"
#include "rumba/sampler.hpp"

namespace rumba::cli {

/// Where a problem instance comes from: a built-in family or matrix files.
struct InstanceSpec {
  std::string family;  // ds98, independence, no3way, ak; empty for files
  std::size_t q = 5;
  double sparsity = 1.0;
  std::uint64_t table_seed = 1;
  std::size_t k = 10;
  std::string ak_start = "x0";  // x0, x1 or both
  std::filesystem::path table;  // independence family
  std::filesystem::path matrix, rhs, x0, basis;
  bool reduce_basis = false;
};

struct LoadedInstance {
  models::ModelInstance model;
  LatticeBasis basis;
  /// Starting points; replicate r starts from starts[r % starts.size()].
  std::vector<IntVector> starts;
};

LoadedInstance load_instance(const InstanceSpec& spec);

struct Emit {
  bool metrics = true;
  bool fiber = true;
  bool summary = true;
};

struct RunSpec {
  InstanceSpec instance;
  RunConfig config;
  /// Scalar priors broadcast to every component once K is known.
  std::optional<double> alpha0, beta0;
  std::filesystem::path alpha0_file, beta0_file;
  std::size_t replicates = 1;
  std::filesystem::path out = ".";
  Emit emit;
  bool quiet = false;
};

struct RunOutcome {
  std::vector<RunResult> replicates;
  std::vector<std::uint64_t> seeds;
  FiberStore merged;  // union over replicates, replicate order then insertion order
  double runtime_seconds = 0.0;
  std::size_t basis_size = 0;
};

/// Replicate r runs with seed = config.seed + r on its own thread.
RunOutcome cmd_run(const RunSpec& spec);

struct EnumerateSpec {
  InstanceSpec instance;
  std::string bound = "auto";  // auto, an integer, or a file of bounds
  std::size_t limit = oracle::kDefaultLimit;
  std::filesystem::path out = ".";
};

/// Writes fiber.txt (sorted, seed=0) and returns the element count.
std::size_t cmd_enumerate(const EnumerateSpec& spec);

/// Writes A.txt, u.txt, x0.txt (+ B.txt for no3way, x1.txt for ak).
void cmd_gen(const InstanceSpec& spec, const std::filesystem::path& out);

/// Full command-line entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace rumba::cli
