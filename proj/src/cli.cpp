#include "rumba/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rumba/error.hpp"
#include "rumba/matrix_io.hpp"
#include "rumba/run_io.hpp"

namespace rumba::cli {

namespace fs = std::filesystem;

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("RUMBA_LOG");
  if (env == nullptr) return LogLevel::Info;
  const std::string v(env);
  if (v == "quiet" || v == "0" || v == "off") return LogLevel::Quiet;
  if (v == "debug" || v == "2") return LogLevel::Debug;
  return LogLevel::Info;
}

void log(LogLevel level, const std::string& msg) {
  if (level <= log_level()) std::cerr << "rumba: " << msg << '\n';
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw InputError(std::string("missing --") + what + " file");
  if (!fs::exists(p)) throw InputError(std::string(what) + " file '" + p.string() + "' not found");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw InputError("cannot create output directory '" + dir.string() + "'");
}

std::vector<double> broadcast_prior(const std::optional<double>& scalar, const fs::path& file,
                                    std::size_t k, const char* name) {
  if (!file.empty()) {
    auto v = io::read_real_vector(file);
    if (v.size() != k)
      throw InputError(std::string(name) + " file has " + std::to_string(v.size()) +
                       " values, expected K = " + std::to_string(k));
    return v;
  }
  if (scalar) return std::vector<double>(k, *scalar);
  return {};
}

}  // namespace

LoadedInstance load_instance(const InstanceSpec& spec) {
  LoadedInstance li;
  const std::string& f = spec.family;
  if (f.empty()) {
    require_file(spec.matrix, "matrix");
    require_file(spec.rhs, "rhs");
    require_file(spec.x0, "x0");
    li.model.A = io::read_matrix(spec.matrix);
    li.model.u = io::read_vector(spec.rhs);
    li.model.x0 = io::read_vector(spec.x0);
    li.model.label = spec.matrix.filename().string();
  } else if (f == "ds98") {
    li.model = models::ds98_model();
  } else if (f == "independence") {
    require_file(spec.table, "table");
    li.model = models::independence_model(io::read_matrix(spec.table));
  } else if (f == "no3way") {
    li.model = models::no3way_model(models::sparse_table(spec.q, spec.sparsity, spec.table_seed));
  } else if (f == "ak") {
    li.model = models::ak_model(spec.k);
  } else {
    throw InputError("unknown family '" + f + "' (expected ds98, independence, no3way or ak)");
  }
  li.model.validate();

  if (!spec.basis.empty()) {
    require_file(spec.basis, "basis");
    li.basis = LatticeBasis::user_supplied(li.model.A, io::read_matrix(spec.basis));
  } else if (li.model.structured_basis) {
    li.basis = *li.model.structured_basis;
  } else {
    li.basis = kernel_lattice_basis(li.model.A, KernelOptions{spec.reduce_basis});
  }

  if (f == "ak") {
    if (spec.ak_start == "x0") {
      li.starts = {models::ak_x0(spec.k)};
    } else if (spec.ak_start == "x1") {
      li.starts = {models::ak_x1(spec.k)};
    } else if (spec.ak_start == "both") {
      li.starts = {models::ak_x0(spec.k), models::ak_x1(spec.k)};
    } else {
      throw InputError("--start must be x0, x1 or both");
    }
    li.model.x0 = li.starts.front();
  } else {
    li.starts = {li.model.x0};
  }
  return li;
}

RunOutcome cmd_run(const RunSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  const LoadedInstance inst = load_instance(spec.instance);
  const std::size_t k = inst.basis.size();
  RunConfig config = spec.config;
  if (auto v = broadcast_prior(spec.alpha0, spec.alpha0_file, k, "alpha0"); !v.empty())
    config.alpha0_plus = config.alpha0_minus = v;
  if (auto v = broadcast_prior(spec.beta0, spec.beta0_file, k, "beta0"); !v.empty())
    config.beta0_plus = config.beta0_minus = v;
  config.validate(k);
  if (spec.replicates < 1) throw InputError("--replicates must be at least 1");

  const std::size_t reps = std::max(spec.replicates, inst.starts.size());
  RunOutcome outcome;
  outcome.basis_size = k;
  outcome.replicates.resize(reps);
  outcome.seeds.resize(reps);
  std::vector<std::exception_ptr> failures(reps);
  log(LogLevel::Info, inst.model.label + ": M=" + std::to_string(inst.model.A.cols()) +
                          " K=" + std::to_string(k) + " replicates=" + std::to_string(reps));

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(reps); ++r) {
    try {
      RunConfig c = config;
      c.seed = config.seed + static_cast<std::uint64_t>(r);
      outcome.seeds[r] = c.seed;
      const IntVector& start = inst.starts[r % inst.starts.size()];
      outcome.replicates[r] = rumba(c, inst.model.A, inst.model.u, start, inst.basis);
    } catch (...) {
      failures[r] = std::current_exception();
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  for (const auto& rep : outcome.replicates) outcome.merged.merge(rep.fiber);
  outcome.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!spec.quiet && log_level() >= LogLevel::Info)
    for (std::size_t r = 0; r < reps; ++r)
      for (const auto& s : outcome.replicates[r].metrics.steps)
        log(LogLevel::Debug, "replicate " + std::to_string(r) + " step " +
                                 std::to_string(s.step) + ": new " +
                                 std::to_string(s.step_new) + ", unique " +
                                 std::to_string(s.cumulative_unique));

  ensure_dir(spec.out);
  if (spec.emit.metrics)
    for (std::size_t r = 0; r < reps; ++r)
      io::write_metrics_csv(spec.out / (r == 0 ? std::string("metrics.csv")
                                               : "metrics_r" + std::to_string(r) + ".csv"),
                            outcome.replicates[r].metrics);
  if (spec.emit.fiber) io::write_fiber_dump(spec.out / "fiber.txt", outcome.merged, config.seed);
  if (spec.emit.summary) {
    nlohmann::ordered_json j;
    j["instance"] = inst.model.label;
    j["M"] = inst.model.A.cols();
    j["K"] = k;
    j["J"] = config.samples;
    j["I"] = config.iterations;
    j["T"] = config.steps;
    j["seeds"] = outcome.seeds;
    j["replicates"] = reps;
    j["runtime_seconds"] = outcome.runtime_seconds;
    j["unique_elements"] = outcome.merged.size();
    std::vector<std::size_t> per;
    for (const auto& rep : outcome.replicates) per.push_back(rep.fiber.size());
    j["replicate_unique_elements"] = per;
    std::ofstream out(spec.out / "summary.json");
    if (!out) throw InputError("cannot write summary.json in '" + spec.out.string() + "'");
    out << j.dump(2) << '\n';
  }
  log(LogLevel::Info, "unique elements " + std::to_string(outcome.merged.size()) + " in " +
                          std::to_string(outcome.runtime_seconds) + " s");
  return outcome;
}

std::size_t cmd_enumerate(const EnumerateSpec& spec) {
  const LoadedInstance inst = load_instance(spec.instance);
  const auto& m = inst.model;
  oracle::BoxBound bound;
  if (spec.bound == "auto") {
    bound = oracle::BoxBound::automatic();
  } else if (!spec.bound.empty() &&
             spec.bound.find_first_not_of("0123456789") == std::string::npos) {
    bound = oracle::BoxBound::uniform(m.A.cols(), std::stoll(spec.bound));
  } else {
    require_file(spec.bound, "bound");
    bound = oracle::BoxBound::explicit_bounds(io::read_vector(spec.bound));
  }
  const auto fiber = oracle::enumerate_fiber(m.A, m.u, bound, spec.limit);
  ensure_dir(spec.out);
  io::write_fiber_dump(spec.out / "fiber.txt", fiber, m.A.cols(), 0);
  return fiber.size();
}

void cmd_gen(const InstanceSpec& spec, const fs::path& out) {
  if (spec.family.empty()) throw InputError("gen needs --family");
  const LoadedInstance inst = load_instance(spec);
  ensure_dir(out);
  io::write_matrix(out / "A.txt", inst.model.A);
  io::write_vector(out / "u.txt", inst.model.u);
  io::write_vector(out / "x0.txt", inst.model.x0);
  if (inst.model.structured_basis) io::write_matrix(out / "B.txt", inst.model.structured_basis->matrix());
  if (spec.family == "ak") io::write_vector(out / "x1.txt", models::ak_x1(spec.k));
}

namespace {

void add_instance_options(CLI::App& cmd, InstanceSpec& inst) {
  cmd.add_option("--family", inst.family, "Built-in instance: ds98, independence, no3way, ak");
  cmd.add_option("--Q", inst.q, "Table size for no3way");
  cmd.add_option("--S", inst.sparsity, "Sparsity in (0, 1] for no3way");
  cmd.add_option("--table-seed", inst.table_seed, "Seed for the no3way table generator");
  cmd.add_option("--k", inst.k, "Family index for ak");
  cmd.add_option("--start", inst.ak_start, "ak starting point: x0, x1 or both");
  cmd.add_option("--table", inst.table, "Table file (matrix format) for independence");
  cmd.add_option("--matrix", inst.matrix, "Constraint matrix file");
  cmd.add_option("--rhs", inst.rhs, "Right-hand side vector file");
  cmd.add_option("--x0", inst.x0, "Feasible starting point file");
  cmd.add_option("--basis", inst.basis, "Move basis file (M x K matrix)");
  cmd.add_flag("--reduce-basis", inst.reduce_basis, "Size-reduce the computed kernel basis");
}

PiPolicy parse_pi(const std::string& s) {
  if (s == "indicator") return PiPolicy::indicator();
  if (s.rfind("fixed:", 0) == 0) {
    try {
      return PiPolicy::fixed(std::stod(s.substr(6)));
    } catch (const std::exception&) {
    }
  }
  throw InputError("--pi must be 'indicator' or 'fixed:<p>'");
}

// Accepts a number or a file path.
void parse_prior(const std::string& s, std::optional<double>& scalar, fs::path& file) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) {
      scalar = v;
      return;
    }
  } catch (const std::exception&) {
  }
  require_file(s, "prior");
  file = s;
}

void apply_config_file(const fs::path& path, const CLI::App& cmd, RunSpec& spec,
                       std::string& pi, std::string& alpha, std::string& beta) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file '" + path.string() + "': " + e.what());
  }
  auto take = [&](const char* key, const char* flag, auto& dst) {
    if (j.contains(key) && cmd.count(flag) == 0) j.at(key).get_to(dst);
  };
  try {
    take("T", "-T", spec.config.steps);
    take("I", "-I", spec.config.iterations);
    take("J", "-J", spec.config.samples);
    take("seed", "--seed", spec.config.seed);
    take("replicates", "--replicates", spec.replicates);
    take("pi", "--pi", pi);
    if (j.contains("alpha0") && cmd.count("--alpha0") == 0)
      alpha = j["alpha0"].is_number() ? std::to_string(j["alpha0"].get<double>())
                                      : j["alpha0"].get<std::string>();
    if (j.contains("beta0") && cmd.count("--beta0") == 0)
      beta = j["beta0"].is_number() ? std::to_string(j["beta0"].get<double>())
                                    : j["beta0"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file '" + path.string() + "': " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rumba: adaptive sampler for lattice points of a polytope"};
  app.require_subcommand(1);

  RunSpec run;
  std::string pi = "indicator", alpha, beta, emit = "metrics,fiber,summary", kernel = "parallel";
  fs::path config_file;
  auto* run_cmd = app.add_subcommand("run", "Sample a fiber");
  add_instance_options(*run_cmd, run.instance);
  run_cmd->add_option("-T", run.config.steps, "Steps");
  run_cmd->add_option("-I", run.config.iterations, "Iterations per step");
  run_cmd->add_option("-J", run.config.samples, "Samples per iteration");
  run_cmd->add_option("--alpha0", alpha, "Prior shape: scalar or per-component file");
  run_cmd->add_option("--beta0", beta, "Prior rate: scalar or per-component file");
  run_cmd->add_option("--pi", pi, "Next-start policy: indicator or fixed:<p>");
  run_cmd->add_option("--seed", run.config.seed, "Base seed");
  run_cmd->add_option("--replicates", run.replicates, "Independent runs, merged by union");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--emit", emit, "Comma list of metrics, fiber, summary");
  run_cmd->add_option("--config", config_file, "JSON config; flags override it");
  run_cmd->add_option("--kernel", kernel, "Sample loop kernel: parallel or serial");
  run_cmd->add_flag("--quiet", run.quiet, "No per-step progress lines");

  EnumerateSpec en;
  auto* en_cmd = app.add_subcommand("enumerate", "Enumerate a small fiber exactly");
  add_instance_options(*en_cmd, en.instance);
  en_cmd->add_option("--bound", en.bound, "auto, a uniform integer bound, or a bound file");
  en_cmd->add_option("--limit", en.limit, "Maximum number of elements");
  en_cmd->add_option("--out", en.out, "Output directory");

  InstanceSpec gen;
  fs::path gen_out = ".";
  auto* gen_cmd = app.add_subcommand("gen", "Write a built-in instance to files");
  add_instance_options(*gen_cmd, gen);
  std::string gen_family;
  gen_cmd->add_option("name", gen_family, "Built-in instance (same as --family)");
  gen_cmd->add_option("--seed", gen.table_seed, "Same as --table-seed");
  gen_cmd->add_option("--out", gen_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::Input);
  }

  try {
    if (*run_cmd) {
      if (!config_file.empty()) apply_config_file(config_file, *run_cmd, run, pi, alpha, beta);
      run.config.pi = parse_pi(pi);
      if (!alpha.empty()) parse_prior(alpha, run.alpha0, run.alpha0_file);
      if (!beta.empty()) parse_prior(beta, run.beta0, run.beta0_file);
      if (kernel == "serial") {
        run.config.kernel = Kernel::Serial;
      } else if (kernel != "parallel") {
        throw InputError("--kernel must be parallel or serial");
      }
      run.emit = Emit{false, false, false};
      std::stringstream ss(emit);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item == "metrics") run.emit.metrics = true;
        else if (item == "fiber") run.emit.fiber = true;
        else if (item == "summary") run.emit.summary = true;
        else throw InputError("unknown --emit item '" + item + "'");
      }
      const auto outcome = cmd_run(run);
      std::cout << "unique_elements " << outcome.merged.size() << '\n';
    } else if (*en_cmd) {
      std::cout << "count " << cmd_enumerate(en) << '\n';
    } else if (*gen_cmd) {
      if (!gen_family.empty()) gen.family = gen_family;
      cmd_gen(gen, gen_out);
    }
  } catch (const Error& e) {
    std::cerr << "rumba: error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "rumba: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rumba::cli
