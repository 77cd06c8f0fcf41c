#include "rumba/run_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rumba/error.hpp"
#include "rumba/matrix_io.hpp"

namespace rumba::io {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write output file '" + path.string() + "'");
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  return in;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const RunMetrics& metrics) {
  out << kMetricsHeader << '\n';
  char ms[32];
  for (const auto& row : metrics.iterations) {
    std::snprintf(ms, sizeof ms, "%.3f", row.elapsed_ms);
    out << row.step << ',' << row.iteration << ',' << row.samples_in_fiber << ','
        << row.new_points << ',' << row.cumulative_unique << ',' << row.step_new_so_far << ','
        << ms << '\n';
  }
}

void write_metrics_csv(const std::filesystem::path& path, const RunMetrics& metrics) {
  auto out = open_output(path);
  write_metrics_csv(out, metrics);
}

void write_fiber_dump(std::ostream& out, const std::vector<IntVector>& elements,
                      std::size_t dimension, std::uint64_t seed) {
  out << "# M=" << dimension << " count=" << elements.size() << " seed=" << seed << '\n';
  for (const auto& e : elements) write_vector(out, e);
}

void write_fiber_dump(std::ostream& out, const FiberStore& fiber, std::uint64_t seed) {
  out << "# M=" << fiber.dimension() << " count=" << fiber.size() << " seed=" << seed << '\n';
  for (std::size_t i = 0; i < fiber.size(); ++i) write_vector(out, fiber.element(i));
}

void write_fiber_dump(const std::filesystem::path& path, const FiberStore& fiber,
                      std::uint64_t seed) {
  auto out = open_output(path);
  write_fiber_dump(out, fiber, seed);
}

void write_fiber_dump(const std::filesystem::path& path, const std::vector<IntVector>& elements,
                      std::size_t dimension, std::uint64_t seed) {
  auto out = open_output(path);
  write_fiber_dump(out, elements, dimension, seed);
}

FiberDump read_fiber_dump(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string header;
  if (!std::getline(in, header)) throw InputError(path.string() + ": empty fiber dump");
  FiberDump dump;
  std::size_t count = 0;
  unsigned long long m = 0, n = 0, seed = 0;
  if (std::sscanf(header.c_str(), "# M=%llu count=%llu seed=%llu", &m, &n, &seed) != 3)
    throw InputError(path.string() + ": bad fiber dump header '" + header + "'");
  dump.dimension = m;
  count = n;
  dump.seed = seed;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    dump.elements.push_back(parse_vector(ss, path.string()));
    if (dump.elements.back().size() != dump.dimension)
      throw InputError(path.string() + ": element of wrong length");
  }
  if (dump.elements.size() != count)
    throw InputError(path.string() + ": header count does not match the element lines");
  return dump;
}

std::vector<double> read_real_vector(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw InputError(path.string() + ": bad real number '" + tok + "'");
      }
    }
  }
  if (out.empty()) throw InputError(path.string() + ": empty vector");
  return out;
}

}  // namespace rumba::io
