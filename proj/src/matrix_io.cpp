#include "rumba/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rumba/error.hpp"

namespace rumba::io {

namespace {

bool is_comment_or_blank(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::vector<std::int64_t> parse_ints(const std::string& line, const std::string& source,
                                     std::size_t line_no) {
  std::vector<std::int64_t> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    std::int64_t v = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw InputError(source + ":" + std::to_string(line_no) + ": bad integer '" + tok +
                       "'");
    out.push_back(v);
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write output file '" + path.string() + "'");
  return out;
}

}  // namespace

IntMatrix parse_matrix(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::int64_t> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    header = parse_ints(line, source, line_no);
    break;
  }
  if (header.size() != 2 || header[0] < 0 || header[1] < 0)
    throw InputError(source + ": expected matrix header 'N M'");
  const auto rows = static_cast<std::size_t>(header[0]);
  const auto cols = static_cast<std::size_t>(header[1]);
  if (cols == 0) return IntMatrix(rows, 0);
  std::vector<std::int64_t> entries;
  entries.reserve(rows * cols);
  std::size_t got_rows = 0;
  while (got_rows < rows && std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto vals = parse_ints(line, source, line_no);
    if (vals.size() != cols)
      throw InputError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " entries, found " +
                       std::to_string(vals.size()));
    entries.insert(entries.end(), vals.begin(), vals.end());
    ++got_rows;
  }
  if (got_rows != rows)
    throw InputError(source + ": expected " + std::to_string(rows) + " rows, found " +
                     std::to_string(got_rows));
  return IntMatrix(rows, cols, std::move(entries));
}

IntVector parse_vector(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  IntVector out;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto vals = parse_ints(line, source, line_no);
    out.insert(out.end(), vals.begin(), vals.end());
  }
  if (out.empty()) throw InputError(source + ": empty vector");
  return out;
}

IntMatrix read_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_matrix(in, path.string());
}

IntVector read_vector(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_vector(in, path.string());
}

void write_matrix(std::ostream& out, const IntMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  if (m.cols() == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c);
    out << '\n';
  }
}

void write_vector(std::ostream& out, std::span<const std::int64_t> v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  out << '\n';
}

void write_matrix(const std::filesystem::path& path, const IntMatrix& m) {
  auto out = open_output(path);
  write_matrix(out, m);
}

void write_vector(const std::filesystem::path& path, std::span<const std::int64_t> v) {
  auto out = open_output(path);
  write_vector(out, v);
}

}  // namespace rumba::io
