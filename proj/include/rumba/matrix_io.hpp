#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rumba/int_matrix.hpp"

namespace rumba::io {

// Matrix text format: a header line "N M", then N lines of M whitespace
// separated signed integers. Vector format: one line of integers. Lines
// whose first non-blank character is '#' are ignored in both.

IntMatrix parse_matrix(std::istream& in, const std::string& source = "<stream>");
IntVector parse_vector(std::istream& in, const std::string& source = "<stream>");

IntMatrix read_matrix(const std::filesystem::path& path);
IntVector read_vector(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const IntMatrix& m);
void write_vector(std::ostream& out, std::span<const std::int64_t> v);

void write_matrix(const std::filesystem::path& path, const IntMatrix& m);
void write_vector(const std::filesystem::path& path, std::span<const std::int64_t> v);

}  // namespace rumba::io
