#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qkg::cli::csv {

/// Minimal CSV: comma-separated fields, no quoting (our cells never
/// contain commas). Every file this tool emits must parse back through
/// read_stream identically.

std::string format_row(const std::vector<std::string>& cells);
void write_row(std::ostream& out, const std::vector<std::string>& cells);

std::vector<std::vector<std::string>> read_stream(std::istream& in);
std::vector<std::vector<std::string>> read_file(const std::string& path);

std::string cell(double v);        // %.17g, roundtrip-exact
std::string cell(std::uint64_t v);

} // namespace qkg::cli::csv
