#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "nmcopula/matrix.hpp"

namespace nmcopula::cli {

/// A parsed numeric CSV: mandatory header row, comma separated, decimal
/// point. Blank lines are skipped; surrounding whitespace is ignored.
struct CsvTable {
  std::vector<std::string> header;
  RowMatrix values;
};

/// Throws ParseError naming the 1-based line (and column) at fault.
CsvTable parse_csv(std::istream& in);

/// Throws FileNotFound when the file cannot be opened.
CsvTable read_csv(const std::filesystem::path& path);

/// Resolves a selector list ("x,y" by name or "1,2" by 1-based position)
/// to column indices. An empty selector picks the first two columns.
std::vector<std::size_t> select_columns(const std::vector<std::string>& header,
                                        const std::string& selector);

/// Writes a header and rows with round-trip precision.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const RowMatrix& values);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace nmcopula::cli
