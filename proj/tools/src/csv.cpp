#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "nmcopula/error.hpp"

namespace nmcopula::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::vector<double> data;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (table.header.empty()) {
      for (const auto& f : fields) {
        if (f.empty()) {
          raise(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": empty column name in header");
        }
      }
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      raise(ErrorCode::ParseError,
            "line " + std::to_string(line_no) + ": expected " +
                std::to_string(table.header.size()) + " fields, found " +
                std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto& f = fields[c];
      double v = 0.0;
      const char* first = f.data();
      const char* last = f.data() + f.size();
      if (!f.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (f.empty() || ec != std::errc() || ptr != last) {
        raise(ErrorCode::ParseError,
              "line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                  " (" + table.header[c] + "): cannot parse '" + f + "' as a number");
      }
      data.push_back(v);
    }
    ++rows;
  }
  if (table.header.empty()) raise(ErrorCode::ParseError, "line 1: missing header row");
  table.values = RowMatrix(rows, table.header.size(), std::move(data));
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::FileNotFound, "cannot open " + path.string());
  return parse_csv(in);
}

std::vector<std::size_t> select_columns(const std::vector<std::string>& header,
                                        const std::string& selector) {
  std::vector<std::size_t> out;
  if (trim(selector).empty()) {
    if (header.size() < 2) {
      raise(ErrorCode::PreconditionViolated, "input needs at least two columns");
    }
    return {0, 1};
  }
  for (const auto& item : split(selector)) {
    const auto named = std::find(header.begin(), header.end(), item);
    if (named != header.end()) {
      out.push_back(static_cast<std::size_t>(named - header.begin()));
      continue;
    }
    std::size_t pos = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), pos);
    if (ec != std::errc() || ptr != item.data() + item.size() || pos < 1 ||
        pos > header.size()) {
      raise(ErrorCode::PreconditionViolated, "unknown column '" + item + "'");
    }
    out.push_back(pos - 1);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const RowMatrix& values) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t c = 0; c < values.cols(); ++c) {
      out << (c ? "," : "") << format_double(values(i, c));
    }
    out << '\n';
  }
}

}  // namespace nmcopula::cli
