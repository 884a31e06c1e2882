#include "csv.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qini/error.h"

namespace qini::cli {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> SplitLine(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(Trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  if (quoted) throw CsvError("unterminated quote on line " + std::to_string(row), row);
  fields.push_back(Trim(field));
  return fields;
}

}  // namespace

std::optional<std::size_t> CsvTable::Find(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<double> CsvTable::Numbers(std::size_t column) const {
  std::vector<double> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& cell = rows[r][column];
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last) {
      throw CsvError("line " + std::to_string(r + 2) + ", column '" +
                         header[column] + "': cannot parse '" + cell +
                         "' as a number",
                     r + 2, header[column]);
    }
    out[r] = value;
  }
  return out;
}

std::vector<int> CsvTable::Integers(std::size_t column) const {
  const std::vector<double> values = Numbers(column);
  std::vector<int> out(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    const double v = values[r];
    if (v != std::floor(v) || std::fabs(v) > 2e9) {
      throw CsvError("line " + std::to_string(r + 2) + ", column '" +
                         header[column] + "': expected an integer",
                     r + 2, header[column]);
    }
    out[r] = static_cast<int>(v);
  }
  return out;
}

CsvTable ReadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitLine(line, line_no);
    if (!have_header) {
      std::set<std::string> seen;
      for (const auto& name : fields) {
        if (!seen.insert(name).second) {
          throw CsvError(path + ": duplicate column '" + name + "' in header",
                         line_no, name);
        }
      }
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw CsvError(path + ": line " + std::to_string(line_no) + " has " +
                         std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(table.header.size()),
                     line_no);
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw CsvError(path + ": file is empty");
  return table;
}

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void WriteCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream buf;
  auto write_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) buf << ',';
      buf << cells[i];
    }
    buf << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << buf.str();
}

}  // namespace qini::cli
