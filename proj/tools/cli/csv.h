#ifndef QINI_TOOLS_CSV_H_
#define QINI_TOOLS_CSV_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qini::cli {

// A headed CSV file held as strings. Column order is free; lookups go by
// header name.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> Find(const std::string& name) const;
  // Parses every cell of `column` as a double. Throws CsvError naming the
  // 1-based file line and the column on failure.
  std::vector<double> Numbers(std::size_t column) const;
  std::vector<int> Integers(std::size_t column) const;
};

// Reads a comma-separated file with a mandatory header line. Blank lines are
// skipped; CRLF endings and double-quoted fields are accepted. Throws
// CsvError on a missing file, an empty file, duplicate header names or rows
// whose field count differs from the header.
CsvTable ReadCsv(const std::string& path);

// 17 significant digits, which round-trips every double.
std::string FormatDouble(double value);

// Writes header + rows; every cell is already formatted.
void WriteCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

}  // namespace qini::cli

#endif  // QINI_TOOLS_CSV_H_
