#ifndef QINI_ERROR_H_
#define QINI_ERROR_H_

#include <stdexcept>
#include <string>

namespace qini {

// Raised when an argument violates a documented precondition (non-positive
// cost, out-of-range probability, mismatched dimensions, ...).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the CSV layer when a file is syntactically malformed or misses a
// required column. `row` is 1-based and counts the header line; 0 means the
// problem is not tied to a row.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& message, std::size_t row = 0,
           std::string column = {})
      : std::runtime_error(message), row_(row), column_(std::move(column)) {}

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace qini

#endif  // QINI_ERROR_H_
