#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crawlcount {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed edge-list or pattern input; carries the 1-based line number.
struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

// The exact enumerator hit its work budget.
struct BudgetExceeded : Error {
  using Error::Error;
};

}  // namespace crawlcount
