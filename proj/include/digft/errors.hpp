#pragma once

#include <stdexcept>
#include <string>

namespace digft {

// Malformed input text (edge lists, CSV matrices, signal files). Carries the
// 1-based line number when one is known.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}

  int line() const { return line_; }

private:
  int line_;
};

// A computation failed for numerical reasons (degenerate spectrum, solver
// breakdown). Distinct from usage errors so the CLI can map it to exit code 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace digft
