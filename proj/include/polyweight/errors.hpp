#pragma once

#include <stdexcept>
#include <string>

namespace polyweight {

struct NoBracketError : std::runtime_error {
  explicit NoBracketError(const std::string& m) : std::runtime_error(m) {}
};

struct AtSingularityError : std::runtime_error {
  explicit AtSingularityError(const std::string& m) : std::runtime_error(m) {}
};

struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& m) : std::runtime_error(m) {}
};

struct NotFoundError : std::runtime_error {
  explicit NotFoundError(const std::string& m) : std::runtime_error(m) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

struct EmptyComplementError : std::runtime_error {
  explicit EmptyComplementError(const std::string& m) : std::runtime_error(m) {}
};

struct InfeasibleDegreeError : std::runtime_error {
  explicit InfeasibleDegreeError(const std::string& m) : std::runtime_error(m) {}
};

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& m, std::size_t pos)
      : std::runtime_error(m + " (at column " + std::to_string(pos + 1) + ")"),
        position(pos) {}
};

}  // namespace polyweight
