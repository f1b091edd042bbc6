#pragma once

#include <stdexcept>
#include <string>

namespace shent {

// Invalid (l, m, x) or any argument outside the mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Analysis requested above what the sampling grid resolves.
class BandLimitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Truncation order above the pyramid band limit.
class OrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fields or pyramids whose grids / channel counts do not line up.
class ShapeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Zero energy where a probability distribution is needed.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shent
