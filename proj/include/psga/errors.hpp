#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace psga {

// Malformed LIBSVM input. line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An iterate or estimator left the finite range.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(std::uint64_t iteration, const std::string& what)
      : std::runtime_error("non-finite value at iteration " +
                           std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  std::uint64_t iteration() const noexcept { return iteration_; }

 private:
  std::uint64_t iteration_;
};

// SAGA gradient table would not fit into the configured budget.
class MemoryBudgetExceeded : public std::runtime_error {
 public:
  MemoryBudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : std::runtime_error("gradient table needs " + std::to_string(required) +
                           " bytes, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace psga
