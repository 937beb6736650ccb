#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cns {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterate or objective value became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what, std::size_t stage = 0)
      : std::runtime_error(what), stage_(stage) {}
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::size_t stage_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A budget row was evaluated outside its feasibility region.
class InfeasibleBudget : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// auto_t1 hit its cap before the stage-1 reduction test passed.
class BudgetEstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The strongly convex driver was asked to solve a non-strongly-convex problem or vice versa.
class WrongDriverError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TuningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool ok, const char* msg) {
  if (!ok) throw ContractViolation(msg);
}
}  // namespace detail

}  // namespace cns
