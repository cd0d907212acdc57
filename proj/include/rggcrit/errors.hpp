#pragma once

#include <stdexcept>
#include <string>

namespace rggcrit {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The asymptotic radius formula is undefined at this n (non-positive
/// numerator). Carries the smallest n for which it becomes admissible.
class RegimeError : public std::domain_error {
 public:
  RegimeError(const std::string& what, double min_admissible_n)
      : std::domain_error(what), min_admissible_n_(min_admissible_n) {}

  [[nodiscard]] double min_admissible_n() const noexcept { return min_admissible_n_; }

 private:
  double min_admissible_n_;
};

/// A point set too small for the requested critical radius (e.g. k+1 >= n).
class DegenerateInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rggcrit
