#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polydisc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the admissible domain of a space or operator
/// (beta <= -1, alpha <= 0 where alpha > 0 is required, ...).
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: wrong array lengths, non-finite coefficients,
/// non-monotone radius grids.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation that would exceed the desk-scale budget (dimension bounds).
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

/// No growth-exponent formula or norm implementation exists for the family.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Parameters violate a hypothesis of a multiplier theorem.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Kernel truncation too short for the requested radius.
class TruncationInsufficient : public Error {
 public:
  TruncationInsufficient(const std::string& what, std::vector<std::size_t> recommended)
      : Error(what), recommended_(std::move(recommended)) {}

  const std::vector<std::size_t>& recommended() const noexcept { return recommended_; }

 private:
  std::vector<std::size_t> recommended_;
};

}  // namespace polydisc
