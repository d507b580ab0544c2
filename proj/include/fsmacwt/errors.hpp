#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fsmacwt {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A scalar parameter lies outside its admissible range.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Reducible or periodic Markov chain.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// Array or alphabet sizes do not line up.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Delays supplied with d1 < d2.
class OrderingError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Time-sharing alphabet larger than the bound allows.
class CardinalityError : public Error {
public:
  using Error::Error;
};

/// Dense joint would exceed the cell-count guard.
class GuardError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Collects every invariant violation found during validation.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "validation failed";
    for (const auto& s : v) {
      out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace fsmacwt
