#pragma once

#include <stdexcept>
#include <string>

namespace lf {

// A mathematical precondition of an operation does not hold for the given input.
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

// The input lies outside the supported class (representation, size, budget).
class UnsupportedError : public std::domain_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::domain_error(what) {}
};

// An internal consistency check failed; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InternalError(what);
}

}  // namespace lf
