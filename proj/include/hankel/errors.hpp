#pragma once

#include <stdexcept>
#include <string>

namespace hankel {

/// Argument outside the mathematical domain of an operation (negative x,
/// order below -1/2, operator/function order mismatch, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical procedure could not deliver a result it is contractually
/// required to deliver (as opposed to reporting converged=false).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad user input: unparseable config, unknown names, missing fields.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace hankel
