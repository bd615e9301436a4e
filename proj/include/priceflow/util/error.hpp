#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace priceflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inadmissible market data (parse errors, bad fields,
/// response functions that leave [0,1]).
class InstanceError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of a demand map or price response.
class DomainError : public Error {
 public:
  using Error::Error;
};

class FlowError : public Error {
 public:
  enum class Kind { kInfeasible, kNonConvexDetected, kInvalidInput };

  FlowError(Kind kind, std::string what, std::vector<int> cut = {})
      : Error(std::move(what)), kind_(kind), cut_(std::move(cut)) {}

  Kind kind() const { return kind_; }
  // Node ids on the source side of a saturated cut (kInfeasible only).
  const std::vector<int>& cut() const { return cut_; }

 private:
  Kind kind_;
  std::vector<int> cut_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class EmptyMarket : public Error {
 public:
  using Error::Error;
};

}  // namespace priceflow
