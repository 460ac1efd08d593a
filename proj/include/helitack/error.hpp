#pragma once

#include <stdexcept>
#include <string>

namespace helitack {

// Malformed input document (bad JSON, missing or mistyped key).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numeric kernel called outside its domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Caller broke a lifecycle precondition (stepping a finished episode, ...).
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Sampler could not reach its target inside the attempt budget.
class SaturationError : public std::runtime_error {
public:
  SaturationError(const std::string& what, std::size_t achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  std::size_t achieved() const noexcept { return achieved_; }

private:
  std::size_t achieved_;
};

} // namespace helitack
