#ifndef HSNOC_ERRORS_HPP
#define HSNOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hsnoc {

/// Bad parameter values: out-of-range router, zero width, rate above one.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent or malformed experiment configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input data: traces, profiles, plans (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search asked to handle more candidates than its limit.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsnoc

#endif  // HSNOC_ERRORS_HPP
