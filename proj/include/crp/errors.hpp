#pragma once

#include <stdexcept>
#include <string>

namespace crp {

struct DistributionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// p places mass on a symbol the code (or reference distribution) excludes.
struct AbsoluteContinuityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NotEncodableError : std::domain_error {
  using std::domain_error::domain_error;
};

struct MalformedCodewordError : std::domain_error {
  using std::domain_error::domain_error;
};

// A distribution assigns mass to a range the sequence/tree never solves.
struct CoverageError : std::domain_error {
  using std::domain_error::domain_error;
};

// Exhaustive enumeration requested beyond the configured limit.
struct InfeasibleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace crp
