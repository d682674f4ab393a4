#pragma once

#include <stdexcept>
#include <string>

namespace gilbert {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Measure-zero input the construction refuses to tie-break: coincident
/// seeds, collinear overlapping branches, simultaneous arrivals.
class DegenerateConfiguration : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class LookupError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Monte Carlo driver could not produce a trustworthy result with the
/// requested settings (too many uncertified replicates, too few samples).
class HarnessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace gilbert
