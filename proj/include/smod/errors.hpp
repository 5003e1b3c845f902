#ifndef SMOD_ERRORS_HPP
#define SMOD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace smod {

/// Input describes an object that cannot exist (bad surface, indefinite form,
/// incompatible section data, inconsistent descriptor).
class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Operation called outside its domain (pole, missing jump, unmet precondition).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Numerical inversion or tracking failed; the message carries diagnostics.
class NoConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two independent routes disagreed. Always a bug.
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class NoPoissonStructure : public DomainError {
public:
  using DomainError::DomainError;
};

} // namespace smod

#endif
