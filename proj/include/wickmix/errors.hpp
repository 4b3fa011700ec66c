#pragma once

#include <stdexcept>
#include <string>

namespace wickmix {

/// Precondition of a moment routine not met (dimension mismatch, bad index,
/// non-symmetric matrix, repeated entries where distinct ones are required).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a special function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result would exceed the largest finite double.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Adaptive quadrature did not reach its tolerance within the refinement cap.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested a sampler for a model that has no sampling route.
class UnsupportedSampling : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rejection sampler whose acceptance rate is too low to be usable.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wickmix
