#ifndef QBD_ERRORS_HPP_
#define QBD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qbd {

// Argument outside the mathematical domain of an operation (nonpositive
// Gamma argument, point outside the swallow tail, inadmissible parameters).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A rational expression hit a vanishing denominator.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// (n, k) outside the index range where a coefficient family is defined.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller violated a documented precondition (e.g. special-gamma formulas
// requested for gamma not in {-1/2, 1/2}).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature or node computation did not reach the requested accuracy.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qbd

#endif  // QBD_ERRORS_HPP_
