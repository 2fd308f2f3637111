#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wigner {

/// Base class of all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the requested operation
/// (e.g. a Stieltjes-transform argument too close to [-2, 2]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The implicit QL sweep did not deflate an eigenvalue within the budget.
class NonConvergence : public Error {
 public:
  NonConvergence(std::size_t index, std::size_t sweeps)
      : Error("eigenvalue " + std::to_string(index) + " did not converge after " +
              std::to_string(sweeps) + " QL sweeps"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Consecutive sorted eigenvalues of a quaternion embedding split wider than
/// the solver-accuracy threshold allows.
class PairingViolation : public Error {
 public:
  PairingViolation(double gap, double tolerance)
      : Error("Kramers pair split by " + std::to_string(gap) + " (tolerance " +
              std::to_string(tolerance) + ")"),
        gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// The Chebyshev coefficient tail has not fallen below the decay threshold;
/// the truncation order is too small for this test function.
class TailNotDecayed : public Error {
 public:
  TailNotDecayed(double tail, std::size_t lmax)
      : Error("coefficient tail " + std::to_string(tail) + " at truncation L=" +
              std::to_string(lmax) + " has not decayed below 1e-8"),
        tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

/// The covariance kernel was evaluated on (or too close to) its logarithmic
/// diagonal t = s.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

/// Two quadrature orders disagree beyond the advertised tolerance.
class QuadratureNotConverged : public Error {
 public:
  explicit QuadratureNotConverged(double delta)
      : Error("quadrature orders disagree by " + std::to_string(delta)),
        delta_(delta) {}
  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

/// The integration contour passes too close to the spectrum edge.
class ContourTooClose : public Error {
 public:
  using Error::Error;
};

/// A matrix argument lacks the block structure the operation requires.
class StructureError : public Error {
 public:
  using Error::Error;
};

}  // namespace wigner
