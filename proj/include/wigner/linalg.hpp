#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wigner {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major. Minimal support for the structure
/// predicates, the resolvent checks, and test oracles; not a general
/// linear-algebra type.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  cxd& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cxd& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  cxd* data() noexcept { return a_.data(); }
  const cxd* data() const noexcept { return a_.data(); }

  CMatrix& operator+=(const CMatrix& rhs);
  CMatrix& operator-=(const CMatrix& rhs);
  CMatrix& operator*=(cxd scalar);

  friend CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs);

  cxd trace() const;
  double frobenius_norm() const;
  CMatrix adjoint() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cxd> a_;
};

/// Solves A x = b for several right-hand sides by LU with partial pivoting.
/// b has one column per right-hand side. Throws Error on singular input.
CMatrix lu_solve(CMatrix a, CMatrix b);

/// Dense inverse through lu_solve with the identity as right-hand side.
CMatrix inverse(const CMatrix& a);

}  // namespace wigner
