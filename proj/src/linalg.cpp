#include "wigner/linalg.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "wigner/errors.hpp"

namespace wigner {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cxd scalar) {
  for (auto& v : a_) v *= scalar;
  return *this;
}

CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs) {
  CMatrix out(lhs.rows_, rhs.cols_);
  for (std::size_t i = 0; i < lhs.rows_; ++i) {
    for (std::size_t k = 0; k < lhs.cols_; ++k) {
      const cxd v = lhs(i, k);
      if (v == cxd{}) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
    }
  }
  return out;
}

cxd CMatrix::trace() const {
  cxd t{};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix lu_solve(CMatrix a, CMatrix b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw Error("lu_solve: dimension mismatch");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(a(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (best == 0.0) throw Error("lu_solve: singular matrix");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(pivot, j));
    }
    const cxd inv_piv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cxd m = a(i, k) * inv_piv;
      a(i, k) = m;
      if (m == cxd{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= m * b(k, j);
    }
  }

  // Back substitution, all right-hand sides at once.
  for (std::size_t kk = n; kk-- > 0;) {
    const cxd inv_piv = 1.0 / a(kk, kk);
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cxd s = b(kk, j);
      for (std::size_t i = kk + 1; i < n; ++i) s -= a(kk, i) * b(i, j);
      b(kk, j) = s * inv_piv;
    }
  }
  return b;
}

CMatrix inverse(const CMatrix& a) {
  return lu_solve(a, CMatrix::identity(a.rows()));
}

}  // namespace wigner
