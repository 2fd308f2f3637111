#include "wigner/quaternion.hpp"

#include <cmath>

#include "wigner/errors.hpp"

namespace wigner {

double quat_norm(const Quaternion& q) { return std::sqrt(q.norm2()); }

std::array<cxd, 4> embed(const Quaternion& q) {
  const cxd alpha{q.a, q.b};
  const cxd beta{q.c, q.d};
  return {alpha, beta, cxd{-q.c, q.d}, std::conj(alpha)};
}

std::size_t SelfDualMatrix::pack(std::size_t j, std::size_t k) const {
  // j < k; row-by-row packing of the strict upper triangle.
  return j * n_ - j * (j + 1) / 2 + (k - j - 1);
}

double SelfDualMatrix::frobenius_norm() const {
  // Frobenius norm of the 2n x 2n embedding: each diagonal entry appears
  // twice, each quaternion block contributes 2*|q|^2 on both sides.
  double s = 0.0;
  for (double t : diag_) s += 2.0 * t * t;
  for (const auto& q : upper_) s += 4.0 * q.norm2();
  return std::sqrt(s);
}

ComplexHermitian ComplexHermitian::from_matrix(const CMatrix& m, double tol) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw StructureError("Hermitian matrix must be square");
  const double scale = std::max(1.0, m.frobenius_norm());
  ComplexHermitian out(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(m(j, j).imag()) > tol * scale)
      throw StructureError("diagonal entry has nonzero imaginary part");
    for (std::size_t k = j; k < n; ++k) {
      if (std::abs(m(j, k) - std::conj(m(k, j))) > tol * scale)
        throw StructureError("matrix is not Hermitian");
      if (k == j)
        out.set(j, j, m(j, j).real());
      else
        out.set(j, k, 0.5 * (m(j, k) + std::conj(m(k, j))));
    }
  }
  return out;
}

void ComplexHermitian::set(std::size_t j, std::size_t k, cxd value) {
  if (j == k) value = cxd{value.real(), 0.0};
  a_[j * dim_ + k] = value;
  a_[k * dim_ + j] = std::conj(value);
}

CMatrix ComplexHermitian::to_matrix() const {
  CMatrix m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t k = 0; k < dim_; ++k) m(j, k) = entry(j, k);
  return m;
}

double ComplexHermitian::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexHermitian::trace() const {
  double t = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) t += entry(j, j).real();
  return t;
}

ComplexHermitian embed_matrix(const SelfDualMatrix& m) {
  const std::size_t n = m.n();
  ComplexHermitian out(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    out.set(2 * j, 2 * j, m.diagonal(j));
    out.set(2 * j + 1, 2 * j + 1, m.diagonal(j));
    for (std::size_t k = j + 1; k < n; ++k) {
      const auto block = embed(m.upper(j, k));
      out.set(2 * j, 2 * k, block[0]);
      out.set(2 * j, 2 * k + 1, block[1]);
      out.set(2 * j + 1, 2 * k, block[2]);
      out.set(2 * j + 1, 2 * k + 1, block[3]);
    }
  }
  return out;
}

bool is_type_t(const std::array<cxd, 4>& block, double tol) {
  return std::abs(block[1]) <= tol && std::abs(block[2]) <= tol &&
         std::abs(block[0] - block[3]) <= tol;
}

bool is_type_i(const CMatrix& m, double tol) {
  const std::size_t dim = m.rows();
  if (m.cols() != dim || dim % 2 != 0) return false;
  const std::size_t n = dim / 2;
  for (std::size_t j = 0; j < n; ++j) {
    const std::array<cxd, 4> diag{m(2 * j, 2 * j), m(2 * j, 2 * j + 1),
                                  m(2 * j + 1, 2 * j), m(2 * j + 1, 2 * j + 1)};
    if (!is_type_t(diag, tol)) return false;
    for (std::size_t k = j + 1; k < n; ++k) {
      const cxd a = m(2 * j, 2 * k);
      const cxd b = m(2 * j, 2 * k + 1);
      const cxd c = m(2 * j + 1, 2 * k);
      const cxd d = m(2 * j + 1, 2 * k + 1);
      if (std::abs(m(2 * k, 2 * j) - d) > tol) return false;
      if (std::abs(m(2 * k, 2 * j + 1) + b) > tol) return false;
      if (std::abs(m(2 * k + 1, 2 * j) + c) > tol) return false;
      if (std::abs(m(2 * k + 1, 2 * j + 1) - a) > tol) return false;
    }
  }
  return true;
}

}  // namespace wigner
