#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wigner/linalg.hpp"

namespace wigner {

/// Absolute tolerance of the structure predicates. Well above accumulated
/// rounding of O(n) dense solves, far below any genuine structural violation.
inline constexpr double kStructureTol = 1e-10;

/// q = a*e + b*i + c*j + d*k, stored as four reals so moment conditions on
/// the coefficients stay directly checkable; the 2x2 block is derived.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  Quaternion conjugate() const { return {a, -b, -c, -d}; }
  double norm2() const { return a * a + b * b + c * c + d * d; }

  Quaternion operator*(const Quaternion& r) const {
    return {a * r.a - b * r.b - c * r.c - d * r.d,
            a * r.b + b * r.a + c * r.d - d * r.c,
            a * r.c - b * r.d + c * r.a + d * r.b,
            a * r.d + b * r.c - c * r.b + d * r.a};
  }
  Quaternion operator+(const Quaternion& r) const {
    return {a + r.a, b + r.b, c + r.c, d + r.d};
  }
  Quaternion operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
};

double quat_norm(const Quaternion& q);

/// 2x2 complex representation [[a+bi, c+di], [-c+di, a-bi]], row-major.
std::array<cxd, 4> embed(const Quaternion& q);

/// Quaternion self-dual Hermitian matrix: real diagonal t_j, independent
/// quaternion entries q_{jk} above the diagonal.
class SelfDualMatrix {
 public:
  explicit SelfDualMatrix(std::size_t n)
      : n_(n), diag_(n, 0.0), upper_(n * (n - 1) / 2) {}

  std::size_t n() const noexcept { return n_; }

  double& diagonal(std::size_t j) { return diag_[j]; }
  double diagonal(std::size_t j) const { return diag_[j]; }

  /// Entry above the diagonal; requires j < k.
  Quaternion& upper(std::size_t j, std::size_t k) { return upper_[pack(j, k)]; }
  const Quaternion& upper(std::size_t j, std::size_t k) const {
    return upper_[pack(j, k)];
  }

  double frobenius_norm() const;

 private:
  std::size_t pack(std::size_t j, std::size_t k) const;

  std::size_t n_;
  std::vector<double> diag_;
  std::vector<Quaternion> upper_;
};

/// Dense complex Hermitian matrix. The constructor canonicalizes so the
/// invariants hold exactly: entry(j,k) == conj(entry(k,j)) and real diagonal.
class ComplexHermitian {
 public:
  explicit ComplexHermitian(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  /// Validates Hermitian symmetry of `m` within `tol`, then canonicalizes.
  /// Throws StructureError when the input is not Hermitian.
  static ComplexHermitian from_matrix(const CMatrix& m, double tol = 1e-12);

  std::size_t dim() const noexcept { return dim_; }

  cxd entry(std::size_t j, std::size_t k) const { return a_[j * dim_ + k]; }

  /// Sets (j,k) and its mirror (k,j); requires a real value when j == k.
  void set(std::size_t j, std::size_t k, cxd value);

  const std::vector<cxd>& storage() const noexcept { return a_; }
  CMatrix to_matrix() const;
  double frobenius_norm() const;
  double trace() const;

 private:
  std::size_t dim_;
  std::vector<cxd> a_;
};

/// 2n x 2n Hermitian embedding: embed(q_{jk}) blocks off the diagonal,
/// t_j * I_2 on the diagonal.
ComplexHermitian embed_matrix(const SelfDualMatrix& m);

/// Scalar 2x2 block t * I_2 (t real or complex), within tol.
bool is_type_t(const std::array<cxd, 4>& block, double tol = kStructureTol);

/// Block pattern of even-dimensional matrices: every diagonal 2x2 block is
/// scalar, and block(k,j) = [[d, -b], [-c, a]] whenever
/// block(j,k) = [[a, b], [c, d]]. Quaternion embeddings and their resolvents
/// carry this structure.
bool is_type_i(const CMatrix& m, double tol = kStructureTol);

}  // namespace wigner
