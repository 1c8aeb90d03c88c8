#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lph/errors.hpp"

namespace lph {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> data() const { return data_; }

  /// Max absolute row sum.
  double norm_inf() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, std::span<const Complex> x);

double norm_inf(std::span<const Complex> v);

/// PA = LU with partial pivoting, L unit-lower and U upper, packed in one matrix.
struct LuFactorization {
  CMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  /// Smallest |U_ii| seen; zero if elimination hit an exactly zero column.
  double min_pivot = 0.0;
  double matrix_norm = 0.0;

  /// True when some pivot fell below 1e-14 * ||A||_inf.
  bool singular() const;
  CVector solve(std::span<const Complex> b) const;
  Complex determinant() const;
};

LuFactorization lu_factor(const CMatrix& a);

/// Throws SingularMatrix when a pivot is below 1e-14 * ||A||_inf.
CVector lu_solve(const CMatrix& a, std::span<const Complex> b);

/// Zero for singular input, never throws on singularity.
Complex determinant(const CMatrix& a);

CMatrix inverse(const CMatrix& a);

/// ||D A||_inf * ||(D A)^{-1}||_inf with D scaling every row to unit max-norm.
/// Returns +inf for singular matrices.
double condition_estimate(const CMatrix& a);

/// Numerical rank via complete-pivoting elimination; pivots at or below
/// rel_threshold * ||A||_inf count as zero.
std::size_t numerical_rank(const CMatrix& a, double rel_threshold);

/// Invertible A with A * beta = e_n = (0, ..., 0, 1).
///
/// beta is extended to a basis B = [e_j (j != p) ..., beta] where p is the index
/// of the largest |beta_p|; A = B^{-1}. det B = +-beta_p, so B is as well
/// conditioned as the coordinate choice allows.
CMatrix beta_normalizer(std::span<const Complex> beta);

/// Least-squares solution of the overdetermined system A x = b via the normal
/// equations; the caller checks the residual for consistency.
CVector least_squares(const CMatrix& a, std::span<const Complex> b);

}  // namespace lph
