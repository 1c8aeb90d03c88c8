#include "lph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace lph {

namespace {
constexpr double kPivotRelTol = 1e-14;
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double CMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (const auto& v : row(r)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CVector operator*(const CMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector shape mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s(0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

double norm_inf(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

LuFactorization lu_factor(const CMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("LU requires a square matrix");
  const std::size_t n = a.rows();
  LuFactorization f{a, std::vector<std::size_t>(n), 1, std::numeric_limits<double>::infinity(),
                    a.norm_inf()};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  CMatrix& m = f.lu;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(m(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    f.min_pivot = std::min(f.min_pivot, best);
    if (best == 0.0) continue;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
      std::swap(f.perm[col], f.perm[piv]);
      f.sign = -f.sign;
    }
    const Complex inv = 1.0 / m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = m(r, col) * inv;
      m(r, col) = factor;
      if (factor == Complex(0.0)) continue;
      for (std::size_t j = col + 1; j < n; ++j) m(r, j) -= factor * m(col, j);
    }
  }
  if (n == 0) f.min_pivot = 0.0;
  return f;
}

bool LuFactorization::singular() const {
  return lu.rows() > 0 && (min_pivot == 0.0 || min_pivot < kPivotRelTol * matrix_norm);
}

CVector LuFactorization::solve(std::span<const Complex> b) const {
  const std::size_t n = lu.rows();
  if (b.size() != n) throw DimensionMismatch("right-hand side has wrong length");
  if (singular()) throw SingularMatrix("matrix is singular to working precision");
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    Complex s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

Complex LuFactorization::determinant() const {
  Complex d(static_cast<double>(sign));
  for (std::size_t i = 0; i < lu.rows(); ++i) d *= lu(i, i);
  return d;
}

CVector lu_solve(const CMatrix& a, std::span<const Complex> b) {
  if (a.rows() != b.size()) throw DimensionMismatch("right-hand side has wrong length");
  return lu_factor(a).solve(b);
}

Complex determinant(const CMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("determinant requires a square matrix");
  return lu_factor(a).determinant();
}

CMatrix inverse(const CMatrix& a) {
  const auto f = lu_factor(a);
  const std::size_t n = a.rows();
  CMatrix inv(n, n);
  CVector e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), Complex(0.0));
    e[j] = 1.0;
    const CVector col = f.solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

double condition_estimate(const CMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("condition estimate requires a square matrix");
  CMatrix scaled = a;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double m = norm_inf(scaled.row(r));
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    for (auto& v : scaled.row(r)) v /= m;
  }
  const auto f = lu_factor(scaled);
  if (f.singular()) return std::numeric_limits<double>::infinity();
  return scaled.norm_inf() * inverse(scaled).norm_inf();
}

std::size_t numerical_rank(const CMatrix& a, double rel_threshold) {
  CMatrix m = a;
  const double cutoff = rel_threshold * a.norm_inf();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t rank = 0;
  for (; rank < std::min(rows, cols); ++rank) {
    std::size_t pr = rank;
    std::size_t pc = rank;
    double best = 0.0;
    for (std::size_t r = rank; r < rows; ++r) {
      for (std::size_t c = rank; c < cols; ++c) {
        if (std::abs(m(r, c)) > best) {
          best = std::abs(m(r, c));
          pr = r;
          pc = c;
        }
      }
    }
    if (best <= cutoff || best == 0.0) break;
    for (std::size_t c = 0; c < cols; ++c) std::swap(m(rank, c), m(pr, c));
    for (std::size_t r = 0; r < rows; ++r) std::swap(m(r, rank), m(r, pc));
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Complex factor = m(r, rank) / m(rank, rank);
      for (std::size_t c = rank; c < cols; ++c) m(r, c) -= factor * m(rank, c);
    }
  }
  return rank;
}

CMatrix beta_normalizer(std::span<const Complex> beta) {
  const std::size_t n = beta.size();
  if (n == 0 || norm_inf(beta) == 0.0) throw InvalidBeta("beta must be a nonzero vector");
  std::size_t p = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(beta[i]) > std::abs(beta[p])) p = i;
  }
  CMatrix basis(n, n);
  std::size_t col = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == p) continue;
    basis(j, col++) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) basis(i, n - 1) = beta[i];
  return inverse(basis);
}

CVector least_squares(const CMatrix& a, std::span<const Complex> b) {
  if (a.rows() != b.size()) throw DimensionMismatch("right-hand side has wrong length");
  const std::size_t k = a.cols();
  CMatrix normal(k, k);
  CVector rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex s(0.0);
      for (std::size_t r = 0; r < a.rows(); ++r) s += std::conj(a(r, i)) * a(r, j);
      normal(i, j) = s;
    }
    Complex s(0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) s += std::conj(a(r, i)) * b[r];
    rhs[i] = s;
  }
  return lu_solve(normal, rhs);
}

}  // namespace lph
