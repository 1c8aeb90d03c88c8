#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lph/errors.hpp"

namespace lph {

using Complex = std::complex<double>;

/// Coefficients below this magnitude are dropped after every arithmetic step.
inline constexpr double kCoefficientDropTol = 1e-14;

struct Monomial {
  std::vector<int> exponents;
  Complex coefficient;

  int degree() const;
};

/// Sparse multivariate polynomial with complex coefficients.
///
/// Terms are kept in canonical form: sorted by descending graded-lex order of
/// the exponent vector, no repeated exponents, no coefficient with magnitude
/// below kCoefficientDropTol.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::size_t n_vars) : n_vars_(n_vars) {}
  MultiPoly(std::size_t n_vars, std::vector<Monomial> terms);

  static MultiPoly constant(std::size_t n_vars, Complex c);
  static MultiPoly variable(std::size_t n_vars, std::size_t index);
  /// Affine-linear polynomial sum_i coeffs[i] * x_i + constant.
  static MultiPoly linear(std::span<const Complex> coeffs, Complex constant);

  std::size_t n_vars() const { return n_vars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Degree restricted to variables [first, first + count).
  int partial_degree(std::size_t first, std::size_t count) const;

  Complex evaluate(std::span<const Complex> point) const;
  /// sum_t |c_t| |point^t|, the magnitude scale of an evaluation at point.
  double evaluation_scale(std::span<const Complex> point) const;
  MultiPoly differentiate(std::size_t var_index) const;

  /// Re-expresses this polynomial in a ring with `new_n_vars` variables, mapping
  /// variable i to variable offset + i.
  MultiPoly embed(std::size_t new_n_vars, std::size_t offset = 0) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(Complex scalar);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Complex(-1.0); }
  friend MultiPoly operator*(MultiPoly a, Complex s) { return a *= s; }
  friend MultiPoly operator*(Complex s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  MultiPoly pow(int exponent) const;

  /// Exact structural equality (same exponents, bitwise-equal coefficients).
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

 private:
  void canonicalize();
  void require_same_ring(const MultiPoly& other) const;

  std::size_t n_vars_ = 0;
  std::vector<Monomial> terms_;
};

class PolySystem {
 public:
  PolySystem() = default;
  explicit PolySystem(std::size_t n_vars) : n_vars_(n_vars) {}
  PolySystem(std::size_t n_vars, std::vector<MultiPoly> polys);

  std::size_t n_vars() const { return n_vars_; }
  std::size_t size() const { return polys_.size(); }
  bool is_square() const { return polys_.size() == n_vars_; }

  const MultiPoly& operator[](std::size_t i) const { return polys_[i]; }
  const std::vector<MultiPoly>& polys() const { return polys_; }

  void push_back(MultiPoly p);

  std::vector<Complex> evaluate(std::span<const Complex> point) const;
  /// max_i |p_i(point)|
  double residual(std::span<const Complex> point) const;
  /// max_i |p_i(point)| / (1 + sum_t |c_t| |point^t|): backward error, scale-free.
  double relative_residual(std::span<const Complex> point) const;
  int max_degree() const;

  PolySystem embed(std::size_t new_n_vars, std::size_t offset = 0) const;

 private:
  std::size_t n_vars_ = 0;
  std::vector<MultiPoly> polys_;
};

/// Matrix of polynomials, row-major.
struct PolyMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<MultiPoly> entries;

  const MultiPoly& operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  MultiPoly& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  int max_degree() const;
};

/// Entry (i, j) is d f_j / d x_i, so that J * lambda = sum_j lambda_j grad f_j.
PolyMatrix jacobian_transpose(const PolySystem& f);

/// Parses one polynomial per non-blank line over the given variable order.
PolySystem parse(const std::string& text, const std::vector<std::string>& variable_order);
/// Error columns are reported as column_offset + position in text (1-based).
MultiPoly parse_poly(const std::string& text, const std::vector<std::string>& variable_order,
                     int line = 1, int column_offset = 0);

/// Canonical text form; parse(to_string(p)) reproduces p.
std::string to_string(const MultiPoly& p, const std::vector<std::string>& variable_names);

}  // namespace lph
