#include "lph/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lph {

namespace {

int exponent_sum(const std::vector<int>& e) { return std::accumulate(e.begin(), e.end(), 0); }

// Descending graded-lex: higher total degree first, ties broken lexicographically.
bool grlex_greater(const std::vector<int>& a, const std::vector<int>& b) {
  const int da = exponent_sum(a);
  const int db = exponent_sum(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

int Monomial::degree() const { return exponent_sum(exponents); }

MultiPoly::MultiPoly(std::size_t n_vars, std::vector<Monomial> terms)
    : n_vars_(n_vars), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.exponents.size() != n_vars_) {
      throw DimensionMismatch("monomial exponent vector does not match variable count");
    }
    if (std::any_of(t.exponents.begin(), t.exponents.end(), [](int e) { return e < 0; })) {
      throw std::invalid_argument("negative exponent");
    }
  }
  canonicalize();
}

MultiPoly MultiPoly::constant(std::size_t n_vars, Complex c) {
  return MultiPoly(n_vars, {Monomial{std::vector<int>(n_vars, 0), c}});
}

MultiPoly MultiPoly::variable(std::size_t n_vars, std::size_t index) {
  if (index >= n_vars) throw DimensionMismatch("variable index out of range");
  std::vector<int> e(n_vars, 0);
  e[index] = 1;
  return MultiPoly(n_vars, {Monomial{std::move(e), Complex(1.0)}});
}

MultiPoly MultiPoly::linear(std::span<const Complex> coeffs, Complex constant) {
  const std::size_t n = coeffs.size();
  std::vector<Monomial> terms;
  terms.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    terms.push_back({std::move(e), coeffs[i]});
  }
  terms.push_back({std::vector<int>(n, 0), constant});
  return MultiPoly(n, std::move(terms));
}

void MultiPoly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return grlex_greater(a.exponents, b.exponents); });
  std::vector<Monomial> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Monomial& m) { return std::abs(m.coefficient) < kCoefficientDropTol; });
  terms_ = std::move(merged);
}

void MultiPoly::require_same_ring(const MultiPoly& other) const {
  if (other.n_vars_ != n_vars_) throw DimensionMismatch("polynomials live in different rings");
}

int MultiPoly::degree() const {
  // Terms are grlex-sorted, so the leading term has the top degree.
  return terms_.empty() ? -1 : terms_.front().degree();
}

int MultiPoly::partial_degree(std::size_t first, std::size_t count) const {
  int best = -1;
  for (const auto& t : terms_) {
    int s = 0;
    for (std::size_t i = first; i < first + count && i < n_vars_; ++i) s += t.exponents[i];
    best = std::max(best, s);
  }
  return best;
}

Complex MultiPoly::evaluate(std::span<const Complex> point) const {
  if (point.size() != n_vars_) throw DimensionMismatch("evaluation point has wrong length");
  Complex sum(0.0);
  for (const auto& t : terms_) {
    Complex m = t.coefficient;
    for (std::size_t i = 0; i < n_vars_; ++i) {
      for (int e = 0; e < t.exponents[i]; ++e) m *= point[i];
    }
    sum += m;
  }
  return sum;
}

double MultiPoly::evaluation_scale(std::span<const Complex> point) const {
  if (point.size() != n_vars_) throw DimensionMismatch("evaluation point has wrong length");
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = std::abs(t.coefficient);
    for (std::size_t i = 0; i < n_vars_; ++i) m *= std::pow(std::abs(point[i]), t.exponents[i]);
    sum += m;
  }
  return sum;
}

MultiPoly MultiPoly::differentiate(std::size_t var_index) const {
  if (var_index >= n_vars_) throw DimensionMismatch("differentiation index out of range");
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const int e = t.exponents[var_index];
    if (e == 0) continue;
    Monomial m = t;
    m.exponents[var_index] = e - 1;
    m.coefficient *= static_cast<double>(e);
    out.push_back(std::move(m));
  }
  return MultiPoly(n_vars_, std::move(out));
}

MultiPoly MultiPoly::embed(std::size_t new_n_vars, std::size_t offset) const {
  if (offset + n_vars_ > new_n_vars) throw DimensionMismatch("embedding does not fit");
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    std::vector<int> e(new_n_vars, 0);
    std::copy(t.exponents.begin(), t.exponents.end(), e.begin() + static_cast<std::ptrdiff_t>(offset));
    out.push_back({std::move(e), t.coefficient});
  }
  return MultiPoly(new_n_vars, std::move(out));
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  require_same_ring(other);
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  require_same_ring(other);
  for (const auto& t : other.terms_) terms_.push_back({t.exponents, -t.coefficient});
  canonicalize();
  return *this;
}

MultiPoly& MultiPoly::operator*=(Complex scalar) {
  for (auto& t : terms_) t.coefficient *= scalar;
  canonicalize();
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.require_same_ring(b);
  std::vector<Monomial> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      std::vector<int> e(a.n_vars_);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.exponents[i] + t.exponents[i];
      out.push_back({std::move(e), s.coefficient * t.coefficient});
    }
  }
  return MultiPoly(a.n_vars_, std::move(out));
}

MultiPoly MultiPoly::pow(int exponent) const {
  if (exponent < 0) throw std::invalid_argument("negative polynomial power");
  MultiPoly result = constant(n_vars_, Complex(1.0));
  MultiPoly base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.n_vars_ != b.n_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exponents != b.terms_[i].exponents ||
        a.terms_[i].coefficient != b.terms_[i].coefficient) {
      return false;
    }
  }
  return true;
}

PolySystem::PolySystem(std::size_t n_vars, std::vector<MultiPoly> polys) : n_vars_(n_vars) {
  for (auto& p : polys) push_back(std::move(p));
}

void PolySystem::push_back(MultiPoly p) {
  if (p.n_vars() != n_vars_) throw DimensionMismatch("system member has wrong variable count");
  polys_.push_back(std::move(p));
}

std::vector<Complex> PolySystem::evaluate(std::span<const Complex> point) const {
  std::vector<Complex> out;
  out.reserve(polys_.size());
  for (const auto& p : polys_) out.push_back(p.evaluate(point));
  return out;
}

double PolySystem::residual(std::span<const Complex> point) const {
  double r = 0.0;
  for (const auto& p : polys_) r = std::max(r, std::abs(p.evaluate(point)));
  return r;
}

double PolySystem::relative_residual(std::span<const Complex> point) const {
  double r = 0.0;
  for (const auto& p : polys_) r = std::max(r, std::abs(p.evaluate(point)) / (1.0 + p.evaluation_scale(point)));
  return r;
}

int PolySystem::max_degree() const {
  int d = -1;
  for (const auto& p : polys_) d = std::max(d, p.degree());
  return d;
}

PolySystem PolySystem::embed(std::size_t new_n_vars, std::size_t offset) const {
  PolySystem out(new_n_vars);
  for (const auto& p : polys_) out.push_back(p.embed(new_n_vars, offset));
  return out;
}

int PolyMatrix::max_degree() const {
  int d = -1;
  for (const auto& p : entries) d = std::max(d, p.degree());
  return d;
}

PolyMatrix jacobian_transpose(const PolySystem& f) {
  PolyMatrix jt{f.n_vars(), f.size(), {}};
  jt.entries.reserve(jt.rows * jt.cols);
  for (std::size_t i = 0; i < jt.rows; ++i) {
    for (std::size_t j = 0; j < jt.cols; ++j) jt.entries.push_back(f[j].differentiate(i));
  }
  return jt;
}

}  // namespace lph
