#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "lph/lph.hpp"

namespace lph::test {

/// Every monomial of total degree <= deg, coefficients uniform in the unit box.
inline MultiPoly dense_poly(std::size_t n, int deg, Rng& rng) {
  std::vector<Monomial> terms;
  std::vector<int> e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      terms.push_back({e, Complex(rng.uniform(-1, 1), rng.uniform(-1, 1))});
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
    e[i] = 0;
  };
  rec(0, deg);
  return MultiPoly(n, terms);
}

inline CVector random_point(std::size_t n, Rng& rng) {
  CVector z(n);
  for (auto& v : z) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return z;
}

inline double distance(std::span<const Complex> a, std::span<const Complex> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Every point of a lies within tol of some point of b.
inline bool covered(const std::vector<CVector>& a, const std::vector<CVector>& b, double tol) {
  return std::all_of(a.begin(), a.end(), [&](const CVector& x) {
    return std::any_of(b.begin(), b.end(), [&](const CVector& y) { return distance(x, y) < tol; });
  });
}

inline bool same_set(const std::vector<CVector>& a, const std::vector<CVector>& b, double tol) {
  return covered(a, b, tol) && covered(b, a, tol);
}

inline std::vector<CVector> joined(const LPHReport& r) {
  std::vector<CVector> out;
  for (const auto& s : r.solutions) {
    CVector z = s.x;
    z.insert(z.end(), s.lambda.begin(), s.lambda.end());
    out.push_back(std::move(z));
  }
  return out;
}

inline bool has_real_point(const std::vector<std::vector<double>>& pts, std::vector<double> want, double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](const std::vector<double>& p) {
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (std::abs(p[i] - want[i]) >= tol) return false;
    }
    return true;
  });
}

inline PolySystem sys(const std::vector<std::string>& vars, const std::string& text) { return parse(text, vars); }

inline const char* kSextic = "(y^2 - x^3 + 4*x + 1) * ((x - y + 6)^3 + x + y)";
inline const char* kSparsePair = "-62*x*y + 97*y - 4*x*y*z - 4\n80*x - 44*x*y + 71*y^2 - 17*y^3 + 2";

/// Random problem {f, J lambda - beta} with dense quadrics; J is the Jacobian
/// transpose when `jacobian`, otherwise random dense linear entries.
inline LPHProblem random_problem(std::size_t n, std::size_t k, bool jacobian, Rng& gen) {
  LPHProblem p;
  p.f = PolySystem(n);
  for (std::size_t i = 0; i < k; ++i) p.f.push_back(dense_poly(n, 2, gen));
  if (jacobian) {
    p.J = jacobian_transpose(p.f);
  } else {
    p.J = PolyMatrix{n, k, {}};
    for (std::size_t i = 0; i < n * k; ++i) p.J.entries.push_back(dense_poly(n, 1, gen));
  }
  for (std::size_t i = 0; i < n; ++i) p.beta.emplace_back(gen.uniform(-1, 1), gen.uniform(-1, 1));
  return p;
}

}  // namespace lph::test
