#include "lph/lph.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace lph {

namespace {

constexpr double kAcceptResidual = 1e-8;

MultiPoly lambda_var(std::size_t n, std::size_t k, std::size_t j) { return MultiPoly::variable(n + k, n + j); }

// sum_j row[j] * lambda_j - rhs over (x, lambda).
MultiPoly lambda_combination(const std::vector<MultiPoly>& row, std::size_t n, std::size_t k, Complex rhs) {
  MultiPoly out = MultiPoly::constant(n + k, -rhs);
  for (std::size_t j = 0; j < k; ++j) out += row[j].embed(n + k) * lambda_var(n, k, j);
  return out;
}

PolySystem build_square(const PolySystem& f, const PolyMatrix& J, std::span<const Complex> rhs) {
  const std::size_t n = f.n_vars();
  const std::size_t k = f.size();
  PolySystem out = f.embed(n + k);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<MultiPoly> row(J.entries.begin() + static_cast<std::ptrdiff_t>(i * k),
                               J.entries.begin() + static_cast<std::ptrdiff_t>((i + 1) * k));
    out.push_back(lambda_combination(row, n, k, rhs[i]));
  }
  return out;
}

std::string point_text(std::span<const Complex> z) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
  os << ")";
  return os.str();
}

// Newton on F alone; returns the refined point or nothing.
std::optional<CVector> refine_on(const PolySystem& F, std::span<const Complex> z, const TrackConfig& cfg) {
  const HomotopyPair h(F, F, Complex(1.0));
  const auto r = newton_correct(h, z, 1.0, cfg);
  if (r.status == NewtonStatus::SingularJacobian) return std::nullopt;
  if (!(F.relative_residual(r.z) <= kAcceptResidual)) return std::nullopt;
  return polish(SystemEvaluator(F), r.z);
}

}  // namespace

int LPHProblem::d() const { return std::max(0, J.max_degree()); }

void LPHProblem::validate() const {
  if (k() < 1 || n() <= k()) throw DomainError("need n > k >= 1");
  if (J.rows != n() || J.cols != k() || J.entries.size() != n() * k()) {
    throw DimensionMismatch("J must be n x k");
  }
  for (const auto& e : J.entries) {
    if (e.n_vars() != n()) throw DimensionMismatch("J entries must be polynomials in x");
  }
  if (beta.size() != n()) throw DimensionMismatch("beta must have length n");
  if (norm_inf(beta) == 0.0) throw InvalidBeta("beta is the zero vector");
}

PolySystem LPHProblem::square_system() const { return build_square(f, J, beta); }

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t root_bound(int n, int k, int d, std::uint64_t D) {
  if (!(n > k && k >= 1) || d < 0) throw DomainError("root_bound needs n > k >= 1 and d >= 0");
  std::uint64_t r = binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(n - k)) * D;
  for (int i = 0; i < n - k; ++i) r *= static_cast<std::uint64_t>(d);
  return r;
}

PolySystem NormalizedProblem::square_system() const {
  CVector e(original.n(), Complex(0.0));
  e.back() = 1.0;
  return build_square(original.f, J_prime, e);
}

NormalizedProblem normalize(const LPHProblem& p) {
  p.validate();
  NormalizedProblem np{p, beta_normalizer(p.beta), PolyMatrix{p.n(), p.k(), {}}};
  const std::size_t n = p.n();
  const std::size_t k = p.k();
  np.J_prime.entries.assign(n * k, MultiPoly(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      MultiPoly acc(n);
      for (std::size_t m = 0; m < n; ++m) {
        if (np.A(i, m) != Complex(0.0)) acc += p.J(m, j) * np.A(i, m);
      }
      np.J_prime(i, j) = std::move(acc);
    }
  }
  return np;
}

MultiPoly LinearProductG::g_n() const { return lambda_combination(g_n_row, n, k, Complex(1.0)); }

PolySystem LinearProductG::assemble() const {
  PolySystem out = f.embed(n + k);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    MultiPoly g = MultiPoly::constant(n + k, Complex(0.0));
    for (std::size_t j = 0; j < k; ++j) g += lambda_var(n, k, j) * h[i][j];
    for (const auto& factor : l[i]) g = g * factor.embed(n + k);
    out.push_back(std::move(g));
  }
  out.push_back(g_n());
  return out;
}

LinearProductG build_G(const NormalizedProblem& np, Rng& rng) {
  const auto& p = np.original;
  const int d = p.d();
  if (d < 1) throw DegreeZeroJacobianRow("linear-product start system needs d >= 1");
  LinearProductG g;
  g.n = p.n();
  g.k = p.k();
  g.d = d;
  g.f = p.f;
  for (std::size_t i = 0; i + 1 < g.n; ++i) {
    std::vector<MultiPoly> row;
    for (int j = 0; j < d; ++j) {
      CVector coeffs(g.n);
      for (auto& c : coeffs) c = rng.unit_complex();
      row.push_back(MultiPoly::linear(coeffs, rng.unit_complex()));
    }
    g.l.push_back(std::move(row));
  }
  for (std::size_t i = 0; i + 1 < g.n; ++i) {
    CVector coeffs(g.k);
    for (auto& c : coeffs) c = rng.unit_complex();
    g.h.push_back(std::move(coeffs));
  }
  for (std::size_t j = 0; j < g.k; ++j) g.g_n_row.push_back(np.J_prime(g.n - 1, j));
  return g;
}

std::vector<ChoiceIndex> enumerate_choices(int n, int k, int d) {
  if (!(n > k && k >= 1) || d < 1) throw DomainError("enumerate_choices needs n > k >= 1 and d >= 1");
  const int rows = n - 1;
  const int ones = n - k;
  std::vector<ChoiceIndex> out;
  // alpha in lexicographic order: start from the smallest vector 0..01..1.
  std::vector<int> alpha(static_cast<std::size_t>(rows), 0);
  std::fill(alpha.end() - ones, alpha.end(), 1);
  do {
    std::vector<int> pick(static_cast<std::size_t>(ones), 0);
    for (;;) {
      out.push_back({alpha, pick});
      int pos = ones - 1;
      while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == d - 1) pick[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++pick[static_cast<std::size_t>(pos)];
    }
  } while (std::next_permutation(alpha.begin(), alpha.end()));
  return out;
}

std::vector<MultiPoly> chosen_factors(const LinearProductG& g, const ChoiceIndex& choice) {
  std::vector<MultiPoly> out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < choice.alpha.size(); ++i) {
    if (choice.alpha[i] == 1) out.push_back(g.l[i][static_cast<std::size_t>(choice.factor_pick[next++])]);
  }
  return out;
}

H1Result h1_track(const std::vector<CVector>& M, const PolySystem& f, const std::vector<MultiPoly>& L,
                  const std::vector<MultiPoly>& L_prime, const TrackConfig& cfg, Complex gamma1,
                  const SolveOptions& opts) {
  PolySystem start = f;
  PolySystem target = f;
  for (const auto& p : L) start.push_back(p);
  for (const auto& p : L_prime) target.push_back(p);
  const HomotopyPair h(start, target, gamma1);
  std::vector<PathJob> jobs;
  for (const auto& m : M) jobs.push_back({&h, m});
  H1Result out;
  for (const auto& r : run_batch_checked(jobs, cfg, opts)) {
    out.counts.add(r);
    if (r.status == PathStatus::Converged) out.points.push_back(r.endpoint);
  }
  return out;
}

CVector backsolve_lambda(std::span<const Complex> x_star, const LinearProductG& g, const ChoiceIndex& choice) {
  CMatrix a(g.k, g.k);
  CVector b(g.k, Complex(0.0));
  std::size_t row = 0;
  for (std::size_t i = 0; i + 1 < g.n; ++i) {
    if (choice.alpha[i] == 1) continue;
    for (std::size_t j = 0; j < g.k; ++j) a(row, j) = g.h[i][j];
    ++row;
  }
  if (row + 1 != g.k) throw DimensionMismatch("choice does not leave k - 1 lambda equations");
  for (std::size_t j = 0; j < g.k; ++j) a(row, j) = g.g_n_row[j].evaluate(x_star);
  b[row] = 1.0;
  return lu_solve(a, b);
}

namespace {

LPHReport constant_jacobian_route(const LPHProblem& p, const WitnessSet& w, LPHReport report) {
  const std::size_t n = p.n();
  const std::size_t k = p.k();
  CMatrix jc(n, k);
  const CVector origin(n, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) jc(i, j) = p.J(i, j).evaluate(origin);
  }
  const CVector lambda = least_squares(jc, p.beta);
  CVector r = jc * lambda;
  for (std::size_t i = 0; i < n; ++i) r[i] -= p.beta[i];
  if (norm_inf(r) > kAcceptResidual * (1.0 + norm_inf(p.beta))) return report;
  report.warnings.push_back(
      "constant J with consistent J lambda = beta: solutions are not isolated, returning witness points");
  const PolySystem F = p.square_system();
  for (const auto& x : w.points) {
    CVector z = x;
    z.insert(z.end(), lambda.begin(), lambda.end());
    report.solutions.push_back({x, lambda, F.residual(z)});
  }
  return report;
}

}  // namespace

LPHReport lph_solve(const LPHProblem& p, const TrackConfig& cfg, Rng& rng, const SolveOptions& opts) {
  p.validate();
  cfg.validate();
  const std::size_t n = p.n();
  const std::size_t k = p.k();
  LPHReport report;
  report.d = p.d();

  const WitnessSet w = witness_points(p.f, rng, cfg, opts);
  report.D = w.degree();
  report.witness = w.points;
  report.bound = root_bound(static_cast<int>(n), static_cast<int>(k), report.d, report.D);
  if (report.d == 0) return constant_jacobian_route(p, w, std::move(report));

  const NormalizedProblem np = normalize(p);
  const LinearProductG g = build_G(np, rng);
  const Complex gamma1 = rng.unit_complex();
  const Complex gamma2 = rng.unit_complex();
  const auto choices = enumerate_choices(static_cast<int>(n), static_cast<int>(k), report.d);

  // First homotopy: all choices in one batch, results kept in enumeration order.
  PolySystem start = p.f;
  for (const auto& l : w.sliced.slice) start.push_back(l);
  std::vector<HomotopyPair> h1;
  h1.reserve(choices.size());
  for (const auto& c : choices) {
    PolySystem target = p.f;
    for (const auto& l : chosen_factors(g, c)) target.push_back(l);
    h1.emplace_back(start, std::move(target), gamma1);
  }
  std::vector<PathJob> jobs;
  for (const auto& h : h1) {
    for (const auto& m : w.points) jobs.push_back({&h, m});
  }
  const auto h1_results = run_batch_checked(jobs, cfg, opts);

  const PolySystem G = g.assemble();
  const PolySystem Fp = np.square_system();
  const HomotopyPair h2(G, Fp, gamma2);
  std::vector<PathJob> omega;
  for (std::size_t c = 0; c < choices.size(); ++c) {
    for (std::size_t m = 0; m < w.points.size(); ++m) {
      const auto& r = h1_results[c * w.points.size() + m];
      if (r.status != PathStatus::Converged) {
        report.warnings.push_back("first homotopy path " + std::to_string(m) + " of choice " + std::to_string(c) +
                                  " " + to_string(r.status) + " at t = " + std::to_string(r.t_reached) +
                                  ", |x| = " + std::to_string(norm_inf(r.endpoint)) + ", dropped");
        continue;
      }
      CVector z = r.endpoint;
      try {
        const CVector lambda = backsolve_lambda(r.endpoint, g, choices[c]);
        z.insert(z.end(), lambda.begin(), lambda.end());
      } catch (const SingularMatrix&) {
        report.warnings.push_back("lambda back-solve singular at " + point_text(r.endpoint) + ", dropped");
        continue;
      }
      const auto refined = newton_correct(h2, z, 0.0, cfg);
      if (refined.status == NewtonStatus::SingularJacobian || !(G.relative_residual(refined.z) <= cfg.newton_tol)) {
        report.warnings.push_back("start point " + point_text(z) + " does not refine on G, dropped");
        continue;
      }
      omega.push_back({&h2, refined.z});
    }
  }
  report.omega = omega.size();

  const auto h2_results = run_batch_checked(omega, cfg, opts);
  std::vector<CVector> endpoints;
  for (const auto& r : h2_results) {
    report.counts.add(r);
    if (r.status == PathStatus::Converged) endpoints.push_back(r.endpoint);
  }
  const PolySystem F = p.square_system();
  std::vector<CVector> refined_points;
  for (const auto& z : dedup_points(endpoints, opts.dedup_tol)) {
    auto refined = refine_on(F, z, cfg);
    if (!refined) {
      report.warnings.push_back("endpoint " + point_text(z) + " does not refine on F, dropped");
      continue;
    }
    refined_points.push_back(std::move(*refined));
  }
  for (const auto& z : dedup_points(refined_points, opts.dedup_tol)) {
    LPHSolution s;
    s.x.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
    s.lambda.assign(z.begin() + static_cast<std::ptrdiff_t>(n), z.end());
    s.residual = F.residual(z);
    report.solutions.push_back(std::move(s));
  }
  return report;
}

}  // namespace lph
