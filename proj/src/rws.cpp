#include "lph/rws.hpp"

#include <algorithm>
#include <cmath>

namespace lph {

namespace {

constexpr double kRealResidual = 1e-8;
constexpr double kWitnessResidual = 1e-6;

CVector to_complex(std::span<const double> v) { return CVector(v.begin(), v.end()); }

double max_imag(std::span<const Complex> z) {
  double m = 0.0;
  for (const auto& v : z) m = std::max(m, std::abs(v.imag()));
  return m;
}

RVector real_part(std::span<const Complex> z) {
  RVector out;
  out.reserve(z.size());
  for (const auto& v : z) out.push_back(v.real());
  return out;
}

bool near_any(const std::vector<RealWitnessPoint>& points, const RVector& x, double tol) {
  return std::any_of(points.begin(), points.end(), [&](const RealWitnessPoint& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(p.x[i] - x[i]));
    return d < tol;
  });
}

}  // namespace

CriticalSystem build_critical_system(const PolySystem& f, std::span<const double> beta) {
  if (beta.size() != f.n_vars()) throw DimensionMismatch("beta must have one entry per variable");
  return {f, LPHProblem{f, jacobian_transpose(f), to_complex(beta)}};
}

PolySystem augment(const PolySystem& f, std::span<const double> beta, double c) {
  if (beta.size() != f.n_vars()) throw DimensionMismatch("beta must have one entry per variable");
  PolySystem out = f;
  out.push_back(MultiPoly::linear(to_complex(beta), Complex(c)));
  return out;
}

void RealFilterConfig::validate() const {
  if (!(tau_imag > 0.0)) throw std::invalid_argument("tau_imag must be positive");
}

std::vector<RVector> real_filter(const std::vector<CVector>& points, const RealFilterConfig& cfg,
                                 const PolySystem& system, const TrackConfig& track) {
  cfg.validate();
  std::vector<RVector> out;
  const HomotopyPair h(system, system, Complex(1.0));
  for (const auto& p : points) {
    if (max_imag(p) >= cfg.tau_imag) continue;
    RVector x = real_part(p);
    if (cfg.refine) {
      const auto r = newton_correct(h, to_complex(x), 1.0, track);
      if (r.status == NewtonStatus::SingularJacobian || max_imag(r.z) >= cfg.tau_imag) continue;
      x = real_part(r.z);
      if (!(system.relative_residual(to_complex(x)) <= kRealResidual)) continue;
    }
    out.push_back(std::move(x));
  }
  return out;
}

RealWitnessSet rws(const PolySystem& f, const RwsConfig& cfg, Rng& rng) {
  const std::size_t n = f.n_vars();
  const std::size_t k = f.size();
  if (k < 1 || k > n) throw DomainError("need 1 <= k <= n");
  cfg.track.validate();
  cfg.filter.validate();
  const std::size_t extra = n - k;

  RealWitnessSet out;
  for (std::size_t s = 0; s < extra; ++s) {
    RVector beta(n);
    for (auto& b : beta) b = rng.sign() * rng.uniform(0.5, 1.5);
    out.betas.push_back(std::move(beta));
    out.c_values.push_back(rng.uniform(-5.0, 5.0));
  }
  if (cfg.beta) {
    if (cfg.beta->size() != n) throw DimensionMismatch("beta override must have one entry per variable");
    if (extra > 0) out.betas[0] = *cfg.beta;
  }
  for (std::size_t s = 0; s < cfg.c.size(); ++s) {
    if (s < extra) {
      out.c_values[s] = cfg.c[s];
    } else {
      out.warnings.push_back("c value " + std::to_string(cfg.c[s]) + " unused: only " + std::to_string(extra) +
                             " hyperplanes");
    }
  }

  PolySystem sys = f;
  for (std::size_t s = 0; s <= extra; ++s) {
    StageReport st;
    st.stage = static_cast<int>(s);
    st.equations = sys.size();
    std::vector<RVector> xs;
    if (sys.size() == n) {
      const auto sol = solve_square_report(sys, cfg.track, rng, cfg.solve);
      st.counts = sol.counts;
      st.complex_solutions = sol.points.size();
      xs = real_filter(sol.points, cfg.filter, sys, cfg.track);
    } else {
      const auto crit = build_critical_system(sys, out.betas[s]);
      const auto rep = lph_solve(crit.problem, cfg.track, rng, cfg.solve);
      st.D = rep.D;
      st.omega = rep.omega;
      st.counts = rep.counts;
      st.bound = rep.bound;
      st.complex_solutions = rep.solutions.size();
      for (const auto& w : rep.warnings) out.warnings.push_back("stage " + std::to_string(s) + ": " + w);
      if (s == 0) {
        const auto fr = full_rank_check(f, rep.witness);
        if (!fr.ok()) {
          out.warnings.push_back("Jacobian of f is rank deficient at " + std::to_string(fr.deficient.size()) +
                                 " of " + std::to_string(fr.ranks.size()) + " witness points");
        }
      }
      std::vector<CVector> full;
      for (const auto& sol : rep.solutions) {
        CVector z = sol.x;
        z.insert(z.end(), sol.lambda.begin(), sol.lambda.end());
        full.push_back(std::move(z));
      }
      for (auto& z : real_filter(full, cfg.filter, crit.problem.square_system(), cfg.track)) {
        z.resize(n);
        xs.push_back(std::move(z));
      }
    }
    st.real_solutions = xs.size();
    for (auto& x : xs) {
      if (near_any(out.points, x, cfg.solve.dedup_tol)) continue;
      const double res = f.residual(to_complex(x));
      if (!(res <= kWitnessResidual)) {
        out.warnings.push_back("stage " + std::to_string(s) + " point with residual " + std::to_string(res) +
                               " dropped");
        continue;
      }
      out.points.push_back({std::move(x), static_cast<int>(s), res});
    }
    out.stages.push_back(st);
    if (s < extra) sys = augment(sys, out.betas[s], out.c_values[s]);
  }
  return out;
}

std::uint64_t witness_bound(int n, int k, int d_f, std::uint64_t D) {
  if (!(n > k && k > 0) || d_f <= 1) throw DomainError("witness_bound needs n > k > 0 and d_f > 1");
  std::uint64_t total = 0;
  for (int j = 0; j <= n - k; ++j) {
    std::uint64_t term = binomial(static_cast<std::uint64_t>(n - 1 - j), static_cast<std::uint64_t>(n - k - j)) * D;
    for (int e = 0; e < n - k - j; ++e) term *= static_cast<std::uint64_t>(d_f - 1);
    total += term;
  }
  return total;
}

std::uint64_t bezout_chain_bound(const PolySystem& f) {
  const int n = static_cast<int>(f.n_vars());
  const int k = static_cast<int>(f.size());
  if (!(n >= k && k > 0)) throw DomainError("bezout_chain_bound needs n >= k > 0");
  const int d_f = f.max_degree();
  std::uint64_t r = binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(k - 1));
  for (int e = 0; e < n - k; ++e) r *= static_cast<std::uint64_t>(std::max(d_f - 1, 0));
  for (const auto& p : f.polys()) r *= static_cast<std::uint64_t>(std::max(p.degree(), 0));
  return r;
}

std::uint64_t total_degree_bound(const PolySystem& f) {
  const int d_f = std::max(f.max_degree(), 0);
  std::uint64_t r = 1;
  for (std::size_t e = 0; e < f.n_vars(); ++e) r *= static_cast<std::uint64_t>(d_f);
  for (const auto& p : f.polys()) r *= static_cast<std::uint64_t>(std::max(p.degree(), 0));
  return r;
}

FullRankReport full_rank_check(const PolySystem& f, const std::vector<CVector>& samples) {
  FullRankReport report;
  const SystemEvaluator eval(f);
  CVector vals(f.size());
  CMatrix jac;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    eval.values_and_jacobian(samples[i], vals, jac);
    const std::size_t r = numerical_rank(jac, 1e-8);
    report.ranks.push_back(r);
    if (r < f.size()) report.deficient.push_back(i);
  }
  return report;
}

}  // namespace lph
