#include "lph/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lph {

// ---------------------------------------------------------------------------
// SystemEvaluator

SystemEvaluator::SystemEvaluator(const PolySystem& system)
    : n_vars_(system.n_vars()), n_polys_(system.size()), max_exp_(system.n_vars(), 0) {
  for (const auto& p : system.polys()) {
    for (const auto& t : p.terms()) {
      for (std::size_t v = 0; v < n_vars_; ++v) max_exp_[v] = std::max(max_exp_[v], t.exponents[v]);
    }
  }
  power_offset_.resize(n_vars_);
  std::size_t off = 0;
  for (std::size_t v = 0; v < n_vars_; ++v) {
    power_offset_[v] = off;
    off += static_cast<std::size_t>(max_exp_[v]) + 1;
  }
  for (const auto& p : system.polys()) {
    const std::size_t begin = terms_.size();
    add_poly(p);
    value_blocks_.push_back({begin, terms_.size()});
  }
  for (const auto& p : system.polys()) {
    for (std::size_t v = 0; v < n_vars_; ++v) {
      const std::size_t begin = terms_.size();
      add_poly(p.differentiate(v));
      jacobian_blocks_.push_back({begin, terms_.size()});
    }
  }
}

void SystemEvaluator::add_poly(const MultiPoly& p) {
  for (const auto& t : p.terms()) {
    terms_.push_back({t.coefficient, exponents_.size()});
    exponents_.insert(exponents_.end(), t.exponents.begin(), t.exponents.end());
  }
}

void SystemEvaluator::fill_powers(std::span<const Complex> z, std::vector<Complex>& powers) const {
  if (z.size() != n_vars_) throw DimensionMismatch("evaluation point has wrong length");
  powers.resize(power_offset_.empty() ? 0 : power_offset_.back() + max_exp_.back() + 1);
  for (std::size_t v = 0; v < n_vars_; ++v) {
    Complex* p = powers.data() + power_offset_[v];
    p[0] = 1.0;
    for (int e = 1; e <= max_exp_[v]; ++e) p[e] = p[e - 1] * z[v];
  }
}

Complex SystemEvaluator::eval_block(const Block& b, const std::vector<Complex>& powers) const {
  Complex sum(0.0);
  for (std::size_t i = b.begin; i < b.end; ++i) {
    const Term& t = terms_[i];
    Complex m = t.coefficient;
    const int* e = exponents_.data() + t.exponent_offset;
    for (std::size_t v = 0; v < n_vars_; ++v) {
      if (e[v] != 0) m *= powers[power_offset_[v] + static_cast<std::size_t>(e[v])];
    }
    sum += m;
  }
  return sum;
}

void SystemEvaluator::values(std::span<const Complex> z, std::span<Complex> out) const {
  std::vector<Complex> powers;
  fill_powers(z, powers);
  for (std::size_t i = 0; i < n_polys_; ++i) out[i] = eval_block(value_blocks_[i], powers);
}

void SystemEvaluator::values_and_jacobian(std::span<const Complex> z, std::span<Complex> out,
                                          CMatrix& jac) const {
  std::vector<Complex> powers;
  fill_powers(z, powers);
  if (jac.rows() != n_polys_ || jac.cols() != n_vars_) jac = CMatrix(n_polys_, n_vars_);
  for (std::size_t i = 0; i < n_polys_; ++i) {
    out[i] = eval_block(value_blocks_[i], powers);
    for (std::size_t v = 0; v < n_vars_; ++v) {
      jac(i, v) = eval_block(jacobian_blocks_[i * n_vars_ + v], powers);
    }
  }
}

void SystemEvaluator::scales(std::span<const Complex> z, std::span<double> out) const {
  if (z.size() != n_vars_) throw DimensionMismatch("evaluation point has wrong length");
  std::vector<double> powers(power_offset_.empty() ? 0 : power_offset_.back() + max_exp_.back() + 1);
  for (std::size_t v = 0; v < n_vars_; ++v) {
    double* p = powers.data() + power_offset_[v];
    p[0] = 1.0;
    for (int e = 1; e <= max_exp_[v]; ++e) p[e] = p[e - 1] * std::abs(z[v]);
  }
  for (std::size_t i = 0; i < n_polys_; ++i) {
    double sum = 0.0;
    for (std::size_t j = value_blocks_[i].begin; j < value_blocks_[i].end; ++j) {
      double m = std::abs(terms_[j].coefficient);
      const int* e = exponents_.data() + terms_[j].exponent_offset;
      for (std::size_t v = 0; v < n_vars_; ++v) {
        if (e[v] != 0) m *= powers[power_offset_[v] + static_cast<std::size_t>(e[v])];
      }
      sum += m;
    }
    out[i] = sum;
  }
}

// ---------------------------------------------------------------------------
// Homotopy

namespace {

constexpr double kStagnationTol = 1e-13;

// Scales each row of jac (and the matching entry of rhs) to unit max-norm so the
// singularity test sees the conditioning rather than the row magnitudes.
void equilibrate_rows(CMatrix& jac, CVector& rhs) {
  for (std::size_t r = 0; r < jac.rows(); ++r) {
    const double m = norm_inf(jac.row(r));
    if (m == 0.0) continue;
    const double s = 1.0 / m;
    for (auto& v : jac.row(r)) v *= s;
    rhs[r] *= s;
  }
}

// Solves jac * x = rhs after row equilibration; nullopt when singular.
std::optional<CVector> solve_scaled(CMatrix jac, CVector rhs) {
  equilibrate_rows(jac, rhs);
  const auto lu = lu_factor(jac);
  if (lu.singular()) return std::nullopt;
  return lu.solve(rhs);
}

}  // namespace

void TrackConfig::validate() const {
  if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step && max_step < 1.0)) {
    throw std::invalid_argument("step sizes must satisfy 0 < min <= initial <= max < 1");
  }
  if (!(newton_tol > 0.0 && divergence_norm > 0.0 && t_endgame > 0.0 && t_endgame < 1.0 &&
        max_condition > 0.0)) {
    throw std::invalid_argument("tracker tolerances must be positive");
  }
  if (newton_max_iters < 1 || corrector_max_iters < 1 || max_steps < 1) {
    throw std::invalid_argument("iteration limits must be positive");
  }
}

HomotopyPair::HomotopyPair(PolySystem start, PolySystem target, Complex gamma)
    : start_(std::move(start)), target_(std::move(target)), gamma_(gamma) {
  if (!start_.is_square() || !target_.is_square() || start_.n_vars() != target_.n_vars()) {
    throw DimensionMismatch("homotopy needs square start and target systems of equal dimension");
  }
  if (gamma_ == Complex(0.0)) throw std::invalid_argument("gamma must be nonzero");
  start_eval_ = SystemEvaluator(start_);
  target_eval_ = SystemEvaluator(target_);
}

CVector HomotopyPair::eval(std::span<const Complex> z, double t) const {
  const std::size_t n = dimension();
  if (z.size() != n) throw DimensionMismatch("homotopy point has wrong length");
  CVector g(n);
  CVector f(n);
  start_eval_.values(z, g);
  target_eval_.values(z, f);
  CVector h(n);
  const Complex gt = gamma_ * t;
  for (std::size_t i = 0; i < n; ++i) h[i] = (1.0 - t) * g[i] + gt * f[i];
  return h;
}

void HomotopyPair::eval_with_jacobian(std::span<const Complex> z, double t, CVector& h, CMatrix& dhdz,
                                      CVector* dhdt) const {
  const std::size_t n = dimension();
  if (z.size() != n) throw DimensionMismatch("homotopy point has wrong length");
  CVector g(n);
  CVector f(n);
  CMatrix dg;
  CMatrix df;
  start_eval_.values_and_jacobian(z, g, dg);
  target_eval_.values_and_jacobian(z, f, df);
  const Complex gt = gamma_ * t;
  const double s = 1.0 - t;
  h.resize(n);
  if (dhdz.rows() != n || dhdz.cols() != n) dhdz = CMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = s * g[i] + gt * f[i];
    for (std::size_t j = 0; j < n; ++j) dhdz(i, j) = s * dg(i, j) + gt * df(i, j);
  }
  if (dhdt != nullptr) {
    dhdt->resize(n);
    for (std::size_t i = 0; i < n; ++i) (*dhdt)[i] = gamma_ * f[i] - g[i];
  }
}

double HomotopyPair::relative_residual(std::span<const Complex> z, double t) const {
  const CVector h = eval(z, t);
  return relative_residual(z, t, h);
}

double HomotopyPair::relative_residual(std::span<const Complex> z, double t, std::span<const Complex> h) const {
  const std::size_t n = dimension();
  std::vector<double> sg(n);
  std::vector<double> sf(n);
  start_eval_.scales(z, sg);
  target_eval_.scales(z, sf);
  const double ag = std::abs(gamma_) * t;
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(h[i]) / (1.0 + (1.0 - t) * sg[i] + ag * sf[i]));
  return r;
}

CVector homotopy_eval(const HomotopyPair& h, std::span<const Complex> z, double t) { return h.eval(z, t); }

NewtonResult newton_correct(const HomotopyPair& h, std::span<const Complex> z, double t,
                            const TrackConfig& cfg) {
  NewtonResult r;
  r.z.assign(z.begin(), z.end());
  CVector hv;
  CMatrix jac;
  for (;;) {
    h.eval_with_jacobian(r.z, t, hv, jac, nullptr);
    r.residual = norm_inf(hv);
    r.relative_residual = h.relative_residual(r.z, t, hv);
    if (r.relative_residual <= cfg.newton_tol) {
      r.status = NewtonStatus::Converged;
      return r;
    }
    if (r.iterations >= cfg.newton_max_iters) {
      r.status = NewtonStatus::NoConvergence;
      return r;
    }
    const auto step = solve_scaled(jac, hv);
    if (!step) {
      r.status = NewtonStatus::SingularJacobian;
      return r;
    }
    const CVector& dz = *step;
    for (std::size_t i = 0; i < dz.size(); ++i) r.z[i] -= dz[i];
    ++r.iterations;
    // Update at roundoff level: the residual cannot improve further.
    if (norm_inf(dz) <= kStagnationTol * (1.0 + norm_inf(r.z)) && r.relative_residual <= 100.0 * cfg.newton_tol) {
      hv = h.eval(r.z, t);
      r.residual = norm_inf(hv);
      r.relative_residual = h.relative_residual(r.z, t, hv);
      r.status = r.relative_residual <= 100.0 * cfg.newton_tol ? NewtonStatus::Converged : NewtonStatus::NoConvergence;
      return r;
    }
  }
}

CVector polish(const SystemEvaluator& F, std::span<const Complex> z, int steps) {
  CVector best(z.begin(), z.end());
  CVector vals(F.size());
  CMatrix jac;
  F.values_and_jacobian(best, vals, jac);
  double best_res = norm_inf(vals);
  for (int i = 0; i < steps; ++i) {
    const auto dz = solve_scaled(jac, vals);
    if (!dz) break;
    CVector next = best;
    for (std::size_t j = 0; j < next.size(); ++j) next[j] -= (*dz)[j];
    F.values_and_jacobian(next, vals, jac);
    const double res = norm_inf(vals);
    if (!(res < best_res)) break;
    best = std::move(next);
    best_res = res;
  }
  return best;
}

CVector davidenko_rhs(const HomotopyPair& h, std::span<const Complex> z, double t) {
  CVector hv;
  CVector dhdt;
  CMatrix jac;
  h.eval_with_jacobian(z, t, hv, jac, &dhdt);
  for (auto& v : dhdt) v = -v;
  auto dz = solve_scaled(std::move(jac), std::move(dhdt));
  if (!dz) throw SingularMatrix("homotopy Jacobian is singular");
  return std::move(*dz);
}

CVector euler_predict(const HomotopyPair& h, std::span<const Complex> z, double t, double dt) {
  const CVector dz = davidenko_rhs(h, z, t);
  CVector out(z.begin(), z.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += dt * dz[i];
  return out;
}

std::string to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Converged:
      return "converged";
    case PathStatus::Divergent:
      return "divergent";
    case PathStatus::Failed:
      return "failed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Path tracking

namespace {

// In-path corrector: few iterations, each Newton update must contract.
bool correct_in_path(const HomotopyPair& h, CVector& z, double t, const TrackConfig& cfg) {
  CVector hv;
  CMatrix jac;
  double prev_step = 0.0;
  for (int it = 0; it < cfg.corrector_max_iters; ++it) {
    h.eval_with_jacobian(z, t, hv, jac, nullptr);
    const auto solved = solve_scaled(jac, hv);
    if (!solved) return false;
    const CVector& dz = *solved;
    const double step = norm_inf(dz);
    if (it > 0 && step > 0.5 * prev_step) return false;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= dz[i];
    if (!std::isfinite(step)) return false;
    if (step <= cfg.newton_tol * (1.0 + norm_inf(z))) return true;
    prev_step = step;
  }
  return h.relative_residual(z, t) <= cfg.newton_tol;
}

// Newton at t = 1 with the jump, conditioning and residual guards.
bool refine_at_one(const HomotopyPair& h, const CVector& z, const TrackConfig& cfg, PathResult& out) {
  // The absolute Newton tolerance can sit below the roundoff floor at large
  // |z|; the relative residual below decides acceptance.
  const auto refined = newton_correct(h, z, 1.0, cfg);
  if (refined.status == NewtonStatus::SingularJacobian) return false;
  CVector delta(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) delta[i] = refined.z[i] - z[i];
  if (norm_inf(delta) > 0.1 * std::max(1.0, norm_inf(z))) return false;
  const CVector endpoint = polish(h.target_evaluator(), refined.z);
  CVector vals(h.dimension());
  CMatrix jac;
  h.target_evaluator().values_and_jacobian(endpoint, vals, jac);
  if (condition_estimate(jac) > cfg.max_condition) return false;
  const double rel = h.target().relative_residual(endpoint);
  if (!(rel <= 100.0 * cfg.newton_tol)) return false;
  out.status = PathStatus::Converged;
  out.endpoint = endpoint;
  out.t_reached = 1.0;
  out.residual = norm_inf(vals);
  out.relative_residual = rel;
  return true;
}

PathResult finish_at_one(const HomotopyPair& h, const CVector& z, double t, int steps,
                         const TrackConfig& cfg) {
  PathResult out;
  out.steps_taken = steps;
  out.t_reached = t;
  const double znorm = norm_inf(z);
  if (refine_at_one(h, z, cfg, out)) return out;

  // Refinement failed: follow the tail geometrically in (1 - t) until the norm
  // crosses divergence_norm or 1 - t reaches the floor.
  constexpr double kTailFloor = 1e-12;
  constexpr double kMinFraction = 1e-3;
  CVector zt = z;
  double tt = t;
  double fraction = 0.5;
  int successes = 0;
  bool diverged = znorm > cfg.divergence_norm;
  while (!diverged && 1.0 - tt > kTailFloor && steps < cfg.max_steps) {
    const double dt = fraction * (1.0 - tt);
    CVector zn;
    try {
      zn = euler_predict(h, zt, tt, dt);
    } catch (const SingularMatrix&) {
      break;
    }
    ++steps;
    if (correct_in_path(h, zn, tt + dt, cfg)) {
      zt = std::move(zn);
      tt += dt;
      diverged = norm_inf(zt) > cfg.divergence_norm;
      if (++successes >= 3) {
        fraction = std::min(fraction * 1.5, 0.9);
        successes = 0;
      }
    } else {
      fraction *= 0.5;
      successes = 0;
      if (fraction < kMinFraction) break;
    }
  }
  out.steps_taken = steps;
  if (!diverged && refine_at_one(h, zt, cfg, out)) return out;
  out.status = diverged ? PathStatus::Divergent : PathStatus::Failed;
  out.endpoint = zt;
  out.t_reached = tt;
  out.steps_taken = steps;
  out.residual = norm_inf(h.eval(zt, tt));
  return out;
}

}  // namespace

PathResult track_path(const HomotopyPair& h, std::span<const Complex> z0, const TrackConfig& cfg) {
  if (z0.size() != h.dimension()) throw DimensionMismatch("start point has wrong length");
  if (h.relative_residual(z0, 0.0) > cfg.newton_tol) {
    throw InvalidStart("start point does not satisfy the start system");
  }
  CVector z(z0.begin(), z0.end());
  double t = 0.0;
  double step = cfg.initial_step;
  int successes = 0;
  int steps = 0;
  const double t_end = 1.0 - cfg.t_endgame;
  // Norms of recently accepted points, for the growth test on step collapse.
  std::vector<double> norm_history{norm_inf(z)};

  auto stop = [&](PathStatus s) {
    PathResult r;
    r.status = s;
    r.endpoint = z;
    r.t_reached = t;
    r.residual = norm_inf(h.eval(z, t));
    r.steps_taken = steps;
    return r;
  };

  while (t < t_end) {
    if (steps >= cfg.max_steps) {
      return stop(norm_inf(z) > cfg.divergence_norm ? PathStatus::Divergent : PathStatus::Failed);
    }
    const bool last = step >= t_end - t;
    const double dt = last ? t_end - t : step;
    CVector zn;
    try {
      zn = euler_predict(h, z, t, dt);
    } catch (const SingularMatrix&) {
      return stop(PathStatus::Failed);
    }
    ++steps;
    const double tn = last ? t_end : t + dt;
    if (correct_in_path(h, zn, tn, cfg)) {
      z = std::move(zn);
      t = tn;
      const double zn_norm = norm_inf(z);
      norm_history.push_back(zn_norm);
      if (zn_norm > cfg.divergence_norm) return stop(PathStatus::Divergent);
      if (++successes >= 3) {
        step = std::min(step * 1.5, cfg.max_step);
        successes = 0;
      }
    } else {
      step *= 0.5;
      successes = 0;
      if (step < cfg.min_step) {
        const std::size_t m = norm_history.size();
        const double earlier = norm_history[m > 5 ? m - 6 : 0];
        const bool growing = norm_history.back() > earlier;
        return stop(growing ? PathStatus::Divergent : PathStatus::Failed);
      }
    }
  }
  return finish_at_one(h, z, t, steps, cfg);
}

namespace {

PathResult track_job(const PathJob& job, const TrackConfig& cfg) {
  try {
    return track_path(*job.homotopy, job.start, cfg);
  } catch (const std::exception&) {
    PathResult r;
    r.status = PathStatus::Failed;
    r.endpoint = job.start;
    return r;
  }
}

}  // namespace

std::vector<PathResult> track_batch_serial(std::span<const PathJob> jobs, const TrackConfig& cfg) {
  std::vector<PathResult> out(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = track_job(jobs[i], cfg);
  return out;
}

std::vector<PathResult> track_batch(std::span<const PathJob> jobs, const TrackConfig& cfg, int threads) {
  std::vector<PathResult> out(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = track_job(jobs[static_cast<std::size_t>(i)], cfg);
  }
  (void)threads;
  return out;
}

}  // namespace lph
