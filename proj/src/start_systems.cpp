#include "lph/start_systems.hpp"

#include <cmath>
#include <numbers>

namespace lph {

namespace {
constexpr double kAcceptResidual = 1e-8;
}

void PathCounts::add(const PathResult& r) {
  ++paths;
  switch (r.status) {
    case PathStatus::Converged:
      ++converged;
      break;
    case PathStatus::Divergent:
      ++divergent;
      break;
    case PathStatus::Failed:
      ++failed;
      break;
  }
}

std::vector<PathResult> run_batch(std::span<const PathJob> jobs, const TrackConfig& cfg,
                                  const SolveOptions& opts) {
  return opts.serial ? track_batch_serial(jobs, cfg) : track_batch(jobs, cfg, opts.threads);
}

namespace {

double distance_inf(const CVector& a, const CVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

std::vector<PathResult> run_batch_checked(std::span<const PathJob> jobs, const TrackConfig& cfg,
                                          const SolveOptions& opts) {
  constexpr int kRetries = 2;
  auto results = run_batch(jobs, cfg, opts);
  TrackConfig fine = cfg;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    std::vector<std::size_t> crossed;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].status != PathStatus::Converged) continue;
      for (std::size_t j = 0; j < results.size(); ++j) {
        if (j != i && results[j].status == PathStatus::Converged &&
            distance_inf(results[i].endpoint, results[j].endpoint) < opts.dedup_tol) {
          crossed.push_back(i);
          break;
        }
      }
    }
    if (crossed.empty()) break;
    fine.max_step /= 10.0;
    fine.initial_step /= 10.0;
    fine.min_step = std::min(fine.min_step, fine.initial_step);
    std::vector<PathJob> again;
    for (std::size_t i : crossed) again.push_back(jobs[i]);
    auto redone = run_batch(again, fine, opts);
    for (std::size_t m = 0; m < crossed.size(); ++m) results[crossed[m]] = std::move(redone[m]);
  }
  return results;
}

std::vector<CVector> dedup_points(const std::vector<CVector>& points, double tol) {
  std::vector<CVector> out;
  for (const auto& p : points) {
    bool seen = false;
    for (const auto& q : out) {
      if (distance_inf(p, q) < tol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(p);
  }
  return out;
}

PolySystem SlicedSystem::square() const {
  PolySystem s = f;
  for (const auto& l : slice) s.push_back(l);
  return s;
}

SlicedSystem random_slice(const PolySystem& f, Rng& rng) {
  const std::size_t n = f.n_vars();
  if (f.size() >= n) throw DomainError("slicing needs fewer equations than variables");
  SlicedSystem out{f, {}};
  for (std::size_t i = 0; i < n - f.size(); ++i) {
    CVector coeffs(n);
    for (auto& c : coeffs) c = rng.unit_complex();
    const double constant = 2.0 * rng.uniform(-1.0, 1.0);
    out.slice.push_back(MultiPoly::linear(coeffs, Complex(constant)));
  }
  return out;
}

PolySystem TotalDegreeStart::system() const {
  const std::size_t n = degrees.size();
  PolySystem s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(MultiPoly::variable(n, i).pow(degrees[i]) - MultiPoly::constant(n, offsets[i]));
  }
  return s;
}

std::size_t TotalDegreeStart::root_count() const {
  std::size_t c = 1;
  for (int d : degrees) c *= static_cast<std::size_t>(d);
  return c;
}

CVector TotalDegreeStart::root(std::size_t index) const {
  CVector z(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const auto d = static_cast<std::size_t>(degrees[i]);
    const std::size_t j = index % d;
    index /= d;
    const double mag = std::pow(std::abs(offsets[i]), 1.0 / static_cast<double>(d));
    const double arg =
        (std::arg(offsets[i]) + 2.0 * std::numbers::pi * static_cast<double>(j)) / static_cast<double>(d);
    z[i] = std::polar(mag, arg);
  }
  return z;
}

std::vector<CVector> total_degree_roots(const TotalDegreeStart& ts) {
  std::vector<CVector> roots;
  const std::size_t count = ts.root_count();
  roots.reserve(count);
  for (std::size_t i = 0; i < count; ++i) roots.push_back(ts.root(i));
  return roots;
}

SquareSolution solve_square_report(const PolySystem& system, const TrackConfig& cfg, Rng& rng,
                                   const SolveOptions& opts) {
  if (!system.is_square()) throw DimensionMismatch("solve_square needs a square system");
  SquareSolution out;
  const std::size_t n = system.size();
  TotalDegreeStart ts;
  for (const auto& p : system.polys()) {
    if (p.is_zero()) throw ZeroPolynomial("square system contains the zero polynomial");
    ts.degrees.push_back(p.degree());
  }
  ts.offsets.resize(n);
  for (auto& r : ts.offsets) r = rng.unit_complex();
  const Complex gamma = rng.unit_complex();
  // A nonzero constant equation has no roots at all.
  for (int d : ts.degrees) {
    if (d == 0) return out;
  }

  const HomotopyPair h(ts.system(), system, gamma);
  std::vector<PathJob> jobs;
  jobs.reserve(ts.root_count());
  for (std::size_t i = 0; i < ts.root_count(); ++i) jobs.push_back({&h, ts.root(i)});
  const auto results = run_batch_checked(jobs, cfg, opts);

  std::vector<CVector> endpoints;
  for (const auto& r : results) {
    out.counts.add(r);
    if (r.status == PathStatus::Converged && system.relative_residual(r.endpoint) <= kAcceptResidual) {
      endpoints.push_back(r.endpoint);
    }
  }
  if (out.counts.paths > 0 && out.counts.failed == out.counts.paths) {
    throw AllPathsFailed("every total-degree path failed");
  }
  out.points = dedup_points(endpoints, opts.dedup_tol);
  return out;
}

std::vector<CVector> solve_square(const PolySystem& system, const TrackConfig& cfg, Rng& rng,
                                  const SolveOptions& opts) {
  return solve_square_report(system, cfg, rng, opts).points;
}

WitnessSet witness_points(const PolySystem& f, Rng& rng, const TrackConfig& cfg, const SolveOptions& opts) {
  WitnessSet w{random_slice(f, rng), {}, {}};
  auto solved = solve_square_report(w.sliced.square(), cfg, rng, opts);
  w.points = std::move(solved.points);
  w.counts = solved.counts;
  return w;
}

}  // namespace lph
