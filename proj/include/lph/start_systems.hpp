#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lph/poly.hpp"
#include "lph/rng.hpp"
#include "lph/tracker.hpp"

namespace lph {

struct SolveOptions {
  /// Upper bound on concurrent path tracking; <= 0 means OpenMP default.
  int threads = 0;
  /// Endpoints closer than this in the inf-norm are merged.
  double dedup_tol = 1e-6;
  /// Use the serial reference batch instead of the OpenMP one.
  bool serial = false;
};

struct PathCounts {
  std::size_t paths = 0;
  std::size_t converged = 0;
  std::size_t divergent = 0;
  std::size_t failed = 0;

  void add(const PathResult& r);
};

std::vector<PathResult> run_batch(std::span<const PathJob> jobs, const TrackConfig& cfg,
                                  const SolveOptions& opts);

/// run_batch followed by a path-crossing check: every job whose converged
/// endpoint coincides with another one (within dedup_tol) is tracked again with
/// steps ten times smaller, at most twice.
std::vector<PathResult> run_batch_checked(std::span<const PathJob> jobs, const TrackConfig& cfg,
                                          const SolveOptions& opts);

/// Keeps the first representative of each cluster (order preserved).
std::vector<CVector> dedup_points(const std::vector<CVector>& points, double tol);

/// f together with n - k random affine-linear slicing polynomials.
struct SlicedSystem {
  PolySystem f;
  std::vector<MultiPoly> slice;

  PolySystem square() const;
};

/// Each slicing polynomial has unit-modulus complex coefficients with random
/// argument and a real constant term 2u, u uniform in [-1, 1].
SlicedSystem random_slice(const PolySystem& f, Rng& rng);

/// Start system {z_i^{d_i} - r_i}.
struct TotalDegreeStart {
  std::vector<int> degrees;
  CVector offsets;

  PolySystem system() const;
  std::size_t root_count() const;
  /// Root with mixed-radix index (coordinate 0 varies fastest).
  CVector root(std::size_t index) const;
};

std::vector<CVector> total_degree_roots(const TotalDegreeStart& ts);

struct SquareSolution {
  std::vector<CVector> points;
  PathCounts counts;
};

/// Total-degree homotopy solve of a square system; returns deduplicated
/// converged endpoints with residual <= 1e-8.
SquareSolution solve_square_report(const PolySystem& system, const TrackConfig& cfg, Rng& rng,
                                   const SolveOptions& opts = {});
std::vector<CVector> solve_square(const PolySystem& system, const TrackConfig& cfg, Rng& rng,
                                  const SolveOptions& opts = {});

struct WitnessSet {
  SlicedSystem sliced;
  /// V(f) intersected with the slice.
  std::vector<CVector> points;
  PathCounts counts;

  std::size_t degree() const { return points.size(); }
};

WitnessSet witness_points(const PolySystem& f, Rng& rng, const TrackConfig& cfg,
                          const SolveOptions& opts = {});

}  // namespace lph
