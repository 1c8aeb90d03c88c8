#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lph/lph.hpp"

namespace lph {

using RVector = std::vector<double>;

/// {f, J_f^T lambda - beta}: critical points of x -> beta . x on V(f).
struct CriticalSystem {
  PolySystem base;
  LPHProblem problem;
};

CriticalSystem build_critical_system(const PolySystem& f, std::span<const double> beta);

/// f with the hyperplane beta . x + c appended.
PolySystem augment(const PolySystem& f, std::span<const double> beta, double c);

struct RealFilterConfig {
  double tau_imag = 1e-6;
  bool refine = true;

  void validate() const;
};

/// Keeps points whose imaginary parts are all below tau_imag, as real vectors.
/// With refine, each kept point is polished by Newton on `system` from its real
/// part and must end real with relative residual <= 1e-8.
std::vector<RVector> real_filter(const std::vector<CVector>& points, const RealFilterConfig& cfg,
                                 const PolySystem& system, const TrackConfig& track = {});

struct RealWitnessPoint {
  RVector x;
  /// Number of augmentation hyperplanes in the system that produced the point.
  int stage = 0;
  /// ||f(x)||_inf for the original f.
  double residual = 0.0;
};

struct StageReport {
  int stage = 0;
  /// Equations in the stage system.
  std::size_t equations = 0;
  std::size_t D = 0;
  std::size_t omega = 0;
  PathCounts counts;
  std::uint64_t bound = 0;
  std::size_t complex_solutions = 0;
  std::size_t real_solutions = 0;
};

struct RealWitnessSet {
  std::vector<RealWitnessPoint> points;
  /// Objective direction of each non-square stage; betas[s] also defines the
  /// hyperplane added after stage s.
  std::vector<RVector> betas;
  std::vector<double> c_values;
  std::vector<StageReport> stages;
  std::vector<std::string> warnings;
};

struct RwsConfig {
  TrackConfig track;
  RealFilterConfig filter;
  SolveOptions solve;
  /// Overrides the drawn stage-0 objective.
  std::optional<RVector> beta;
  /// Overrides the drawn hyperplane constants, stage by stage.
  std::vector<double> c;
};

/// Real witness set of f: every stage's real critical points, then the real
/// points of the final square system, deduplicated with the earliest stage kept.
RealWitnessSet rws(const PolySystem& f, const RwsConfig& cfg, Rng& rng);

/// sum_{j=0}^{n-k} C(n-1-j, n-k-j) (d_f - 1)^(n-k-j) D
std::uint64_t witness_bound(int n, int k, int d_f, std::uint64_t D);

/// C(n-1, k-1) (d_f - 1)^(n-k) prod deg f_i
std::uint64_t bezout_chain_bound(const PolySystem& f);

/// d_f^n prod deg f_i
std::uint64_t total_degree_bound(const PolySystem& f);

struct FullRankReport {
  std::vector<std::size_t> ranks;
  /// Indices of samples where the Jacobian has rank below k.
  std::vector<std::size_t> deficient;

  bool ok() const { return deficient.empty(); }
};

/// Numerical rank of the k x n Jacobian of f at each sample (threshold 1e-8 ||J||).
FullRankReport full_rank_check(const PolySystem& f, const std::vector<CVector>& samples);

}  // namespace lph
