#pragma once

#include <span>
#include <string>
#include <vector>

#include "lph/linalg.hpp"
#include "lph/poly.hpp"

namespace lph {

/// Evaluates a polynomial system and its Jacobian from a flattened term list.
class SystemEvaluator {
 public:
  SystemEvaluator() = default;
  explicit SystemEvaluator(const PolySystem& system);

  std::size_t size() const { return n_polys_; }
  std::size_t n_vars() const { return n_vars_; }

  void values(std::span<const Complex> z, std::span<Complex> out) const;
  /// Fills out (size()) and jac (size() x n_vars()).
  void values_and_jacobian(std::span<const Complex> z, std::span<Complex> out, CMatrix& jac) const;
  /// sum_t |c_t| |z^t| for every polynomial.
  void scales(std::span<const Complex> z, std::span<double> out) const;

 private:
  struct Term {
    Complex coefficient;
    std::size_t exponent_offset;
  };
  struct Block {
    std::size_t begin;
    std::size_t end;
  };

  void fill_powers(std::span<const Complex> z, std::vector<Complex>& powers) const;
  Complex eval_block(const Block& b, const std::vector<Complex>& powers) const;
  void add_poly(const MultiPoly& p);

  std::size_t n_vars_ = 0;
  std::size_t n_polys_ = 0;
  std::vector<int> max_exp_;
  std::vector<std::size_t> power_offset_;
  std::vector<Term> terms_;
  std::vector<int> exponents_;
  std::vector<Block> value_blocks_;
  // Row-major (poly, var) derivative blocks.
  std::vector<Block> jacobian_blocks_;
};

struct TrackConfig {
  double initial_step = 0.05;
  double min_step = 1e-7;
  double max_step = 0.1;
  double newton_tol = 1e-10;
  int newton_max_iters = 10;
  /// Iteration cap for the corrector inside a path; small to avoid path jumping.
  int corrector_max_iters = 3;
  int max_steps = 10000;
  double divergence_norm = 1e7;
  /// Tracking stops at t = 1 - t_endgame before the final refinement at t = 1.
  double t_endgame = 1e-3;
  /// Row-equilibrated condition number above which a Jacobian is untrustworthy.
  double max_condition = 1e8;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// H(z, t) = (1 - t) * G(z) + gamma * t * F(z).
class HomotopyPair {
 public:
  HomotopyPair(PolySystem start, PolySystem target, Complex gamma);

  const PolySystem& start() const { return start_; }
  const PolySystem& target() const { return target_; }
  Complex gamma() const { return gamma_; }
  std::size_t dimension() const { return start_.n_vars(); }

  CVector eval(std::span<const Complex> z, double t) const;
  /// max_i |H_i| / (1 + (1 - t) s_G,i + |gamma| t s_F,i), s the term-magnitude sums.
  double relative_residual(std::span<const Complex> z, double t) const;
  double relative_residual(std::span<const Complex> z, double t, std::span<const Complex> h) const;
  /// H, dH/dz and, if requested, dH/dt = gamma * F - G.
  void eval_with_jacobian(std::span<const Complex> z, double t, CVector& h, CMatrix& dhdz,
                          CVector* dhdt) const;

  const SystemEvaluator& target_evaluator() const { return target_eval_; }

 private:
  PolySystem start_;
  PolySystem target_;
  SystemEvaluator start_eval_;
  SystemEvaluator target_eval_;
  Complex gamma_;
};

CVector homotopy_eval(const HomotopyPair& h, std::span<const Complex> z, double t);

enum class NewtonStatus { Converged, SingularJacobian, NoConvergence };

struct NewtonResult {
  NewtonStatus status = NewtonStatus::NoConvergence;
  CVector z;
  int iterations = 0;
  /// ||H(z, t)||_inf
  double residual = 0.0;
  double relative_residual = 0.0;
};

/// Full Newton on z -> H(z, t) until the relative residual of H is at most
/// newton_tol.
NewtonResult newton_correct(const HomotopyPair& h, std::span<const Complex> z, double t,
                            const TrackConfig& cfg);

/// Up to `steps` Newton steps on F from z, keeping the iterate with the lowest
/// ||F||_inf. Used after convergence to push endpoints down to roundoff.
CVector polish(const SystemEvaluator& F, std::span<const Complex> z, int steps = 3);

/// dz/dt from (dH/dz) dz/dt = -dH/dt. Throws SingularMatrix.
CVector davidenko_rhs(const HomotopyPair& h, std::span<const Complex> z, double t);

/// One explicit Euler step along the Davidenko ODE.
CVector euler_predict(const HomotopyPair& h, std::span<const Complex> z, double t, double dt);

enum class PathStatus { Converged, Divergent, Failed };

std::string to_string(PathStatus s);

struct PathResult {
  PathStatus status = PathStatus::Failed;
  /// Meaningful only when Converged.
  CVector endpoint;
  double t_reached = 0.0;
  /// ||F(endpoint)||_inf for the target system.
  double residual = 0.0;
  /// Backward error of F at the endpoint; the Converged test uses this.
  double relative_residual = 0.0;
  int steps_taken = 0;
};

/// Tracks one path from t = 0 to t = 1. Throws InvalidStart when the relative
/// residual of the start system at z0 exceeds newton_tol.
PathResult track_path(const HomotopyPair& h, std::span<const Complex> z0, const TrackConfig& cfg);

struct PathJob {
  const HomotopyPair* homotopy = nullptr;
  CVector start;
};

/// Reference implementation: one path after another.
std::vector<PathResult> track_batch_serial(std::span<const PathJob> jobs, const TrackConfig& cfg);

/// OpenMP implementation; results are bit-identical to track_batch_serial.
/// threads <= 0 uses the OpenMP default.
std::vector<PathResult> track_batch(std::span<const PathJob> jobs, const TrackConfig& cfg,
                                    int threads = 0);

}  // namespace lph
