#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lph/linalg.hpp"
#include "lph/poly.hpp"
#include "lph/rng.hpp"
#include "lph/start_systems.hpp"
#include "lph/tracker.hpp"

namespace lph {

/// The square system F(x, lambda) = {f, J lambda - beta} in n + k unknowns.
struct LPHProblem {
  PolySystem f;
  /// n x k, entry (i, j) multiplies lambda_j in equation i.
  PolyMatrix J;
  CVector beta;

  std::size_t n() const { return f.n_vars(); }
  std::size_t k() const { return f.size(); }
  /// Max degree over the entries of J; 0 when J is constant or zero.
  int d() const;

  /// Throws DomainError, DimensionMismatch or InvalidBeta.
  void validate() const;
  /// {f, J lambda - beta} over (x, lambda).
  PolySystem square_system() const;
};

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// C(n-1, n-k) * d^(n-k) * D
std::uint64_t root_bound(int n, int k, int d, std::uint64_t D);

struct NormalizedProblem {
  LPHProblem original;
  CMatrix A;
  /// A * J
  PolyMatrix J_prime;

  /// {f, J' lambda - e_n}, same solutions as the original square system.
  PolySystem square_system() const;
};

NormalizedProblem normalize(const LPHProblem& p);

/// Start system with g_i = l_i1 ... l_id h_i for i < n and
/// g_n = sum_j lambda_j g'_nj - 1, all in the n + k variables (x, lambda).
struct LinearProductG {
  std::size_t n = 0;
  std::size_t k = 0;
  int d = 0;
  /// (n - 1) x d affine-linear factors in x (n variables).
  std::vector<std::vector<MultiPoly>> l;
  /// (n - 1) x k coefficients of the homogeneous lambda-linear factors h_i.
  std::vector<CVector> h;
  /// Last row of J' (polynomials in x).
  std::vector<MultiPoly> g_n_row;
  PolySystem f;

  MultiPoly g_n() const;
  /// {f, g_1, ..., g_n} in n + k variables.
  PolySystem assemble() const;
};

/// Throws DegreeZeroJacobianRow when d < 1.
LinearProductG build_G(const NormalizedProblem& np, Rng& rng);

struct ChoiceIndex {
  /// Length n - 1, exactly n - k ones.
  std::vector<int> alpha;
  /// 0-based factor index for each row with alpha_i = 1, in row order.
  std::vector<int> factor_pick;
};

/// All C(n-1, n-k) * d^(n-k) choices, lexicographic on alpha then factor_pick.
std::vector<ChoiceIndex> enumerate_choices(int n, int k, int d);

/// The n - k linear factors picked by a choice.
std::vector<MultiPoly> chosen_factors(const LinearProductG& g, const ChoiceIndex& choice);

struct H1Result {
  std::vector<CVector> points;
  PathCounts counts;
};

/// Moves the points of {f, L} = 0 to {f, L'} = 0 along
/// {f, L}(1 - t) + gamma1 t {f, L'}. Non-converged paths are dropped.
H1Result h1_track(const std::vector<CVector>& M, const PolySystem& f, const std::vector<MultiPoly>& L,
                  const std::vector<MultiPoly>& L_prime, const TrackConfig& cfg, Complex gamma1,
                  const SolveOptions& opts = {});

/// Solves h_i(lambda) = 0 for alpha_i = 0 and g_n(x*, lambda) = 0.
/// Throws SingularMatrix.
CVector backsolve_lambda(std::span<const Complex> x_star, const LinearProductG& g,
                         const ChoiceIndex& choice);

struct LPHSolution {
  CVector x;
  CVector lambda;
  /// ||F(x, lambda)||_inf against the original problem.
  double residual = 0.0;
};

struct LPHReport {
  std::vector<LPHSolution> solutions;
  /// deg V(f)
  std::size_t D = 0;
  /// V(f) intersected with the random slice used for the first homotopy.
  std::vector<CVector> witness;
  /// Start points of the second homotopy.
  std::size_t omega = 0;
  /// Outcomes of the second homotopy paths.
  PathCounts counts;
  std::uint64_t bound = 0;
  int d = 0;
  std::vector<std::string> warnings;
};

LPHReport lph_solve(const LPHProblem& p, const TrackConfig& cfg, Rng& rng, const SolveOptions& opts = {});

}  // namespace lph
