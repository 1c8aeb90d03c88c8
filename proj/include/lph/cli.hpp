#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lph/rws.hpp"

namespace lph::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kInputError = 2,
  kNumericalFailure = 3,
};

/// Contents of an input file.
///
///   vars: x y z
///   f:
///     x^2 + y^2 + z^2 - 1
///   J: jacobian            (or one row per line, entries separated by ';')
///   beta: 1 0 0            (a complex entry is written re,im)
///
/// Blank lines and text after '#' are ignored.
struct InputSystem {
  std::vector<std::string> vars;
  PolySystem f;
  /// Explicit J block; absent means the Jacobian transpose of f.
  std::optional<PolyMatrix> J;
  std::optional<CVector> beta;

  PolyMatrix resolved_J() const;
};

/// Throws ParseError.
InputSystem parse_input(const std::string& text);
InputSystem read_input(const std::string& path);

/// Comma-separated reals, e.g. "0.874645,1.0351". Throws std::invalid_argument.
std::vector<double> parse_real_list(const std::string& text);

struct RunConfig {
  std::uint64_t seed = 0;
  bool json = false;
  int threads = 0;
  double newton_tol = 1e-10;
  double tau_imag = 1e-6;
  double dedup_tol = 1e-6;
  int max_steps = 10000;
  std::optional<RVector> beta;
  std::vector<double> c;

  /// Throws std::invalid_argument on non-positive tolerances or limits.
  void validate() const;
  TrackConfig track() const;
  SolveOptions solve() const;
};

/// LPH_SEED if set and numeric, otherwise 0.
std::uint64_t seed_from_env();

int cmd_solve(const std::string& input_path, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_witness(const std::string& input_path, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bound(const std::string& input_path, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& input_path, const std::string& solutions_path, const RunConfig& cfg,
               std::ostream& out, std::ostream& err);

}  // namespace lph::cli
