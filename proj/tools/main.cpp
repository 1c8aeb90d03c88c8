#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lph/cli.hpp"

int main(int argc, char** argv) {
  using namespace lph::cli;

  CLI::App app{"Linear product homotopy solver and real witness sets"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  cfg.seed = seed_from_env();
  std::string beta_text;
  std::string c_text;
  app.add_option("--seed", cfg.seed, "Random seed (default: LPH_SEED or 0)");
  app.add_flag("--json", cfg.json, "Write JSON to stdout");
  app.add_option("--threads", cfg.threads, "Worker threads, 0 for the OpenMP default");
  app.add_option("--newton-tol", cfg.newton_tol, "Newton tolerance (relative backward error)");
  app.add_option("--tau-imag", cfg.tau_imag, "Imaginary-part threshold for real points");
  app.add_option("--dedup-tol", cfg.dedup_tol, "Endpoint merge distance");
  app.add_option("--max-steps", cfg.max_steps, "Step limit per path");
  app.add_option("--beta", beta_text, "Objective direction, comma separated reals");
  app.add_option("--c", c_text, "Hyperplane constants, comma separated");

  std::string input;
  std::string solutions;
  auto* solve = app.add_subcommand("solve", "Solve {f, J lambda - beta} by the linear product homotopy");
  solve->add_option("input", input, "Input file")->required();
  auto* witness = app.add_subcommand("witness", "Compute a real witness set of V(f)");
  witness->add_option("input", input, "Input file")->required();
  auto* bound = app.add_subcommand("bound", "Print root count bounds");
  bound->add_option("input", input, "Input file")->required();
  auto* verify = app.add_subcommand("verify", "Check residuals of a solutions JSON file");
  verify->add_option("input", input, "Input file")->required();
  verify->add_option("solutions", solutions, "Solutions JSON file")->required();

  try {
    app.parse(argc, argv);
    if (!beta_text.empty()) cfg.beta = parse_real_list(beta_text);
    if (!c_text.empty()) cfg.c = parse_real_list(c_text);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (*solve) return cmd_solve(input, cfg, std::cout, std::cerr);
  if (*witness) return cmd_witness(input, cfg, std::cout, std::cerr);
  if (*bound) return cmd_bound(input, cfg, std::cout, std::cerr);
  return cmd_verify(input, solutions, cfg, std::cout, std::cerr);
}
