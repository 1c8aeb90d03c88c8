#include "lph/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lph::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kVerifyTolerance = 1e-6;
constexpr double kVerifyRelativeTolerance = 1e-10;

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// nlohmann's dump prints the shortest round-trip form; output files need a
// fixed 17-digit format so they are byte-stable.
void dump(const Json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(key).dump() << ": ";
        dump(value, os, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); }) ||
                        std::all_of(j.begin(), j.end(), [](const Json& e) {
                          return e.is_array() && std::none_of(e.begin(), e.end(),
                                                              [](const Json& x) { return x.is_structured(); });
                        });
      if (j.empty() || flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump(j[i], os, indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump(j[i], os, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

void write_json(const Json& j, std::ostream& os) {
  dump(j, os, 0);
  os << "\n";
}

Json complex_array(std::span<const Complex> z) {
  Json a = Json::array();
  for (const auto& v : z) a.push_back(Json::array({v.real(), v.imag()}));
  return a;
}

std::string complex_text(Complex v) {
  std::ostringstream os;
  os.precision(10);
  os << v.real();
  if (v.imag() != 0.0) os << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i";
  return os.str();
}

std::string vector_text(std::span<const Complex> z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) s += (i ? ", " : "") + complex_text(z[i]);
  return s + ")";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Column (1-based) of `part` inside `line`, for error messages.
int column_of(const std::string& line, const std::string& part) {
  const auto p = line.find(part);
  return p == std::string::npos ? 1 : static_cast<int>(p) + 1;
}

double parse_number(const std::string& token, int line, int column) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("invalid number '" + token + "'", line, column);
  return v;
}

Json system_echo(const InputSystem& in, const PolyMatrix* J, const CVector* beta) {
  Json sys;
  sys["vars"] = in.vars;
  Json f = Json::array();
  for (const auto& p : in.f.polys()) f.push_back(to_string(p, in.vars));
  sys["f"] = f;
  if (J != nullptr) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < J->rows; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < J->cols; ++j) row.push_back(to_string((*J)(i, j), in.vars));
      rows.push_back(row);
    }
    sys["J"] = rows;
  }
  if (beta != nullptr) sys["beta"] = complex_array(*beta);
  return sys;
}

Json counts_json(const PathCounts& c) {
  return Json{{"paths", c.paths}, {"converged", c.converged}, {"divergent", c.divergent}, {"failed", c.failed}};
}

// Maps library exceptions onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

CVector solve_beta(const InputSystem& in, const RunConfig& cfg) {
  if (cfg.beta) return CVector(cfg.beta->begin(), cfg.beta->end());
  if (in.beta) return *in.beta;
  throw std::invalid_argument("solve needs a beta line or --beta");
}

}  // namespace

PolyMatrix InputSystem::resolved_J() const { return J ? *J : jacobian_transpose(f); }

InputSystem parse_input(const std::string& text) {
  InputSystem in;
  enum class Block { None, F, J } block = Block::None;
  bool have_vars = false;
  bool jacobian_directive = false;
  std::vector<std::vector<MultiPoly>> j_rows;
  std::vector<std::pair<std::string, int>> f_lines;
  std::vector<std::pair<std::string, int>> j_lines;
  std::string beta_text;
  int beta_line = 0;
  int beta_column = 0;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string line = raw.substr(0, raw.find('#'));
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto colon = body.find(':');
    const std::string head = colon == std::string::npos ? "" : trim(body.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : trim(body.substr(colon + 1));
    if (head == "vars") {
      std::istringstream names(rest);
      std::string name;
      while (names >> name) {
        const bool ident = (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') &&
                           std::all_of(name.begin(), name.end(), [](unsigned char c) {
                             return std::isalnum(c) || c == '_';
                           });
        if (!ident) throw ParseError("invalid variable name '" + name + "'", line_no, column_of(line, name));
        in.vars.push_back(name);
      }
      if (in.vars.empty()) throw ParseError("vars: needs at least one name", line_no, 1);
      have_vars = true;
      block = Block::None;
    } else if (head == "f") {
      block = Block::F;
      if (!rest.empty()) f_lines.emplace_back(rest, line_no);
    } else if (head == "J") {
      block = Block::J;
      if (rest == "jacobian") {
        jacobian_directive = true;
        block = Block::None;
      } else if (!rest.empty()) {
        j_lines.emplace_back(rest, line_no);
      }
    } else if (head == "beta") {
      beta_text = rest;
      beta_line = line_no;
      beta_column = column_of(line, rest);
      block = Block::None;
    } else if (block == Block::F) {
      f_lines.emplace_back(body, line_no);
    } else if (block == Block::J) {
      j_lines.emplace_back(body, line_no);
    } else {
      throw ParseError("expected vars:, f:, J: or beta:", line_no, column_of(line, body));
    }
  }
  if (!have_vars) throw ParseError("missing vars: line", std::max(line_no, 1), 1);

  // Re-reading the original line gives accurate error columns.
  std::vector<std::string> lines;
  {
    std::istringstream again(text);
    std::string l;
    while (std::getline(again, l)) lines.push_back(l);
  }
  auto parse_at = [&](const std::string& part, int ln) {
    return parse_poly(part, in.vars, ln, column_of(lines[static_cast<std::size_t>(ln - 1)], part) - 1);
  };

  in.f = PolySystem(in.vars.size());
  for (const auto& [t, ln] : f_lines) in.f.push_back(parse_at(t, ln));
  if (in.f.size() == 0) throw ParseError("missing f: block", std::max(line_no, 1), 1);

  if (!j_lines.empty()) {
    if (jacobian_directive) throw ParseError("J: jacobian given together with explicit rows", j_lines[0].second, 1);
    PolyMatrix J{j_lines.size(), 0, {}};
    for (const auto& [t, ln] : j_lines) {
      std::vector<MultiPoly> row;
      std::size_t start = 0;
      for (;;) {
        const auto semi = t.find(';', start);
        const std::string entry = trim(t.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
        if (entry.empty()) throw ParseError("empty J entry", ln, column_of(lines[static_cast<std::size_t>(ln - 1)], t));
        row.push_back(parse_at(entry, ln));
        if (semi == std::string::npos) break;
        start = semi + 1;
      }
      if (J.cols == 0) J.cols = row.size();
      if (row.size() != J.cols) throw ParseError("J rows have different lengths", ln, 1);
      for (auto& e : row) J.entries.push_back(std::move(e));
    }
    in.J = std::move(J);
  }

  if (beta_line > 0) {
    CVector beta;
    std::istringstream tokens(beta_text);
    std::string tok;
    while (tokens >> tok) {
      const int col = beta_column + static_cast<int>(beta_text.find(tok));
      const auto comma = tok.find(',');
      if (comma == std::string::npos) {
        beta.emplace_back(parse_number(tok, beta_line, col), 0.0);
      } else {
        beta.emplace_back(parse_number(tok.substr(0, comma), beta_line, col),
                          parse_number(tok.substr(comma + 1), beta_line, col + static_cast<int>(comma) + 1));
      }
    }
    if (beta.empty()) throw ParseError("beta: needs values", beta_line, beta_column);
    in.beta = std::move(beta);
  }
  return in;
}

InputSystem read_input(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot open " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  return parse_input(buf.str());
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const std::string tok = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("invalid number '" + tok + "' in list '" + text + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void RunConfig::validate() const {
  if (!(newton_tol > 0.0)) throw std::invalid_argument("--newton-tol must be positive");
  if (!(tau_imag > 0.0)) throw std::invalid_argument("--tau-imag must be positive");
  if (!(dedup_tol > 0.0)) throw std::invalid_argument("--dedup-tol must be positive");
  if (max_steps < 1) throw std::invalid_argument("--max-steps must be positive");
  if (threads < 0) throw std::invalid_argument("--threads must not be negative");
}

TrackConfig RunConfig::track() const {
  TrackConfig t;
  t.newton_tol = newton_tol;
  t.max_steps = max_steps;
  return t;
}

SolveOptions RunConfig::solve() const {
  SolveOptions s;
  s.threads = threads;
  s.dedup_tol = dedup_tol;
  return s;
}

std::uint64_t seed_from_env() {
  const char* v = std::getenv("LPH_SEED");
  if (v == nullptr) return 0;
  std::uint64_t seed = 0;
  const char* end = v + std::char_traits<char>::length(v);
  const auto [ptr, ec] = std::from_chars(v, end, seed);
  return ec == std::errc() && ptr == end ? seed : 0;
}

int cmd_solve(const std::string& input_path, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto in = read_input(input_path);
    const LPHProblem p{in.f, in.resolved_J(), solve_beta(in, cfg)};
    Rng rng(cfg.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = lph_solve(p, cfg.track(), rng, cfg.solve());
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& w : rep.warnings) err << "warning: " << w << "\n";

    if (cfg.json) {
      Json j;
      j["system"] = system_echo(in, &p.J, &p.beta);
      j["seed"] = cfg.seed;
      j["bound"] = rep.bound;
      Json counts = counts_json(rep.counts);
      counts.erase("paths");
      Json c{{"D", rep.D}, {"omega", rep.omega}};
      c.update(counts);
      j["counts"] = c;
      Json sols = Json::array();
      for (const auto& s : rep.solutions) {
        sols.push_back(Json{{"x", complex_array(s.x)}, {"lambda", complex_array(s.lambda)}, {"residual", s.residual}});
      }
      j["solutions"] = sols;
      write_json(j, out);
    } else {
      out << "D = " << rep.D << ", |Omega| = " << rep.omega << ", converged = " << rep.counts.converged
          << ", divergent = " << rep.counts.divergent << ", failed = " << rep.counts.failed << "\n";
      out << "bound = " << rep.bound << " (Jacobian entry degree " << rep.d << ")\n";
      out << "solutions = " << rep.solutions.size() << "\n";
      for (const auto& s : rep.solutions) {
        out << "  x = " << vector_text(s.x) << "  lambda = " << vector_text(s.lambda) << "  residual = " << s.residual
            << "\n";
      }
      out << "elapsed = " << elapsed << " s\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_witness(const std::string& input_path, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto in = read_input(input_path);
    RwsConfig rc;
    rc.track = cfg.track();
    rc.filter.tau_imag = cfg.tau_imag;
    rc.solve = cfg.solve();
    rc.c = cfg.c;
    if (cfg.beta) {
      rc.beta = *cfg.beta;
    } else if (in.beta) {
      RVector b;
      for (const auto& v : *in.beta) {
        if (v.imag() != 0.0) throw std::invalid_argument("witness needs a real beta");
        b.push_back(v.real());
      }
      rc.beta = std::move(b);
    }
    Rng rng(cfg.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = rws(in.f, rc, rng);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& msg : w.warnings) err << "warning: " << msg << "\n";

    if (cfg.json) {
      Json j;
      j["system"] = system_echo(in, nullptr, nullptr);
      j["seed"] = cfg.seed;
      j["betas"] = w.betas;
      j["c"] = w.c_values;
      Json stages = Json::array();
      for (const auto& s : w.stages) {
        stages.push_back(Json{{"stage", s.stage},
                              {"equations", s.equations},
                              {"D", s.D},
                              {"omega", s.omega},
                              {"bound", s.bound},
                              {"counts", counts_json(s.counts)},
                              {"complex_solutions", s.complex_solutions},
                              {"real_solutions", s.real_solutions}});
      }
      j["stages"] = stages;
      Json pts = Json::array();
      for (const auto& p : w.points) pts.push_back(Json{{"x", p.x}, {"stage", p.stage}, {"residual", p.residual}});
      j["solutions"] = pts;
      write_json(j, out);
    } else {
      for (std::size_t s = 0; s < w.betas.size(); ++s) {
        out << "stage " << s << ": beta = (";
        for (std::size_t i = 0; i < w.betas[s].size(); ++i) out << (i ? ", " : "") << w.betas[s][i];
        out << "), c = " << w.c_values[s] << "\n";
      }
      for (const auto& s : w.stages) {
        out << "stage " << s.stage << ": " << s.equations << " equations, " << s.complex_solutions
            << " complex solutions, " << s.real_solutions << " real\n";
      }
      out << "witness points = " << w.points.size() << "\n";
      for (const auto& p : w.points) {
        out << "  stage " << p.stage << "  x = (";
        for (std::size_t i = 0; i < p.x.size(); ++i) out << (i ? ", " : "") << format_double(p.x[i]);
        out << ")  residual = " << p.residual << "\n";
      }
      out << "elapsed = " << elapsed << " s\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_bound(const std::string& input_path, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto in = read_input(input_path);
    const int n = static_cast<int>(in.f.n_vars());
    const int k = static_cast<int>(in.f.size());
    if (!(n > k)) throw DomainError("bound needs fewer equations than variables");
    Rng rng(cfg.seed);
    const auto w = witness_points(in.f, rng, cfg.track(), cfg.solve());
    const int d_j = std::max(0, in.resolved_J().max_degree());
    const int d_f = in.f.max_degree();
    const std::uint64_t D = w.degree();
    const std::uint64_t lph = root_bound(n, k, d_j, D);
    const bool has_wb = d_f > 1;
    const std::uint64_t wb = has_wb ? witness_bound(n, k, d_f, D) : 0;
    const std::uint64_t chain = bezout_chain_bound(in.f);
    const std::uint64_t total = total_degree_bound(in.f);

    if (cfg.json) {
      Json j;
      j["system"] = system_echo(in, nullptr, nullptr);
      j["seed"] = cfg.seed;
      j["D"] = D;
      j["jacobian_degree"] = d_j;
      j["bound"] = lph;
      j["witness_bound"] = has_wb ? Json(wb) : Json("n/a");
      j["bezout_chain"] = chain;
      j["total_degree"] = total;
      j["mixed_volume"] = "n/a";
      j["counts"] = counts_json(w.counts);
      write_json(j, out);
    } else {
      out << "D = " << D << "\n";
      out << "lph bound = " << lph << " (Jacobian entry degree " << d_j << ")\n";
      out << "witness bound = " << (has_wb ? std::to_string(wb) : std::string("n/a")) << "\n";
      out << "bezout chain = " << chain << "\n";
      out << "total degree = " << total << "\n";
      out << "mixed volume = n/a\n";
    }
    return static_cast<int>(kOk);
  });
}

namespace {

CVector read_point(const Json& a) {
  if (!a.is_array()) throw std::invalid_argument("point must be an array");
  CVector z;
  for (const auto& e : a) {
    if (e.is_number()) {
      z.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      z.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      throw std::invalid_argument("point entries must be numbers or [re, im] pairs");
    }
  }
  return z;
}

}  // namespace

int cmd_verify(const std::string& input_path, const std::string& solutions_path, const RunConfig& cfg,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto in = read_input(input_path);
    std::ifstream file(solutions_path);
    if (!file) throw std::invalid_argument("cannot open " + solutions_path);
    Json doc;
    try {
      doc = Json::parse(file);
    } catch (const Json::parse_error& e) {
      throw std::invalid_argument(std::string("solutions file is not valid JSON: ") + e.what());
    }
    if (!doc.contains("solutions") || !doc["solutions"].is_array()) {
      throw std::invalid_argument("solutions file has no solutions array");
    }
    const auto& records = doc["solutions"];
    if (records.empty()) {
      err << "warning: no solutions to verify\n";
      out << "verified 0 solutions\n";
      return static_cast<int>(kOk);
    }
    std::optional<PolySystem> full;
    double worst = -1.0;
    std::size_t worst_index = 0;
    std::size_t rejected = 0;
    const std::size_t n = in.vars.size();
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (!r.contains("x")) throw std::invalid_argument("solution record without x");
      CVector z = read_point(r["x"]);
      if (z.size() != n) throw std::invalid_argument("solution x has wrong length");
      const PolySystem* sys = &in.f;
      if (r.contains("lambda") && !r["lambda"].empty()) {
        if (!full) full = LPHProblem{in.f, in.resolved_J(), solve_beta(in, cfg)}.square_system();
        const CVector lambda = read_point(r["lambda"]);
        if (lambda.size() != in.f.size()) throw std::invalid_argument("solution lambda has wrong length");
        z.insert(z.end(), lambda.begin(), lambda.end());
        sys = &*full;
      }
      const double res = sys->residual(z);
      if (!(res <= kVerifyTolerance || sys->relative_residual(z) <= kVerifyRelativeTolerance)) ++rejected;
      if (!(res <= worst) || std::isnan(res)) {
        worst = std::isnan(res) ? INFINITY : res;
        worst_index = i;
      }
    }
    const bool pass = rejected == 0;
    out << (pass ? "pass" : "FAIL") << ": " << records.size() << " solutions, " << rejected
        << " above tolerance, worst residual " << format_double(worst) << " at index " << worst_index << "\n";
    return static_cast<int>(pass ? kOk : kVerifyFailed);
  });
}

}  // namespace lph::cli
