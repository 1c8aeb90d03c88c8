#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>

#include "support.hpp"

using namespace lph;
using lph::test::distance;
using lph::test::sys;

namespace {

const std::vector<std::string> kX{"x"};
const std::vector<std::string> kXY{"x", "y"};

bool bit_equal(const PathResult& a, const PathResult& b) {
  if (a.status != b.status || a.steps_taken != b.steps_taken || a.endpoint.size() != b.endpoint.size()) return false;
  if (std::memcmp(&a.t_reached, &b.t_reached, sizeof(double)) != 0) return false;
  if (std::memcmp(&a.residual, &b.residual, sizeof(double)) != 0) return false;
  return a.endpoint.empty() ||
         std::memcmp(a.endpoint.data(), b.endpoint.data(), a.endpoint.size() * sizeof(Complex)) == 0;
}

}  // namespace

TEST_CASE("config validation") {
  TrackConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.min_step = 0.2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TrackConfig{};
  cfg.newton_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TrackConfig{};
  cfg.max_step = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("homotopy boundary values") {
  const Complex gamma = std::polar(1.0, 0.7);
  Rng rng(2);
  PolySystem G(2);
  PolySystem F(2);
  for (int i = 0; i < 2; ++i) {
    G.push_back(lph::test::dense_poly(2, 2, rng));
    F.push_back(lph::test::dense_poly(2, 3, rng));
  }
  const HomotopyPair h(G, F, gamma);
  for (int trial = 0; trial < 10; ++trial) {
    const auto z = lph::test::random_point(2, rng);
    const auto h0 = homotopy_eval(h, z, 0.0);
    const auto h1 = homotopy_eval(h, z, 1.0);
    const auto g = G.evaluate(z);
    const auto f = F.evaluate(z);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(h0[i] - g[i]) <= 1e-14 * std::max(1.0, std::abs(g[i])));
      CHECK(std::abs(h1[i] - gamma * f[i]) <= 1e-14 * std::max(1.0, std::abs(f[i])));
    }
  }

  const HomotopyPair lin(sys(kX, "x - 1"), sys(kX, "x - 3"), Complex(1.0));
  const CVector z{Complex(0.3, 0.4)};
  CHECK(std::abs(homotopy_eval(lin, z, 0.5)[0] - (z[0] - 2.0)) < 1e-15);
  CHECK_THROWS_AS(homotopy_eval(lin, CVector{1.0, 2.0}, 0.5), DimensionMismatch);
}

TEST_CASE("evaluator jacobian matches symbolic derivatives") {
  Rng rng(31);
  PolySystem f(3);
  for (int i = 0; i < 3; ++i) f.push_back(lph::test::dense_poly(3, 3, rng));
  const SystemEvaluator ev(f);
  const auto z = lph::test::random_point(3, rng);
  CVector vals(3);
  CMatrix jac;
  ev.values_and_jacobian(z, vals, jac);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(vals[i] - f[i].evaluate(z)) < 1e-13);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(jac(i, j) - f[i].differentiate(j).evaluate(z)) < 1e-12);
  }
}

TEST_CASE("newton_correct") {
  TrackConfig cfg;
  const auto quad = sys(kX, "x^2 - 4");
  const HomotopyPair h(quad, quad, std::polar(1.0, 1.1));
  auto r = newton_correct(h, CVector{2.1}, 0.0, cfg);
  CHECK(r.status == NewtonStatus::Converged);
  CHECK(std::abs(r.z[0] - 2.0) < 1e-10);

  r = newton_correct(h, CVector{2.0}, 0.0, cfg);
  CHECK(r.status == NewtonStatus::Converged);
  CHECK(r.iterations == 0);
  CHECK(r.z[0] == Complex(2.0));

  const auto circ = sys(kXY, "x^2 + y^2 - 1\nx - y");
  const HomotopyPair c(circ, circ, Complex(1.0));
  r = newton_correct(c, CVector{0.8, 0.6}, 1.0, cfg);
  CHECK(r.status == NewtonStatus::Converged);
  const double s = std::sqrt(0.5);
  CHECK(distance(r.z, CVector{s, s}) < 1e-10);

  const auto lifted = sys(kX, "x^2 + 1");
  const HomotopyPair sing(lifted, lifted, Complex(1.0));
  CHECK(newton_correct(sing, CVector{0.0}, 0.0, cfg).status == NewtonStatus::SingularJacobian);
}

TEST_CASE("davidenko right-hand side") {
  const HomotopyPair lin(sys(kX, "x - 1"), sys(kX, "x - 2"), Complex(1.0));
  for (double t : {0.0, 0.3, 0.9}) {
    const CVector z{1.0 + t};
    CHECK(std::abs(davidenko_rhs(lin, z, t)[0] - 1.0) < 1e-14);
  }
  const auto same = sys(kXY, "x^2 - 1\ny^2 - 4");
  const HomotopyPair still(same, same, Complex(1.0));
  CHECK(norm_inf(davidenko_rhs(still, CVector{1.0, 2.0}, 0.0)) < 1e-15);

  const HomotopyPair fold(sys(kX, "x^2 + 1"), sys(kX, "x^2 + 2"), Complex(1.0));
  CHECK_THROWS_AS(davidenko_rhs(fold, CVector{0.0}, 0.5), SingularMatrix);
}

TEST_CASE("davidenko tangent matches path finite difference") {
  Rng rng(41);
  TrackConfig cfg;
  const auto G = sys(kXY, "x^2 - 1\ny^2 - 1");
  PolySystem F(2);
  for (int i = 0; i < 2; ++i) F.push_back(lph::test::dense_poly(2, 2, rng));
  const HomotopyPair h(G, F, rng.unit_complex());
  // Walk along the path with tight Newton correction and compare the tangent
  // with a forward difference of corrected points.
  CVector z{1.0, 1.0};
  const double step = 1e-5;
  int checked = 0;
  for (int s = 0; s < 8; ++s) {
    const double t = 0.1 * s;
    if (s > 0) {
      for (int sub = 0; sub < 100; ++sub) {
        const double t0 = t - 0.1 + 0.001 * sub;
        z = newton_correct(h, euler_predict(h, z, t0, 0.001), t0 + 0.001, cfg).z;
      }
    }
    const auto ahead = newton_correct(h, euler_predict(h, z, t, step), t + step, cfg);
    REQUIRE(ahead.status == NewtonStatus::Converged);
    const auto rhs = davidenko_rhs(h, z, t);
    for (std::size_t i = 0; i < 2; ++i) {
      const Complex fd = (ahead.z[i] - z[i]) / step;
      CHECK(std::abs(fd - rhs[i]) <= 1e-3 * std::max(1.0, std::abs(rhs[i])));
    }
    ++checked;
  }
  CHECK(checked == 8);
}

TEST_CASE("euler predictor error is second order") {
  // x^2 - (1 + 3t) = 0 along x(t) = sqrt(1 + 3t).
  const HomotopyPair h(sys(kX, "x^2 - 1"), sys(kX, "x^2 - 4"), Complex(1.0));
  auto exact = [](double t) { return std::sqrt(1.0 + 3.0 * t); };
  for (double t0 : {0.0, 0.25, 0.6}) {
    double prev = 0.0;
    for (double step : {0.04, 0.02, 0.01, 0.005}) {
      const CVector z{exact(t0)};
      const double err = std::abs(euler_predict(h, z, t0, step)[0] - exact(t0 + step));
      if (prev > 0.0) CHECK(prev / err >= 3.5);
      prev = err;
    }
  }
}

TEST_CASE("track_path endpoints") {
  TrackConfig cfg;
  const HomotopyPair h(sys(kX, "x^2 - 1"), sys(kX, "x^2 - 4"), std::polar(1.0, 2.3));
  std::vector<Complex> ends;
  for (double s : {1.0, -1.0}) {
    const auto r = track_path(h, CVector{s}, cfg);
    REQUIRE(r.status == PathStatus::Converged);
    CHECK(r.t_reached == 1.0);
    CHECK(r.residual <= 100 * cfg.newton_tol);
    ends.push_back(r.endpoint[0]);
  }
  CHECK(std::abs(std::abs(ends[0].real()) - 2.0) < 1e-10);
  CHECK(std::abs(ends[0] + ends[1]) < 1e-10);

  const HomotopyPair constant(sys(kX, "x - 1"), sys(kX, "x - 1"), Complex(1.0));
  const auto c = track_path(constant, CVector{1.0}, cfg);
  CHECK(c.status == PathStatus::Converged);
  CHECK(std::abs(c.endpoint[0] - 1.0) < 1e-12);
  CHECK(c.steps_taken >= 1);

  const HomotopyPair escape(sys(kX, "x - 1"), sys(kX, "0*x + 1"), Complex(1.0));
  CHECK(track_path(escape, CVector{1.0}, cfg).status == PathStatus::Divergent);

  CHECK_THROWS_AS(track_path(h, CVector{0.5}, cfg), InvalidStart);
}

TEST_CASE("track_path is deterministic") {
  Rng rng(6);
  TrackConfig cfg;
  const auto G = sys(kXY, "x^2 - 1\ny^3 - 1");
  PolySystem F(2);
  F.push_back(lph::test::dense_poly(2, 2, rng));
  F.push_back(lph::test::dense_poly(2, 3, rng));
  const HomotopyPair h(G, F, rng.unit_complex());
  const auto a = track_path(h, CVector{1.0, 1.0}, cfg);
  const auto b = track_path(h, CVector{1.0, 1.0}, cfg);
  CHECK(bit_equal(a, b));
}

TEST_CASE("converged paths satisfy the residual contract") {
  Rng rng(15);
  TrackConfig cfg;
  const TotalDegreeStart ts{{2, 2}, {Complex(1.0), rng.unit_complex()}};
  for (int trial = 0; trial < 5; ++trial) {
    PolySystem F(2);
    for (int i = 0; i < 2; ++i) F.push_back(lph::test::dense_poly(2, 2, rng));
    const HomotopyPair h(ts.system(), F, rng.unit_complex());
    for (const auto& z0 : total_degree_roots(ts)) {
      const auto r = track_path(h, z0, cfg);
      if (r.status != PathStatus::Converged) continue;
      CHECK(F.residual(r.endpoint) <= 100 * cfg.newton_tol);
      CHECK(std::abs(r.residual - F.residual(r.endpoint)) <= 1e-13 + 1e-3 * r.residual);
    }
  }
}

TEST_CASE("parallel batch is bit-identical to the serial reference") {
  Rng rng(77);
  TrackConfig cfg;
  PolySystem F(3);
  for (int i = 0; i < 3; ++i) F.push_back(lph::test::dense_poly(3, 3, rng));
  TotalDegreeStart ts{{3, 3, 3}, {}};
  for (int i = 0; i < 3; ++i) ts.offsets.push_back(rng.unit_complex());
  const HomotopyPair h(ts.system(), F, rng.unit_complex());
  std::vector<PathJob> jobs;
  for (const auto& z0 : total_degree_roots(ts)) jobs.push_back({&h, z0});

  const auto serial = track_batch_serial(jobs, cfg);
  for (int threads : {1, 2, 4, 0}) {
    const auto parallel = track_batch(jobs, cfg, threads);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(bit_equal(serial[i], parallel[i]));
  }
}
