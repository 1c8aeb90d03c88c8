#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lph/rws.hpp"
#include "support.hpp"

using namespace lph;
using lph::test::has_real_point;
using lph::test::sys;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kXYZ{"x", "y", "z"};

std::vector<RVector> xs(const RealWitnessSet& w) {
  std::vector<RVector> out;
  for (const auto& p : w.points) out.push_back(p.x);
  return out;
}

}  // namespace

TEST_CASE("critical system of the circle") {
  const auto c = build_critical_system(sys(kXY, "x^2 + y^2 - 1"), RVector{0.0, 1.0});
  const auto F = c.problem.square_system();
  CHECK(F.size() == 3);
  const auto expect = parse("x^2 + y^2 - 1\n2*x*l\n2*y*l - 1", {"x", "y", "l"});
  for (std::size_t i = 0; i < 3; ++i) CHECK(F[i] == expect[i]);

  TrackConfig cfg;
  Rng rng(0);
  const auto rep = lph_solve(c.problem, cfg, rng);
  CHECK(lph::test::same_set(lph::test::joined(rep), {CVector{0.0, 1.0, 0.5}, CVector{0.0, -1.0, -0.5}}, 1e-8));

  const auto linear = build_critical_system(sys(kXYZ, "x + y + z"), RVector{1.0, 0.0, 0.0});
  CHECK(linear.problem.d() == 0);
  CHECK_THROWS_AS(build_critical_system(sys(kXY, "x"), RVector{1.0}), DimensionMismatch);
}

TEST_CASE("augment appends the hyperplane") {
  const auto circle = sys(kXY, "x^2 + y^2 - 1");
  const auto a = augment(circle, RVector{0.0, 1.0}, 0.0);
  REQUIRE(a.size() == 2);
  CHECK(a[1] == parse_poly("y", kXY));

  const auto s = augment(sys(kXY, lph::test::kSextic), RVector{0.874645, 1.0351}, -3.9825);
  CHECK(s.is_square());
  CHECK(s[1] == parse_poly("0.874645*x + 1.0351*y - 3.9825", kXY));
}

TEST_CASE("real_filter thresholds") {
  const auto F = sys(kXY, "x - 1\ny - 2");
  RealFilterConfig cfg;
  cfg.refine = false;
  const std::vector<CVector> pts{{Complex(1.0, 1e-9), 2.0}, {Complex(1.0, 0.5), 2.0}};
  const auto kept = real_filter(pts, cfg, F);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == RVector{1.0, 2.0});

  cfg.refine = true;
  const std::vector<CVector> rough{{Complex(1.0 + 1e-9, 1e-9), 2.0}};
  const auto polished = real_filter(rough, cfg, F);
  REQUIRE(polished.size() == 1);
  CHECK(polished[0][0] == doctest::Approx(1.0).epsilon(1e-15));

  RealFilterConfig bad;
  bad.tau_imag = 0.0;
  CHECK_THROWS_AS(real_filter(pts, bad, F), std::invalid_argument);
}

TEST_CASE("sextic stage filter keeps two real points") {
  TrackConfig cfg;
  Rng rng(0);
  const auto c = build_critical_system(sys(kXY, lph::test::kSextic), RVector{0.874645, 1.0351});
  const auto rep = lph_solve(c.problem, cfg, rng);
  REQUIRE(rep.solutions.size() == 6);
  const auto real = real_filter(lph::test::joined(rep), RealFilterConfig{}, c.problem.square_system());
  CHECK(real.size() == 2);
}

TEST_CASE("square input is a real solve") {
  Rng rng(0);
  const auto w = rws(sys(kXY, "x^2 - 1\ny^2 - 4"), RwsConfig{}, rng);
  CHECK(w.points.size() == 4);
  CHECK(w.betas.empty());
  for (double a : {1.0, -1.0}) {
    for (double b : {2.0, -2.0}) CHECK(has_real_point(xs(w), {a, b}, 1e-10));
  }
  for (const auto& p : w.points) CHECK(p.stage == 0);

  Rng rng2(0);
  const auto F = sys(kXY, "x^2 + y^2 - 4\nx - y^2");
  const auto direct = real_filter(solve_square(F, TrackConfig{}, rng2), RealFilterConfig{}, F);
  Rng rng3(0);
  const auto via = rws(F, RwsConfig{}, rng3);
  REQUIRE(via.points.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(via.points[i].x == direct[i]);
}

TEST_CASE("circle witness set") {
  Rng rng(3);
  RwsConfig cfg;
  cfg.beta = RVector{0.6, 0.8};
  const auto w = rws(sys(kXY, "x^2 + y^2 - 1"), cfg, rng);
  CHECK(has_real_point(xs(w), {0.6, 0.8}, 1e-8));
  CHECK(has_real_point(xs(w), {-0.6, -0.8}, 1e-8));
  CHECK(w.stages.size() == 2);
  CHECK(w.points.size() <= 4);
  for (const auto& p : w.points) {
    if (p.stage == 0) CHECK(std::abs(std::abs(p.x[0] * 0.8 - p.x[1] * 0.6)) < 1e-8);
  }
}

TEST_CASE("reducible sextic golden points") {
  Rng rng(0);
  RwsConfig cfg;
  cfg.beta = RVector{0.874645, 1.0351};
  cfg.c = {-3.9825};
  const auto w = rws(sys(kXY, lph::test::kSextic), cfg, rng);
  const auto pts = xs(w);
  CHECK(has_real_point(pts, {-1.44299, -1.32941}, 1e-4));
  CHECK(has_real_point(pts, {-0.781143, 1.28371}, 1e-4));
  CHECK(has_real_point(pts, {2.4052801, 1.815026}, 1e-4));
  CHECK(has_real_point(pts, {-1.992641, 5.531208}, 1e-4));
  CHECK(w.c_values[0] == -3.9825);
  for (const auto& p : w.points) {
    if (p.stage == 1) CHECK(std::abs(0.874645 * p.x[0] + 1.0351 * p.x[1] - 3.9825) < 1e-6);
  }
}

TEST_CASE("invariants over seeds") {
  const auto f = sys(kXY, "(x^2 + y^2 - 1) * ((x - 3)^2 + y^2 - 1)");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const auto w = rws(f, RwsConfig{}, rng);
    bool left = false;
    bool right = false;
    for (const auto& p : w.points) {
      CHECK(f.residual(CVector(p.x.begin(), p.x.end())) <= 1e-6);
      (p.x[0] < 1.5 ? left : right) = true;
    }
    CHECK(left);
    CHECK(right);
    CHECK(w.points.size() <= witness_bound(2, 1, 4, 4));
    for (std::size_t s = 0; s < w.betas.size(); ++s) {
      for (double b : w.betas[s]) CHECK((std::abs(b) >= 0.5 && std::abs(b) <= 1.5));
      CHECK(std::abs(w.c_values[s]) <= 5.0);
    }
  }
}

TEST_CASE("rws is reproducible") {
  const auto f = sys(kXYZ, "x^2 + y^2 + z^2 - 4");
  Rng a(12);
  Rng b(12);
  const auto x = rws(f, RwsConfig{}, a);
  const auto y = rws(f, RwsConfig{}, b);
  REQUIRE(x.points.size() == y.points.size());
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    CHECK(x.points[i].x == y.points[i].x);
    CHECK(x.points[i].stage == y.points[i].stage);
  }
  CHECK(x.stages.size() == 3);
  CHECK(!x.points.empty());
}

TEST_CASE("extra c values warn") {
  Rng rng(0);
  RwsConfig cfg;
  cfg.c = {1.0, 2.0};
  const auto w = rws(sys(kXY, "x^2 + y^2 - 1"), cfg, rng);
  CHECK(w.c_values.size() == 1);
  CHECK(w.c_values[0] == 1.0);
  CHECK(!w.warnings.empty());
  cfg.beta = RVector{1.0};
  CHECK_THROWS_AS(rws(sys(kXY, "x^2 + y^2 - 1"), cfg, rng), DimensionMismatch);
}

TEST_CASE("bounds") {
  CHECK(witness_bound(2, 1, 6, 6) == 36);
  CHECK(witness_bound(3, 2, 3, 7) == 35);
  CHECK(witness_bound(4, 3, 2, 1) == 3 + 1);
  CHECK_THROWS_AS(witness_bound(2, 1, 1, 1), DomainError);
  CHECK_THROWS_AS(witness_bound(2, 2, 3, 1), DomainError);

  const auto pair = parse(lph::test::kSparsePair, kXYZ);
  CHECK(bezout_chain_bound(pair) == 36);
  CHECK(total_degree_bound(pair) == 243);
}

TEST_CASE("full rank check") {
  TrackConfig cfg;
  Rng rng(0);
  const auto circle = sys(kXY, "x^2 + y^2 - 1");
  const auto wc = witness_points(circle, rng, cfg);
  const auto rc = full_rank_check(circle, wc.points);
  CHECK(rc.ok());
  for (auto r : rc.ranks) CHECK(r == 1);

  const auto sextic = sys(kXY, lph::test::kSextic);
  const auto ws = witness_points(sextic, rng, cfg);
  CHECK(full_rank_check(sextic, ws.points).ranks == std::vector<std::size_t>(6, 1));

  const auto doubled = sys(kXY, "x^2");
  const auto bad = full_rank_check(doubled, {CVector{0.0, 0.3}, CVector{0.0, -2.0}});
  CHECK(!bad.ok());
  CHECK(bad.deficient.size() == 2);
}
