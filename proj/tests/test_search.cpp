#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "minklab/search.hpp"

using namespace minklab;

namespace {

GridPtr g1(int n = 64) { return make_grid_ptr(1, n); }

FlowConfig base_config(GridPtr g, double p = -3.0) {
  FlowConfig cfg;
  cfg.p = p;
  cfg.f = Eigen::VectorXd::Ones(g->size());
  cfg.T_max = 10.0;
  cfg.track_energy_each_step = true;
  return cfg;
}

AdmissibleParams params_for(GridPtr g, double p = -3.0) {
  return AdmissibleParams::defaults(*g, Eigen::VectorXd::Ones(g->size()), p);
}

}  // namespace

TEST_CASE("params decode/encode round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-0.4, 0.4);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 12; ++trial) {
      EllipsoidParams p;
      p.center = Eigen::VectorXd::NullaryExpr(d, [&](int) { return uni(rng); });
      p.log_semi_axes =
          Eigen::VectorXd::NullaryExpr(d, [&](int) { return uni(rng); });
      p.rotation = Eigen::VectorXd::NullaryExpr(d == 2 ? 1 : 3,
                                                [&](int) { return uni(rng) + 0.5; });
      const Ellipsoid e = p.decode();
      const Ellipsoid e2 = EllipsoidParams::encode(e).decode();
      CHECK(ellipsoid_hausdorff(e, e2) < 1e-10);
    }
  }
}

TEST_CASE("pack/unpack round trip") {
  EllipsoidParams p = EllipsoidParams::ball(3);
  p.center << 0.1, -0.2, 0.05;
  p.log_semi_axes << 0.1, 0.0, -0.1;
  p.rotation << 0.3, 0.2, 0.1;
  const EllipsoidParams q = EllipsoidParams::unpack(3, p.pack());
  CHECK((q.pack() - p.pack()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("objective at the unit ball is at grid error") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  for (double t : {0.25, 1.0}) {
    const ObjectiveValue v = objective(EllipsoidParams::ball(2), t, g, cfg, ap);
    CHECK_FALSE(v.penalized);
    CHECK(v.value < 1e-3);
  }
}

TEST_CASE("objective of B2 at horizon 0 is the Hausdorff distance to B1") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  EllipsoidParams p = EllipsoidParams::ball(2);
  p.log_semi_axes.setConstant(std::log(2.0));
  const ObjectiveValue v = objective(p, 0.0, g, cfg, ap);
  CHECK(v.value == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("objective is deterministic") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  EllipsoidParams p = EllipsoidParams::ball(2);
  p.log_semi_axes << std::log(1.5), -std::log(1.5);
  p.rotation << 0.4;
  const double a = objective(p, 1.0, g, cfg, ap).value;
  const double b = objective(p, 1.0, g, cfg, ap).value;
  CHECK(a == b);
  CHECK(a > 0);
}

TEST_CASE("objective penalizes candidates outside the admissible class") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  EllipsoidParams p = EllipsoidParams::ball(2);
  p.center << 5.0, 0.0;  // origin outside
  const ObjectiveValue v = objective(p, 0.5, g, cfg, ap);
  CHECK(v.penalized);
  CHECK(v.value >= 1e3);
}

TEST_CASE("find_initial from the ball seed") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  SearchOptions opts;
  opts.max_evals = 200;
  const FindResult r = find_initial(1.0, g, cfg, ap, EllipsoidParams::ball(2), opts);
  CHECK(r.found);
  CHECK(r.objective <= 1e-6);
}

TEST_CASE("find_initial never returns worse than its seed") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  EllipsoidParams seed = EllipsoidParams::ball(2);
  seed.log_semi_axes << 0.5 * std::log(1.5), -0.5 * std::log(1.5);
  const double seed_obj = objective(seed, 0.5, g, cfg, ap).value;
  SearchOptions opts;
  opts.max_evals = 400;
  opts.restarts = 1;
  const FindResult r = find_initial(0.5, g, cfg, ap, seed, opts);
  CHECK(r.objective <= seed_obj + 1e-15);
  CHECK(r.objective <= 1e-2);
}

TEST_CASE("objective works on the n=2 chart") {
  auto g = make_grid_ptr(2, 16);
  FlowConfig cfg;
  cfg.p = -4.0;
  cfg.f = Eigen::VectorXd::Ones(g->size());
  cfg.T_max = 1.0;
  const AdmissibleParams ap = AdmissibleParams::defaults(*g, cfg.f, -4.0);

  const ObjectiveValue ball = objective(EllipsoidParams::ball(3), 0.1, g, cfg, ap);
  CHECK_FALSE(ball.penalized);
  CHECK(ball.value < 1e-2);

  EllipsoidParams tilted = EllipsoidParams::ball(3);
  tilted.log_semi_axes << -0.1, 0.0, 0.1;
  tilted.rotation << 0.3, 0.5, 0.2;
  const double a = objective(tilted, 0.1, g, cfg, ap).value;
  const double b = objective(tilted, 0.1, g, cfg, ap).value;
  CHECK(a == b);
  CHECK(a > ball.value);
}

TEST_CASE("limiting_initial input validation") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  CHECK_THROWS_AS(
      limiting_initial({1.0, 0.5}, g, cfg, ap, EllipsoidParams::ball(2)),
      std::invalid_argument);

  FlowConfig capped = cfg;
  capped.T_max = 0.4;
  CHECK_THROWS_AS(limiting_initial({0.25, 0.5}, g, capped, ap, EllipsoidParams::ball(2)),
                  std::invalid_argument);
}

TEST_CASE("limiting_initial certifies the stationary seed") {
  auto g = g1();
  const FlowConfig cfg = base_config(g);
  const AdmissibleParams ap = params_for(g);
  SearchOptions opts;
  opts.max_evals = 150;
  const SearchResult r =
      limiting_initial({0.25, 0.5}, g, cfg, ap, EllipsoidParams::ball(2), opts);
  CHECK(r.certified);
  CHECK(r.sup_J <= 0.75 * ap.A0);
  for (const auto& h : r.horizon_results) CHECK(h.found);
  CHECK(ellipsoid_hausdorff(r.E_star, Ellipsoid::ball(2, 1.0)) < 1e-2);
}
