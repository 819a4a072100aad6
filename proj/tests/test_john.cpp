#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "minklab/errors.hpp"
#include "minklab/john.hpp"
#include "minklab/run_io.hpp"

using namespace minklab;

namespace {
constexpr double kPi = std::numbers::pi;

// Symmetric boundary samples whose exact MVEE is the unit sphere: the uniform
// angle grid (d=2) and the midpoint latitude-longitude grid (d=3).
Eigen::MatrixXd sphere_samples(int d, int count) {
  if (d == 2) {
    Eigen::MatrixXd p(count, 2);
    for (int j = 0; j < count; ++j) {
      const double th = 2 * kPi * j / count;
      p.row(j) << std::cos(th), std::sin(th);
    }
    return p;
  }
  const int m = static_cast<int>(std::round(std::sqrt(count / 2.0)));
  Eigen::MatrixXd p(2 * m * m, 3);
  int r = 0;
  for (int i = 0; i < m; ++i) {
    const double th = (i + 0.5) * kPi / m;
    for (int j = 0; j < 2 * m; ++j) {
      const double ph = kPi * j / m;
      p.row(r++) << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
          std::cos(th);
    }
  }
  return p;
}

Eigen::MatrixXd random_invertible(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  while (true) {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = gauss(rng);
    if (std::abs(m.determinant()) > 0.3) return m;
  }
}

}  // namespace

TEST_CASE("mvee of unit-circle samples is the unit disk") {
  const Ellipsoid e = mvee(sphere_samples(2, 256));
  CHECK(e.center.norm() < 1e-6);
  CHECK(std::abs(e.semi_axes(0) - 1.0) < 1e-6);
  CHECK(std::abs(e.semi_axes(1) - 1.0) < 1e-6);
}

TEST_CASE("mvee recovers affine images") {
  std::mt19937_64 rng(3);
  for (int d : {2, 3}) {
    const Eigen::MatrixXd base = sphere_samples(d, 512);
    for (int trial = 0; trial < 4; ++trial) {
      const Eigen::MatrixXd M = random_invertible(d, rng);
      Eigen::VectorXd c(d);
      for (int i = 0; i < d; ++i)
        c(i) = 0.3 * std::uniform_real_distribution<double>(-1, 1)(rng);
      Eigen::MatrixXd pts = base * M.transpose();
      pts.rowwise() += c.transpose();

      const Ellipsoid e = mvee(pts);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
      const Eigen::VectorXd sv = svd.singularValues().reverse();
      CHECK((e.center - c).cwiseAbs().maxCoeff() < 1e-5);
      CHECK((e.semi_axes - sv).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
}

TEST_CASE("mvee rejects degenerate input") {
  Eigen::MatrixXd collinear(4, 2);
  collinear << 0, 0, 1, 1, 2, 2, 3, 3;
  CHECK_THROWS_AS(mvee(collinear), degenerate_input);

  Eigen::MatrixXd toofew(2, 2);
  toofew << 0, 0, 1, 0;
  CHECK_THROWS_AS(mvee(toofew), degenerate_input);

  CHECK_THROWS_AS(mvee(sphere_samples(2, 64), 0.5), std::invalid_argument);
}

TEST_CASE("mvee minimality against random enclosing ellipsoids") {
  std::mt19937_64 rng(17);
  const Eigen::MatrixXd base = sphere_samples(2, 128);
  const Eigen::MatrixXd M = random_invertible(2, rng);
  const Eigen::MatrixXd pts = base * M.transpose();
  const Ellipsoid best = mvee(pts);

  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd S = random_invertible(2, rng);
    const Eigen::MatrixXd A0 = (S * S.transpose()).inverse();
    double scale2 = 0;
    for (int i = 0; i < pts.rows(); ++i)
      scale2 = std::max<double>(scale2, pts.row(i) * A0 * pts.row(i).transpose());
    const Ellipsoid enc =
        Ellipsoid::from_quadratic(Eigen::Vector2d::Zero(), A0 / scale2);
    CHECK(best.volume() <= enc.volume() * (1 + 1e-9));
  }
}

TEST_CASE("mvee is affine equivariant") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-1, 1);
  Eigen::MatrixXd pts(40, 2);
  for (int i = 0; i < pts.rows(); ++i) pts.row(i) << uni(rng), uni(rng);
  const Ellipsoid e0 = mvee(pts);

  const Eigen::MatrixXd M = random_invertible(2, rng);
  const Eigen::Vector2d c(0.4, -0.7);
  Eigen::MatrixXd mapped = pts * M.transpose();
  mapped.rowwise() += c.transpose();
  const Ellipsoid e1 = mvee(mapped);

  // support of M*E+c at x equals support of E at M^T x plus <c,x>
  double worst = 0;
  for (int j = 0; j < 256; ++j) {
    const double th = 2 * kPi * j / 256;
    const Eigen::Vector2d x(std::cos(th), std::sin(th));
    const double lhs = e0.support(M.transpose() * x) + c.dot(x);
    worst = std::max(worst, std::abs(lhs - e1.support(x)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("mvee is insensitive to point order") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uni(-1, 1);
  Eigen::MatrixXd pts(60, 2);
  for (int i = 0; i < pts.rows(); ++i) pts.row(i) << 2 * uni(rng), uni(rng) - 0.3;
  const Ellipsoid a = mvee(pts);

  std::vector<int> perm(pts.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd shuffled(pts.rows(), 2);
  for (int i = 0; i < pts.rows(); ++i) shuffled.row(i) = pts.row(perm[i]);
  const Ellipsoid b = mvee(shuffled);

  CHECK((a.center - b.center).norm() < 1e-8);
  CHECK((a.semi_axes - b.semi_axes).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("min ellipsoid of bodies") {
  auto grid = make_grid_ptr(1, 2048);

  const SupportField ub = support_of_ellipsoid(Ellipsoid::ball(2, 1.0), grid);
  const Ellipsoid eb = min_ellipsoid_of_body(ub);
  CHECK(ellipsoid_hausdorff(eb, Ellipsoid::ball(2, 1.0)) < 1e-5);

  Ellipsoid e;
  e.center = Eigen::Vector2d(0.1, -0.05);
  e.semi_axes = Eigen::Vector2d(0.8, 1.5);
  const double psi = 0.6;
  e.axes.resize(2, 2);
  e.axes << std::cos(psi), std::sin(psi), -std::sin(psi), std::cos(psi);
  const Ellipsoid rec = min_ellipsoid_of_body(support_of_ellipsoid(e, grid));
  CHECK(ellipsoid_hausdorff(rec, e) < 1e-5);

  const Eigen::Vector2d c(0.3, 0.0);
  const Ellipsoid ball_c = Ellipsoid::ball(2, 1.0, c);
  const Ellipsoid recb = min_ellipsoid_of_body(support_of_ellipsoid(ball_c, grid));
  CHECK(ellipsoid_hausdorff(recb, ball_c) < 1e-5);
}

TEST_CASE("john containment certificate") {
  auto grid = make_grid_ptr(1, 512);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ax(0.6, 1.8), off(-0.2, 0.2);
  for (int trial = 0; trial < 5; ++trial) {
    Ellipsoid e;
    e.center = Eigen::Vector2d(off(rng), off(rng));
    const double a = ax(rng), b = ax(rng);
    e.semi_axes = Eigen::Vector2d(std::min(a, b), std::max(a, b));
    e.axes = Eigen::MatrixXd::Identity(2, 2);
    const SupportField u = support_of_ellipsoid(e, grid);
    const Ellipsoid me = min_ellipsoid_of_body(u, 1e-7);
    CHECK(john_containment_margin(me, u) >= -10 * 1e-7);
  }
}

TEST_CASE("eccentricity") {
  CHECK(eccentricity(Ellipsoid::ball(3, 1.0)) == doctest::Approx(1.0));
  Ellipsoid e = Ellipsoid::ball(3, 1.0);
  e.semi_axes = Eigen::Vector3d(1, 2, 4);
  CHECK(eccentricity(e) == doctest::Approx(4.0));
  const Ellipsoid f = Ellipsoid::ball(2, 0.5);
  CHECK(eccentricity(f) == doctest::Approx(1.0));
}

TEST_CASE("ellipsoid JSON round trip is bit stable") {
  std::mt19937_64 rng(37);
  const Eigen::MatrixXd M = random_invertible(3, rng);
  const Ellipsoid e = mvee(sphere_samples(3, 512) * M.transpose());
  const Ellipsoid f = ellipsoid_from_json(ellipsoid_to_json(e));
  CHECK((e.center - f.center).cwiseAbs().maxCoeff() == 0.0);
  CHECK((e.axes - f.axes).cwiseAbs().maxCoeff() == 0.0);
  CHECK((e.semi_axes - f.semi_axes).cwiseAbs().maxCoeff() == 0.0);
}
