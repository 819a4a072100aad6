#include "minklab/ellipsoid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minklab {

double unit_ball_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw std::invalid_argument("unit_ball_volume: dim out of range");
  }
}

double Ellipsoid::volume() const { return unit_ball_volume(dim()) * semi_axes.prod(); }

double Ellipsoid::support(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd proj = axes * x;
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += semi_axes(i) * semi_axes(i) * proj(i) * proj(i);
  return center.dot(x) + std::sqrt(s);
}

Eigen::MatrixXd Ellipsoid::quad_form() const {
  Eigen::VectorXd inv2 = semi_axes.array().square().inverse();
  return axes.transpose() * inv2.asDiagonal() * axes;
}

double Ellipsoid::radial(const Eigen::VectorXd& xi) const {
  const Eigen::MatrixXd A = quad_form();
  const double a = xi.dot(A * xi);
  const double b = xi.dot(A * center);
  const double c = center.dot(A * center) - 1.0;
  const double disc = b * b - a * c;
  if (disc < 0) throw std::invalid_argument("Ellipsoid::radial: origin not inside");
  return (b + std::sqrt(disc)) / a;
}

bool Ellipsoid::contains(const Eigen::VectorXd& z, double slack) const {
  const Eigen::VectorXd d = z - center;
  return d.dot(quad_form() * d) <= 1.0 + slack;
}

Ellipsoid Ellipsoid::scaled_about_center(double s) const {
  Ellipsoid e = *this;
  e.semi_axes *= s;
  return e;
}

Ellipsoid Ellipsoid::ball(int dim, double radius, const Eigen::VectorXd& center) {
  if (radius <= 0) throw std::invalid_argument("Ellipsoid::ball: radius must be positive");
  Ellipsoid e;
  e.center = center.size() ? center : Eigen::VectorXd::Zero(dim);
  e.axes = Eigen::MatrixXd::Identity(dim, dim);
  e.semi_axes = Eigen::VectorXd::Constant(dim, radius);
  return e;
}

Ellipsoid Ellipsoid::from_quadratic(const Eigen::VectorXd& c, const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("Ellipsoid::from_quadratic: form not positive definite");

  const int d = static_cast<int>(c.size());
  // eigenvalues ascending -> semi-axes 1/sqrt descending; reverse for ascending
  Ellipsoid e;
  e.center = c;
  e.axes.resize(d, d);
  e.semi_axes.resize(d);
  for (int i = 0; i < d; ++i) {
    const int src = d - 1 - i;
    e.semi_axes(i) = 1.0 / std::sqrt(es.eigenvalues()(src));
    e.axes.row(i) = es.eigenvectors().col(src).transpose();
  }
  // Deterministic output: ties sorted by lexicographically larger direction,
  // sign fixed on the largest-magnitude component.
  for (int i = 0; i < d; ++i) {
    int mi = 0;
    for (int k = 1; k < d; ++k)
      if (std::abs(e.axes(i, k)) > std::abs(e.axes(i, mi))) mi = k;
    if (e.axes(i, mi) < 0) e.axes.row(i) = -e.axes.row(i);
  }
  for (int i = 0; i + 1 < d; ++i) {
    if (std::abs(e.semi_axes(i) - e.semi_axes(i + 1)) < 1e-14) {
      for (int k = 0; k < d; ++k) {
        if (e.axes(i, k) < e.axes(i + 1, k) - 1e-14) {
          e.axes.row(i).swap(e.axes.row(i + 1));
          std::swap(e.semi_axes(i), e.semi_axes(i + 1));
          break;
        }
        if (e.axes(i, k) > e.axes(i + 1, k) + 1e-14) break;
      }
    }
  }
  return e;
}

double ellipsoid_hausdorff(const Ellipsoid& a, const Ellipsoid& b, int samples) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("ellipsoid_hausdorff: dimension mismatch");
  double worst = 0.0;
  if (a.dim() == 2) {
    for (int j = 0; j < samples; ++j) {
      const double th = 2.0 * std::numbers::pi * j / samples;
      Eigen::Vector2d x(std::cos(th), std::sin(th));
      worst = std::max(worst, std::abs(a.support(x) - b.support(x)));
    }
  } else {
    const int m = static_cast<int>(std::sqrt(samples / 2.0));
    for (int i = 0; i < m; ++i) {
      const double th = (i + 0.5) * std::numbers::pi / m;
      for (int j = 0; j < 2 * m; ++j) {
        const double ph = std::numbers::pi * j / m;
        Eigen::Vector3d x(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                          std::cos(th));
        worst = std::max(worst, std::abs(a.support(x) - b.support(x)));
      }
    }
  }
  return worst;
}

}  // namespace minklab
