#ifndef MINKLAB_ELLIPSOID_HPP
#define MINKLAB_ELLIPSOID_HPP

#include <Eigen/Dense>

namespace minklab {

// Ellipsoid in R^d, d in {2,3}: center, orthonormal axis frame (rows of
// `axes`), semi-axis lengths sorted ascending. The frame row i pairs with
// semi_axes(i).
struct Ellipsoid {
  Eigen::VectorXd center;
  Eigen::MatrixXd axes;       // d x d, rows are unit axis directions
  Eigen::VectorXd semi_axes;  // ascending, > 0

  int dim() const { return static_cast<int>(center.size()); }

  double volume() const;

  // Support function h_E(x) = <center,x> + sqrt(sum a_i^2 <x,q_i>^2).
  double support(const Eigen::VectorXd& x) const;

  // Radial function r_E(xi): largest t with t*xi in E. Requires origin in E.
  double radial(const Eigen::VectorXd& xi) const;

  // Quadratic form A with E = { z : (z-center)^T A (z-center) <= 1 }.
  Eigen::MatrixXd quad_form() const;

  bool contains(const Eigen::VectorXd& z, double slack = 0.0) const;

  // Scale about the center by factor s.
  Ellipsoid scaled_about_center(double s) const;

  static Ellipsoid ball(int dim, double radius,
                        const Eigen::VectorXd& center = Eigen::VectorXd());

  // From the quadratic form (z-c)^T A (z-c) <= 1; symmetric eigendecomposition
  // with deterministic ordering: semi-axes ascending, ties broken by
  // lexicographically largest axis direction, sign fixed so the first
  // component of largest magnitude is positive.
  static Ellipsoid from_quadratic(const Eigen::VectorXd& c, const Eigen::MatrixXd& A);
};

// sup-norm distance of support functions sampled on unit directions of a grid;
// exact Hausdorff distance for convex bodies in the continuum.
double ellipsoid_hausdorff(const Ellipsoid& a, const Ellipsoid& b, int samples = 2048);

double unit_ball_volume(int dim);

}  // namespace minklab

#endif
