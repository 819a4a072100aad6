#ifndef MINKLAB_SUPPORT_FIELD_HPP
#define MINKLAB_SUPPORT_FIELD_HPP

#include <Eigen/Dense>
#include <string>

#include "minklab/ellipsoid.hpp"
#include "minklab/sphere_grid.hpp"

namespace minklab {

// Support function of a convex body sampled on a sphere grid. Immutable value
// type after construction; the grid is shared.
struct SupportField {
  GridPtr grid;
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
  int dim() const { return grid->dim(); }
};

// Exact samples of an ellipsoid's support function.
// Throws std::invalid_argument on a nonpositive semi-axis; if require_interior
// is set, also when the origin is not strictly inside (u_E <= 0 somewhere).
SupportField support_of_ellipsoid(const Ellipsoid& e, GridPtr grid,
                                  bool require_interior = false);

// det(hess u + u I) per node (= 1/K). Nonpositive values are data, not errors.
Eigen::VectorXd ma_det(const SupportField& u);

// Discrete polar-dual radial function r(xi_j) = min_i u_i / <x_i, xi_j>
// evaluated at the nodes of eval_grid.
Eigen::VectorXd radial_function(const SupportField& u, const SphereGrid& eval_grid);
Eigen::VectorXd radial_function(const SupportField& u);

// vol = 1/(n+1) * integral of r^{n+1}.
double volume(const SupportField& u);

// Boundary points z_i = u_i x_i + grad u(x_i), one row per node.
Eigen::MatrixXd boundary_points(const SupportField& u);

// sup-norm of the support difference; exact Hausdorff distance for convex
// bodies. Throws std::invalid_argument when grids are incompatible.
double hausdorff_distance(const SupportField& a, const SupportField& b);

// u^{1-p} * det(hess u + u I) per node.
Eigen::VectorXd p_area_density(const SupportField& u, double p);

struct CurvatureData {
  MatrixField b;          // hess u + u I
  MatrixField h;          // inverse of b
  Eigen::VectorXd K;      // Gauss curvature 1/det(b)
  Eigen::MatrixXd kappa;  // principal curvatures, ascending per node (size x n)
};

// Throws convexity_lost (carrying the node) when b is not positive definite.
CurvatureData curvature_data(const SupportField& u);

// u > 0 and min eigenvalue of b >= eps_b everywhere.
bool support_field_valid(const SupportField& u, double eps_b);

// JSON round trip: {"dim":..., "resolution":..., "values":[...]}.
std::string support_field_to_json(const SupportField& u);
SupportField support_field_from_json(const std::string& text);

}  // namespace minklab

#endif
