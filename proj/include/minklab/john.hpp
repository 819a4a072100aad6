#ifndef MINKLAB_JOHN_HPP
#define MINKLAB_JOHN_HPP

#include <Eigen/Dense>

#include "minklab/ellipsoid.hpp"
#include "minklab/support_field.hpp"

namespace minklab {

// Minimum-volume enclosing ellipsoid of a point cloud (rows of `points`) by
// Khachiyan barycentric-coordinate ascent with Wolfe-Atwood away steps.
// Guarantees containment with margin >= -tol in the quadratic form and volume
// within (1+tol)^{d} of optimal. Throws degenerate_input for affinely
// degenerate clouds and iteration_limit past the cap.
Ellipsoid mvee(const Eigen::MatrixXd& points, double tol = 1e-7,
               int max_iterations = 100000);

// MVEE of the reconstructed boundary points of a body.
Ellipsoid min_ellipsoid_of_body(const SupportField& u, double tol = 1e-7);

// Certificate that (1/(n+1)) E, shrunk about its center, sits inside the body:
// support check with slack 10*tol. Returns the worst signed margin
// (u_body - u_shrunk); the certificate holds when margin >= -10*tol.
double john_containment_margin(const Ellipsoid& e, const SupportField& u);

double eccentricity(const Ellipsoid& e);

}  // namespace minklab

#endif
