#ifndef MINKLAB_SPHERE_GRID_HPP
#define MINKLAB_SPHERE_GRID_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace minklab {

// Symmetric n x n matrix field sampled at the grid nodes, n in {1,2}.
// Stored componentwise: n=1 -> (b11), n=2 -> (b11, b12, b22).
struct MatrixField {
  int dim = 1;
  Eigen::MatrixXd comp;  // size x 1 or size x 3

  int size() const { return static_cast<int>(comp.rows()); }

  double det(int i) const {
    if (dim == 1) return comp(i, 0);
    return comp(i, 0) * comp(i, 2) - comp(i, 1) * comp(i, 1);
  }

  // Eigenvalues in ascending order.
  void eigenvalues(int i, double* out) const {
    if (dim == 1) {
      out[0] = comp(i, 0);
      return;
    }
    const double a = comp(i, 0), b = comp(i, 1), c = comp(i, 2);
    const double m = 0.5 * (a + c);
    const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    out[0] = m - r;
    out[1] = m + r;
  }

  double min_eigenvalue(int i) const {
    double ev[2];
    eigenvalues(i, ev);
    return ev[0];
  }

  double max_eigenvalue(int i) const {
    double ev[2];
    eigenvalues(i, ev);
    return ev[dim - 1];
  }

  MatrixField inverse() const;
};

// Discretization of S^1 or S^2 with quadrature weights and second-order
// covariant derivative stencils in the orthonormal frame (e_theta, e_phi/sin).
//
// n=1: uniform periodic angle grid, node j at angle 2*pi*j/N.
// n=2: latitude-longitude grid with nlat = resolution colatitude midpoints
//      (pole-free) and nlon = 2*resolution longitudes; latitude quadrature
//      weights solve an exactness system in the Legendre basis, so the rule
//      integrates all spherical harmonics of degree < nlat exactly.
class SphereGrid {
 public:
  int dim() const { return dim_; }              // n
  int ambient_dim() const { return dim_ + 1; }  // n+1
  int size() const { return static_cast<int>(nodes_.rows()); }
  int resolution() const { return resolution_; }
  int nlat() const { return nlat_; }
  int nlon() const { return nlon_; }

  const Eigen::MatrixXd& nodes() const { return nodes_; }      // size x (n+1)
  const Eigen::VectorXd& weights() const { return weights_; }  // sums to |S^n|

  double area() const { return weights_.sum(); }

  // Node angles: n=1 -> angle(j); n=2 -> colatitude(i), longitude(j).
  double angle(int j) const;
  double colatitude(int i) const { return theta_(i); }
  double longitude(int j) const;
  int index(int i, int j) const { return i * nlon_ + j; }

  // Zonal filter for n=2 tendencies: per latitude ring, truncates azimuthal
  // Fourier modes above k = max(2, nlat*sin(theta)). Pole-ward rings of a
  // latitude-longitude grid over-resolve the azimuthal direction, which
  // otherwise forces dt ~ h^4 on an explicit stepper; the filter restores the
  // equatorial CFL while leaving resolvable content untouched. No-op for n=1.
  void zonal_filter(Eigen::VectorXd& field) const;

  // Largest stable eigenvalue scale of the filtered Laplacian stencil.
  double stiffness_scale() const;

  friend SphereGrid make_grid(int dim, int resolution);

 private:
  int dim_ = 1;
  int resolution_ = 0;
  int nlat_ = 0, nlon_ = 0;  // n=2 only
  double h_theta_ = 0, h_phi_ = 0;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd theta_, sin_theta_, cot_theta_;  // per latitude (n=2)
  std::vector<int> ring_cap_;                      // retained wavenumbers per ring
  Eigen::MatrixXd four_cos_, four_sin_;            // (k, j) tables for the filter
};

SphereGrid make_grid(int dim, int resolution);

using GridPtr = std::shared_ptr<const SphereGrid>;

inline GridPtr make_grid_ptr(int dim, int resolution) {
  return std::make_shared<const SphereGrid>(make_grid(dim, resolution));
}

// Quadrature sum of w_i f_i; throws std::invalid_argument on length mismatch.
double integrate(const SphereGrid& grid, const Eigen::VectorXd& field);

// b_ij = covariant Hessian of u plus u * delta_ij per node, orthonormal frame.
MatrixField covariant_hessian_plus_uI(const SphereGrid& grid, const Eigen::VectorXd& u);

// Covariant gradient components in the orthonormal frame, size x n.
Eigen::MatrixXd covariant_gradient(const SphereGrid& grid, const Eigen::VectorXd& u);

// Gradient as ambient vectors (tangent to the sphere), size x (n+1).
Eigen::MatrixXd ambient_gradient(const SphereGrid& grid, const Eigen::VectorXd& u);

}  // namespace minklab

#endif
