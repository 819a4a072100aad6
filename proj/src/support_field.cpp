#include "minklab/support_field.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "minklab/errors.hpp"

namespace minklab {

SupportField support_of_ellipsoid(const Ellipsoid& e, GridPtr grid, bool require_interior) {
  if (e.semi_axes.minCoeff() <= 0)
    throw std::invalid_argument("support_of_ellipsoid: nonpositive semi-axis");
  if (e.dim() != grid->ambient_dim())
    throw std::invalid_argument("support_of_ellipsoid: ambient dimension mismatch");
  SupportField u;
  u.grid = std::move(grid);
  u.values.resize(u.grid->size());
  for (int i = 0; i < u.grid->size(); ++i)
    u.values(i) = e.support(u.grid->nodes().row(i).transpose());
  if (require_interior && u.values.minCoeff() <= 0)
    throw std::invalid_argument("support_of_ellipsoid: origin not in the interior");
  return u;
}

Eigen::VectorXd ma_det(const SupportField& u) {
  const MatrixField b = covariant_hessian_plus_uI(*u.grid, u.values);
  Eigen::VectorXd d(b.size());
  for (int i = 0; i < b.size(); ++i) d(i) = b.det(i);
  return d;
}

Eigen::VectorXd radial_function(const SupportField& u, const SphereGrid& eval_grid) {
  if (u.values.minCoeff() <= 0)
    throw std::invalid_argument("radial_function: support function must be positive");
  const Eigen::MatrixXd& x = u.grid->nodes();
  const Eigen::MatrixXd& xi = eval_grid.nodes();
  const int n = u.size(), m = eval_grid.size();
  Eigen::VectorXd r(m);
  for (int j = 0; j < m; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double dot = x.row(i).dot(xi.row(j));
      if (dot > 1e-12) best = std::min(best, u.values(i) / dot);
    }
    r(j) = best;
  }
  return r;
}

Eigen::VectorXd radial_function(const SupportField& u) { return radial_function(u, *u.grid); }

double volume(const SupportField& u) {
  const Eigen::VectorXd r = radial_function(u);
  const int n1 = u.grid->ambient_dim();
  Eigen::VectorXd rn = r;
  for (int k = 1; k < n1; ++k) rn = rn.cwiseProduct(r);
  return integrate(*u.grid, rn) / n1;
}

Eigen::MatrixXd boundary_points(const SupportField& u) {
  const Eigen::MatrixXd grad = ambient_gradient(*u.grid, u.values);
  Eigen::MatrixXd z = grad;
  for (int i = 0; i < u.size(); ++i)
    z.row(i) += u.values(i) * u.grid->nodes().row(i);
  return z;
}

double hausdorff_distance(const SupportField& a, const SupportField& b) {
  if (a.grid->dim() != b.grid->dim() || a.grid->size() != b.grid->size() ||
      a.grid->resolution() != b.grid->resolution())
    throw std::invalid_argument("hausdorff_distance: grid mismatch");
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

Eigen::VectorXd p_area_density(const SupportField& u, double p) {
  const Eigen::VectorXd det = ma_det(u);
  Eigen::VectorXd out(u.size());
  for (int i = 0; i < u.size(); ++i) out(i) = std::pow(u.values(i), 1.0 - p) * det(i);
  return out;
}

CurvatureData curvature_data(const SupportField& u) {
  CurvatureData c;
  c.b = covariant_hessian_plus_uI(*u.grid, u.values);
  for (int i = 0; i < c.b.size(); ++i) {
    const double ev = c.b.min_eigenvalue(i);
    if (ev <= 0) throw convexity_lost(i, ev);
  }
  c.h = c.b.inverse();
  const int n = u.grid->dim();
  c.K.resize(c.b.size());
  c.kappa.resize(c.b.size(), n);
  double ev[2];
  for (int i = 0; i < c.b.size(); ++i) {
    c.K(i) = 1.0 / c.b.det(i);
    c.b.eigenvalues(i, ev);
    // principal curvatures = eigenvalues of h = reciprocals of those of b
    for (int k = 0; k < n; ++k) c.kappa(i, k) = 1.0 / ev[n - 1 - k];
  }
  return c;
}

bool support_field_valid(const SupportField& u, double eps_b) {
  if (u.values.minCoeff() <= 0) return false;
  const MatrixField b = covariant_hessian_plus_uI(*u.grid, u.values);
  for (int i = 0; i < b.size(); ++i)
    if (b.min_eigenvalue(i) < eps_b) return false;
  return true;
}

std::string support_field_to_json(const SupportField& u) {
  nlohmann::json j;
  j["dim"] = u.grid->dim();
  j["resolution"] = u.grid->resolution();
  j["values"] = std::vector<double>(u.values.data(), u.values.data() + u.values.size());
  return j.dump();
}

SupportField support_field_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SupportField u;
  u.grid = make_grid_ptr(j.at("dim").get<int>(), j.at("resolution").get<int>());
  const auto vals = j.at("values").get<std::vector<double>>();
  if (static_cast<int>(vals.size()) != u.grid->size())
    throw std::invalid_argument("support_field_from_json: value count mismatch");
  u.values = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
  return u;
}

}  // namespace minklab
