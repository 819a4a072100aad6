#include "minklab/energy.hpp"

#include <cmath>
#include <cstdio>

#include "minklab/errors.hpp"

namespace minklab {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string EnergyReport::csv_header() {
  return "t,J,dissipation,vol,ecc,origin_dist,residual";
}

std::string EnergyReport::csv_row() const {
  return fmt17(t) + "," + fmt17(J) + "," + fmt17(dissipation) + "," + fmt17(vol) + "," +
         fmt17(ecc) + "," + fmt17(origin_dist) + "," + fmt17(residual);
}

Eigen::VectorXd pow_field(const Eigen::VectorXd& u, double p) {
  const double pr = std::round(p);
  if (pr == p && std::abs(pr) <= 8) {
    int k = static_cast<int>(std::abs(pr));
    Eigen::VectorXd out = Eigen::VectorXd::Ones(u.size());
    for (int i = 0; i < k; ++i) out = out.cwiseProduct(u);
    if (pr < 0) out = out.cwiseInverse();
    return out;
  }
  return u.array().pow(p);
}

double functional_J(const SupportField& u, const Eigen::VectorXd& f, double p) {
  if (p == 0) throw std::invalid_argument("functional_J: p must be nonzero");
  if (f.size() != u.size()) throw std::invalid_argument("functional_J: f length mismatch");
  if (f.minCoeff() <= 0) throw std::invalid_argument("functional_J: f must be positive");
  return volume(u) - integrate(*u.grid, f.cwiseProduct(pow_field(u.values, p))) / p;
}

double dissipation(const SupportField& u, const Eigen::VectorXd& f, double p) {
  const Eigen::VectorXd det = ma_det(u);
  for (int i = 0; i < det.size(); ++i)
    if (det(i) <= 0) throw convexity_lost(i, det(i));
  const Eigen::VectorXd fup = f.cwiseProduct(pow_field(u.values, p - 1));
  const Eigen::VectorXd r = det - fup;
  return integrate(*u.grid, r.cwiseProduct(r).cwiseProduct(u.values).cwiseQuotient(det));
}

double equation_residual(const SupportField& u, const Eigen::VectorXd& f, double p) {
  const Eigen::VectorXd det = ma_det(u);
  const Eigen::VectorXd fup = f.cwiseProduct(pow_field(u.values, p - 1));
  return (det - fup).cwiseAbs().maxCoeff();
}

double compute_A0(const SphereGrid& grid, const Eigen::VectorXd& f, double p) {
  const int n = grid.dim();
  if (p >= -n - 1)
    throw std::invalid_argument("compute_A0: requires the super-critical range p < -n-1");
  if (f.minCoeff() <= 0) throw std::invalid_argument("compute_A0: f must be positive");
  const double f_l1 = integrate(grid, f);
  const double wn1 = unit_ball_volume(n + 1);
  return 2.0 * (-f_l1 / (p * std::pow(2.0 * (n + 1), p)) + std::pow(2.0, n + 1) * wn1);
}

AdmissibleParams AdmissibleParams::defaults(const SphereGrid& grid,
                                            const Eigen::VectorXd& f, double p) {
  AdmissibleParams a;
  a.A0 = compute_A0(grid, f, p);
  return a;
}

EnergyReport energy_report(const SupportField& u, const Eigen::VectorXd& f, double p,
                           const AdmissibleParams& params, double t, double mvee_tol) {
  (void)params;
  EnergyReport r;
  r.t = t;
  r.J = functional_J(u, f, p);
  r.dissipation = dissipation(u, f, p);
  r.vol = volume(u);
  r.ecc = eccentricity(min_ellipsoid_of_body(u, mvee_tol));
  r.origin_dist = u.values.minCoeff();
  r.residual = equation_residual(u, f, p);
  return r;
}

AdmissibleCheck in_admissible_class(const Ellipsoid& e, const AdmissibleParams& params) {
  AdmissibleCheck c;
  const double vol = e.volume();
  const double ecc = eccentricity(e);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(e.dim());
  if (!e.contains(origin, 1e-12)) {
    c.reason = "origin outside";
    const Eigen::VectorXd d = -e.center;
    c.violation = d.dot(e.quad_form() * d) - 1.0;
    return c;
  }
  if (vol < params.bar_v * (1 - 1e-12)) {
    c.reason = "volume floor";
    c.violation = (params.bar_v - vol) / params.bar_v;
    return c;
  }
  if (vol > (1 + 1e-12) / params.bar_v) {
    c.reason = "volume cap";
    c.violation = vol * params.bar_v - 1.0;
    return c;
  }
  if (ecc > params.bar_e * (1 + 1e-12)) {
    c.reason = "eccentricity cap";
    c.violation = ecc / params.bar_e - 1.0;
    return c;
  }
  c.ok = true;
  c.reason = "ok";
  return c;
}

std::vector<std::pair<double, double>> property_P_scan(
    const std::vector<std::pair<double, SupportField>>& family,
    const Eigen::VectorXd& f, double p) {
  std::vector<std::pair<double, double>> table;
  table.reserve(family.size());
  for (const auto& [param, u] : family)
    table.emplace_back(param, functional_J(u, f, p));
  return table;
}

}  // namespace minklab
