#ifndef MINKLAB_ENERGY_HPP
#define MINKLAB_ENERGY_HPP

#include <string>
#include <vector>

#include "minklab/john.hpp"
#include "minklab/support_field.hpp"

namespace minklab {

// Snapshot of the energy functional and body diagnostics at one instant.
struct EnergyReport {
  double t = 0;
  double J = 0;
  double dissipation = 0;
  double vol = 0;
  double ecc = 0;
  double origin_dist = 0;
  double residual = 0;

  std::string csv_row() const;  // t,J,dissipation,vol,ecc,origin_dist,residual
  static std::string csv_header();
};

struct AdmissibleParams {
  double bar_e = 10.0;   // eccentricity cap
  double bar_v = 0.05;   // volume floor (cap is 1/bar_v)
  double bar_d = 0.05;   // origin-distance floor
  double A0 = 0.0;       // threshold energy

  static AdmissibleParams defaults(const SphereGrid& grid, const Eigen::VectorXd& f,
                                   double p);
};

struct AdmissibleCheck {
  bool ok = false;
  std::string reason;      // violated constraint, or "ok"
  double violation = 0.0;  // magnitude of the worst violation
};

// J(Omega) = vol(Omega) - (1/p) * integral of f u^p.
double functional_J(const SupportField& u, const Eigen::VectorXd& f, double p);

// integral of (det b - f u^{p-1})^2 * u / det b; zero iff u solves the
// equation on the grid. Throws convexity_lost when det b <= 0 somewhere.
double dissipation(const SupportField& u, const Eigen::VectorXd& f, double p);

// max-norm of det(hess u + u I) - f u^{p-1}.
double equation_residual(const SupportField& u, const Eigen::VectorXd& f, double p);

// A0 = 2( -|f|_{L1} / (p [2(n+1)]^p) + 2^{n+1} vol(B_1) ); requires p < -n-1.
double compute_A0(const SphereGrid& grid, const Eigen::VectorXd& f, double p);

EnergyReport energy_report(const SupportField& u, const Eigen::VectorXd& f, double p,
                           const AdmissibleParams& params, double t = 0.0,
                           double mvee_tol = 1e-7);

AdmissibleCheck in_admissible_class(const Ellipsoid& e, const AdmissibleParams& params);

// Evaluate J over a parametrized family; no transformation applied.
std::vector<std::pair<double, double>> property_P_scan(
    const std::vector<std::pair<double, SupportField>>& family,
    const Eigen::VectorXd& f, double p);

// u^p with a fast path for small integer exponents.
Eigen::VectorXd pow_field(const Eigen::VectorXd& u, double p);

}  // namespace minklab

#endif
