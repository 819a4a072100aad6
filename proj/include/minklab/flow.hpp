#ifndef MINKLAB_FLOW_HPP
#define MINKLAB_FLOW_HPP

#include <optional>
#include <string>
#include <vector>

#include "minklab/energy.hpp"
#include "minklab/support_field.hpp"

namespace minklab {

enum class FlowMode { raw, modified };

enum class FlowStatus { running, frozen_at_A0, stationary_initial, converged, failed };

std::string to_string(FlowStatus s);

struct FlowConfig {
  double p = -3.0;
  Eigen::VectorXd f;  // positive density on the grid
  double dt_init = 0;  // 0 -> dt_max
  double dt_min = 1e-10;
  double dt_max = 0;   // 0 -> CFL-safe default 0.25 h^2
  double eps_b = 1e-6;       // convexity floor for min-eig(b)
  double tol_residual = 0;   // stationarity gate; 0 disables early stop
  double T_max = 1e30;
  FlowMode mode = FlowMode::raw;
  double A0 = 0;             // threshold for modified mode
  double sample_interval = 0.05;
  bool track_energy_each_step = true;  // per-step J/dissipation records

  // Applies dt defaults for the grid and checks invariants; throws
  // std::invalid_argument on violation (including p >= -n-1).
  void validate(const SphereGrid& grid);
  double default_dt_max(const SphereGrid& grid) const;
};

// Per accepted step scalar diagnostics; J/dissipation are NaN when per-step
// energy tracking is off.
struct StepRecord {
  double t = 0, dt = 0;
  double J = 0, dissipation = 0, residual = 0;
  double maxK = 0, min_kappa = 0;
  double min_u = 0, max_u = 0, max_grad = 0;
};

struct CurvatureSnapshot {
  double t = 0;
  double maxK = 0;
  double min_kappa = 0;
  double min_u = 0, max_u = 0, max_grad = 0;
};

struct FlowState {
  SupportField u;
  double t = 0;
  double dt = 0;
  FlowStatus status = FlowStatus::running;
  std::string failure_reason;
  std::vector<EnergyReport> J_history;         // sampled reports
  std::vector<StepRecord> steps;               // fine-grained track
  std::vector<CurvatureSnapshot> diagnostics;  // sampled curvature extremes
  double next_sample = 0;
};

FlowState init_flow(const SupportField& u0, const FlowConfig& cfg);

// One adaptive attempt: advance u by one explicit RK4 step of
//   du/dt = -f u^p / det(hess u + u I) + u,
// or reject the trial (halving dt) when it violates u > 0 or
// min-eig(b) >= eps_b. In modified mode, freezes the pre-crossing state when J
// reaches A0. Stepping a non-running state is the identity. Taken by value so
// the run loop can move the (history-carrying) state through.
FlowState step(FlowState state, const FlowConfig& cfg);

// Right-hand side; empty optional when the state is outside the uniformly
// convex regime (det b <= 0 at some node).
std::optional<Eigen::VectorXd> flow_rhs(const SupportField& u, const Eigen::VectorXd& f,
                                        double p);

// Integrate to time T (<= cfg.T_max). Appends sampled reports/diagnostics.
FlowState run_flow(const SupportField& u0, const FlowConfig& cfg, double T);

// Threshold-capped flow: held stationary when J(E0) >= A0, frozen at the first
// crossing otherwise, and the raw flow below the threshold. E0 must lie in the
// admissible class.
FlowState run_modified(const Ellipsoid& E0, GridPtr grid, const FlowConfig& cfg,
                       const AdmissibleParams& params, double T);

struct MonotonicityViolation {
  double t = 0;
  double drop = 0;       // J_k - J_{k+1} > 0
  double tolerance = 0;  // 10 dt^2 max(1,|J|)
};

struct MonotonicityReport {
  std::vector<MonotonicityViolation> violations;
  double mid_t = 0;
  double mid_dJdt = 0;
  double mid_dissipation = 0;
  double mid_rel_err = 0;  // |dJdt - dissipation| / dissipation at mid-run
  bool pass() const { return violations.empty(); }
};

// Requires >= 2 per-step energy records from raw (unfrozen) evolution.
MonotonicityReport monotonicity_check(const FlowState& state);

CurvatureSnapshot curvature_diagnostics(const FlowState& state);

}  // namespace minklab

#endif
