#include "minklab/flow.hpp"

#include <cmath>
#include <numbers>

namespace minklab {

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::running: return "running";
    case FlowStatus::frozen_at_A0: return "frozen-at-A0";
    case FlowStatus::stationary_initial: return "stationary-initial";
    case FlowStatus::converged: return "converged";
    case FlowStatus::failed: return "failed";
  }
  return "?";
}

double FlowConfig::default_dt_max(const SphereGrid& grid) const {
  // RK4 real-axis stability bound 2.78/lambda for the stiffest retained mode
  // of the linearized operator near the unit ball, with a safety factor so the
  // adaptive controller is not driven by instability noise.
  return 1.4 / grid.stiffness_scale();
}

void FlowConfig::validate(const SphereGrid& grid) {
  const int n = grid.dim();
  if (p >= -n - 1)
    throw std::invalid_argument("flow: requires the super-critical range p < -n-1");
  if (f.size() != grid.size()) throw std::invalid_argument("flow: f length mismatch");
  if (f.minCoeff() <= 0) throw std::invalid_argument("flow: f must be positive");
  if (dt_max <= 0) dt_max = default_dt_max(grid);
  if (dt_init <= 0) dt_init = dt_max;
  if (!(0 < dt_min && dt_min <= dt_init && dt_init <= dt_max))
    throw std::invalid_argument("flow: need 0 < dt_min <= dt_init <= dt_max");
  if (eps_b <= 0) throw std::invalid_argument("flow: eps_b must be positive");
  if (sample_interval <= 0) throw std::invalid_argument("flow: sample_interval must be positive");
}

std::optional<Eigen::VectorXd> flow_rhs(const SupportField& u, const Eigen::VectorXd& f,
                                        double p) {
  const Eigen::VectorXd det = ma_det(u);
  if (det.minCoeff() <= 0) return std::nullopt;
  Eigen::VectorXd rhs =
      u.values - f.cwiseProduct(pow_field(u.values, p)).cwiseQuotient(det);
  u.grid->zonal_filter(rhs);
  return rhs;
}

namespace {

// u^p for one sample; integer exponents up to 8 avoid the libm pow.
struct PowP {
  double p;
  int k = 0;
  bool integral = false;
  explicit PowP(double p_) : p(p_) {
    const double r = std::round(p_);
    if (r == p_ && std::abs(r) <= 8) {
      integral = true;
      k = static_cast<int>(std::abs(r));
    }
  }
  double operator()(double u) const {
    if (!integral) return std::pow(u, p);
    double acc = 1;
    for (int i = 0; i < k; ++i) acc *= u;
    return p < 0 ? 1.0 / acc : acc;
  }
};

// Fused right-hand side evaluation; false when det(b) <= 0 somewhere.
bool rhs_fused(const SphereGrid& g, const Eigen::VectorXd& u, const Eigen::VectorXd& f,
               const PowP& powp, Eigen::VectorXd& out) {
  const int n = g.size();
  out.resize(n);
  if (g.dim() == 1) {
    const double h = 2.0 * std::numbers::pi / n;
    const double inv_h2 = 1.0 / (h * h);
    for (int j = 0; j < n; ++j) {
      const double det =
          (u((j + 1) % n) - 2.0 * u(j) + u((j + n - 1) % n)) * inv_h2 + u(j);
      if (det <= 0) return false;
      out(j) = u(j) - f(j) * powp(u(j)) / det;
    }
    return true;
  }
  const MatrixField b = covariant_hessian_plus_uI(g, u);
  for (int i = 0; i < n; ++i) {
    const double det = b.det(i);
    if (det <= 0) return false;
    out(i) = u(i) - f(i) * powp(u(i)) / det;
  }
  g.zonal_filter(out);
  return true;
}

// Validity of a trial state; exports the Hessian field for reuse.
bool trial_ok(const SupportField& u, double eps_b, MatrixField& b_out) {
  if (!u.values.allFinite() || u.values.minCoeff() <= 0) return false;
  b_out = covariant_hessian_plus_uI(*u.grid, u.values);
  for (int i = 0; i < b_out.size(); ++i)
    if (b_out.min_eigenvalue(i) < eps_b) return false;
  return true;
}

void record_step(FlowState& s, const FlowConfig& cfg, double dt_used,
                 const MatrixField& b) {
  StepRecord r;
  r.t = s.t;
  r.dt = dt_used;
  r.min_u = s.u.values.minCoeff();
  r.max_u = s.u.values.maxCoeff();
  const Eigen::MatrixXd grad = covariant_gradient(*s.u.grid, s.u.values);
  r.max_grad = grad.rowwise().norm().maxCoeff();

  const PowP powp(cfg.p - 1);
  const int n = b.size();
  double max_k = 0, min_kap = std::numeric_limits<double>::infinity(), res = 0;
  Eigen::VectorXd det(n);
  double ev[2];
  for (int i = 0; i < n; ++i) {
    det(i) = b.det(i);
    max_k = std::max(max_k, 1.0 / det(i));
    b.eigenvalues(i, ev);
    min_kap = std::min(min_kap, 1.0 / ev[b.dim - 1]);
    res = std::max(res, std::abs(det(i) - cfg.f(i) * powp(s.u.values(i))));
  }
  r.maxK = max_k;
  r.min_kappa = min_kap;
  r.residual = res;

  if (cfg.track_energy_each_step || cfg.mode == FlowMode::modified) {
    r.J = functional_J(s.u, cfg.f, cfg.p);
    const Eigen::VectorXd dev =
        det - cfg.f.cwiseProduct(pow_field(s.u.values, cfg.p - 1));
    r.dissipation = integrate(
        *s.u.grid, dev.cwiseProduct(dev).cwiseProduct(s.u.values).cwiseQuotient(det));
  } else {
    r.J = r.dissipation = std::numeric_limits<double>::quiet_NaN();
  }
  s.steps.push_back(r);
}

}  // namespace

FlowState init_flow(const SupportField& u0, const FlowConfig& cfg) {
  FlowState s;
  s.u = u0;
  s.dt = cfg.dt_init;
  s.next_sample = 0.0;
  return s;
}

FlowState step(FlowState state, const FlowConfig& cfg) {
  if (state.status != FlowStatus::running) return state;

  FlowState s = std::move(state);
  const double dt = s.dt;
  const SphereGrid& g = *s.u.grid;
  const PowP powp(cfg.p);

  // RK4 stages; any stage outside the convex regime rejects the step.
  Eigen::VectorXd k1, k2, k3, k4;
  bool stages_ok = rhs_fused(g, s.u.values, cfg.f, powp, k1) &&
                   rhs_fused(g, s.u.values + 0.5 * dt * k1, cfg.f, powp, k2) &&
                   rhs_fused(g, s.u.values + 0.5 * dt * k2, cfg.f, powp, k3) &&
                   rhs_fused(g, s.u.values + dt * k3, cfg.f, powp, k4);

  bool accept = false;
  SupportField trial{s.u.grid, Eigen::VectorXd()};
  MatrixField b_trial;
  if (stages_ok) {
    trial.values = s.u.values + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    accept = trial_ok(trial, cfg.eps_b, b_trial);
  }

  if (!accept) {
    if (dt / 2 < cfg.dt_min) {
      s.status = FlowStatus::failed;
      s.failure_reason = "convexity lost";
    } else {
      s.dt = dt / 2;
    }
    return s;
  }

  if (cfg.mode == FlowMode::modified) {
    const double J_new = functional_J(trial, cfg.f, cfg.p);
    if (J_new >= cfg.A0) {
      // Freeze the last pre-crossing state.
      s.status = FlowStatus::frozen_at_A0;
      return s;
    }
  }

  s.u = std::move(trial);
  s.t += dt;
  s.dt = std::min(dt * 1.2, cfg.dt_max);
  record_step(s, cfg, dt, b_trial);
  return s;
}

namespace {

void sample_if_due(FlowState& s, const FlowConfig& cfg, const AdmissibleParams& params) {
  if (s.t + 1e-15 < s.next_sample) return;
  s.J_history.push_back(energy_report(s.u, cfg.f, cfg.p, params, s.t));
  s.diagnostics.push_back(curvature_diagnostics(s));
  while (s.next_sample <= s.t + 1e-15) s.next_sample += cfg.sample_interval;
}

FlowState run_loop(FlowState s, const FlowConfig& cfg, double T,
                   const AdmissibleParams& params) {
  sample_if_due(s, cfg, params);
  while (s.status == FlowStatus::running && s.t < T - 1e-13) {
    s.dt = std::min(s.dt, T - s.t);
    const double t_before = s.t;
    s = step(std::move(s), cfg);
    if (s.t == t_before) continue;  // rejected or frozen
    sample_if_due(s, cfg, params);
    if (cfg.tol_residual > 0 && s.steps.back().residual <= cfg.tol_residual)
      s.status = FlowStatus::converged;
  }
  // Final sample at the terminal state.
  if (s.J_history.empty() || s.J_history.back().t < s.t - 1e-15) {
    s.J_history.push_back(energy_report(s.u, cfg.f, cfg.p, params, s.t));
    s.diagnostics.push_back(curvature_diagnostics(s));
  }
  return s;
}

}  // namespace

FlowState run_flow(const SupportField& u0, const FlowConfig& cfg, double T) {
  FlowConfig c = cfg;
  c.validate(*u0.grid);
  if (T > c.T_max)
    throw std::invalid_argument("run_flow: horizon exceeds T_max");
  AdmissibleParams params = AdmissibleParams::defaults(*u0.grid, c.f, c.p);
  if (c.mode == FlowMode::modified && c.A0 <= 0) c.A0 = params.A0;
  return run_loop(init_flow(u0, c), c, T, params);
}

FlowState run_modified(const Ellipsoid& E0, GridPtr grid, const FlowConfig& cfg,
                       const AdmissibleParams& params, double T) {
  FlowConfig c = cfg;
  c.mode = FlowMode::modified;
  c.validate(*grid);
  if (T > c.T_max)
    throw std::invalid_argument("run_modified: horizon exceeds T_max");
  const AdmissibleCheck chk = in_admissible_class(E0, params);
  if (!chk.ok)
    throw std::invalid_argument("run_modified: initial ellipsoid not admissible (" +
                                chk.reason + ")");
  if (c.A0 <= 0) c.A0 = params.A0;

  FlowState s = init_flow(support_of_ellipsoid(E0, grid, true), c);
  if (functional_J(s.u, c.f, c.p) >= c.A0) {
    s.status = FlowStatus::stationary_initial;
    s.J_history.push_back(energy_report(s.u, c.f, c.p, params, 0.0));
    s.diagnostics.push_back(curvature_diagnostics(s));
    return s;
  }
  return run_loop(std::move(s), c, T, params);
}

MonotonicityReport monotonicity_check(const FlowState& state) {
  MonotonicityReport rep;
  const auto& st = state.steps;
  if (st.size() < 2 || std::isnan(st[0].J))
    throw std::invalid_argument("monotonicity_check: needs >= 2 per-step energy records");

  for (size_t k = 0; k + 1 < st.size(); ++k) {
    const double tol = 10.0 * st[k + 1].dt * st[k + 1].dt * std::max(1.0, std::abs(st[k].J));
    const double drop = st[k].J - st[k + 1].J;
    if (drop > tol) rep.violations.push_back({st[k + 1].t, drop, tol});
  }

  // Mid-run slope of J by least squares over a short window centered at half
  // the realized time span, compared against the mean recorded dissipation
  // there. The window smooths the kinks the radial-minimum volume introduces.
  size_t m = 0;
  const double t_mid = st.back().t / 2;
  for (size_t k = 0; k < st.size(); ++k)
    if (std::abs(st[k].t - t_mid) < std::abs(st[m].t - t_mid)) m = k;
  const size_t half = std::min<size_t>(50, std::min(m, st.size() - 1 - m));
  if (half >= 1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, sd = 0;
    const double n = 2.0 * half + 1;
    for (size_t k = m - half; k <= m + half; ++k) {
      sx += st[k].t;
      sy += st[k].J;
      sxx += st[k].t * st[k].t;
      sxy += st[k].t * st[k].J;
      sd += st[k].dissipation;
    }
    rep.mid_t = st[m].t;
    rep.mid_dJdt = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.mid_dissipation = sd / n;
    rep.mid_rel_err = std::abs(rep.mid_dJdt - rep.mid_dissipation) /
                      std::max(std::abs(rep.mid_dissipation), 1e-300);
  }
  return rep;
}

CurvatureSnapshot curvature_diagnostics(const FlowState& state) {
  CurvatureSnapshot d;
  d.t = state.t;
  const CurvatureData c = curvature_data(state.u);
  d.maxK = c.K.maxCoeff();
  d.min_kappa = c.kappa.col(0).minCoeff();
  d.min_u = state.u.values.minCoeff();
  d.max_u = state.u.values.maxCoeff();
  const Eigen::MatrixXd g = covariant_gradient(*state.u.grid, state.u.values);
  d.max_grad = g.rowwise().norm().maxCoeff();
  return d;
}

}  // namespace minklab
