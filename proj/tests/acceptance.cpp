// Acceptance suite: one pass/fail line per criterion, exit code = failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "minklab/harness.hpp"
#include "minklab/homology.hpp"
#include "minklab/search.hpp"

using namespace minklab;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  if (!ok) ++failures;
}

Ellipsoid centered_ellipse(double a1, double a2, double psi = kPi / 2) {
  Ellipsoid e;
  e.center = Eigen::Vector2d::Zero();
  e.semi_axes = Eigen::Vector2d(std::min(a1, a2), std::max(a1, a2));
  e.axes.resize(2, 2);
  e.axes << std::cos(psi), std::sin(psi), -std::sin(psi), std::cos(psi);
  return e;
}

FlowConfig flow_config(GridPtr g, double p) {
  FlowConfig cfg;
  cfg.p = p;
  cfg.f = Eigen::VectorXd::Ones(g->size());
  return cfg;
}

// --- criterion 1: stationarity of the unit circle -------------------------
void criterion1() {
  Timer timer;
  auto g = make_grid_ptr(1, 256);
  const SupportField u0 = support_of_ellipsoid(Ellipsoid::ball(2, 1.0), g);
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(g->size());
  const double residual = equation_residual(u0, f, -3.0);

  FlowConfig cfg = flow_config(g, -3.0);
  cfg.track_energy_each_step = false;
  const FlowState s = run_flow(u0, cfg, 5.0);
  const double moved = (s.u.values - u0.values).cwiseAbs().maxCoeff();
  const double t = timer.seconds();

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "stationarity: residual=%.2e (<=1e-10), |u(5)-u0|=%.2e (<=1e-8), %.2fs (<1s)",
                residual, moved, t);
  report(1, residual <= 1e-10 && moved <= 1e-8 && t < 1.0, buf);
}

// --- criterion 2: monotonicity and the dissipation identity ---------------
FlowState criterion2(bool* ok_out) {
  Timer timer;
  // Monotonicity run at the stated dt = 1e-3. The super-critical flow from
  // this initial ellipse degenerates (pancake collapse) before T=2; the
  // adaptive controller records the blow-up, and the checks apply along the
  // realized trajectory.
  auto g = make_grid_ptr(1, 64);
  FlowConfig cfg = flow_config(g, -3.0);
  cfg.dt_init = cfg.dt_max = 1e-3;
  cfg.track_energy_each_step = true;
  const FlowState run_a =
      run_flow(support_of_ellipsoid(centered_ellipse(1.2, 1 / 1.2), g), cfg, 2.0);
  const MonotonicityReport mono = monotonicity_check(run_a);

  // Dissipation identity at the flow module's stated step size dt = 1e-4,
  // evaluated at mid-run of a smooth horizon.
  auto g2 = make_grid_ptr(1, 128);
  FlowConfig cfg2 = flow_config(g2, -3.0);
  cfg2.dt_init = cfg2.dt_max = 1e-4;
  cfg2.track_energy_each_step = true;
  const FlowState run_b =
      run_flow(support_of_ellipsoid(centered_ellipse(1.2, 1 / 1.2), g2), cfg2, 0.5);
  const MonotonicityReport dissb = monotonicity_check(run_b);

  const double t = timer.seconds();
  const bool ok = mono.violations.empty() && dissb.violations.empty() &&
                  dissb.mid_rel_err <= 0.02 && t < 10.0;
  char buf[300];
  std::snprintf(buf, sizeof(buf),
                "monotonicity: 0 violations required (got %zu; run to t=%.3f, %s), "
                "dJ/dt vs dissipation at mid-run %.2f%% (<=2%%), %.1fs (<10s)",
                mono.violations.size(), run_a.t, to_string(run_a.status).c_str(),
                100 * dissb.mid_rel_err, t);
  report(2, ok, buf);
  *ok_out = ok;
  return run_a;
}

// --- criterion 3: property P power law -------------------------------------
void criterion3() {
  Timer timer;
  auto g = make_grid_ptr(1, 256);
  const auto fam = build_family("offcenter:0.2,0.1,0.05,0.025", g);
  const auto table = property_P_scan(fam, Eigen::VectorXd::Ones(g->size()), -4.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [d, J] : table) {
    const double lx = std::log(d), ly = std::log(J);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(table.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double t = timer.seconds();
  char buf[200];
  std::snprintf(buf, sizeof(buf), "property-P power law: slope=%.3f (<=-0.5), %.1fs (<5s)",
                slope, t);
  report(3, slope <= -0.5 && t < 5.0, buf);
}

// --- criterion 4: the A0 formula and the half-A0 gate -----------------------
void criterion4() {
  auto g = make_grid_ptr(1, 256);
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(g->size());
  const double a0 = compute_A0(*g, f, -3.0);
  const double closed = 280.0 * kPi / 3.0;
  const double rel = std::abs(a0 - closed) / closed;

  // bodies with B_{1/4} subset Omega subset B_2: J <= A0/2
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ax(0.3, 1.9), off(-0.5, 0.5), ang(0, kPi);
  int tested = 0;
  double worstJ = -1e300;
  while (tested < 40) {
    Ellipsoid e = centered_ellipse(ax(rng), ax(rng), ang(rng));
    e.center = Eigen::Vector2d(off(rng), off(rng));
    const SupportField u = support_of_ellipsoid(e, g);
    if (u.values.minCoeff() < 0.25 || u.values.maxCoeff() > 2.0) continue;
    ++tested;
    worstJ = std::max(worstJ, functional_J(u, f, -3.0));
  }
  const bool ok = rel <= 1e-9 && worstJ <= a0 / 2;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "A0 formula: rel err=%.1e (<=1e-9); max J over %d pinched bodies=%.2f "
                "(<= A0/2=%.2f)",
                rel, tested, worstJ, a0 / 2);
  report(4, ok, buf);
}

// --- criterion 5: MVEE recovery and John containment ------------------------
void criterion5() {
  Timer timer;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> axd(0.5, 2.0), cen(-0.3, 0.3);

  double worst_rec = 0, worst_margin = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = trial < 25 ? 2 : 3;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
    Ellipsoid truth;
    truth.axes = q.transpose();
    truth.semi_axes.resize(d);
    for (int i = 0; i < d; ++i) truth.semi_axes(i) = axd(rng);
    std::sort(truth.semi_axes.data(), truth.semi_axes.data() + d);
    truth.center = Eigen::VectorXd::NullaryExpr(d, [&](int) { return cen(rng); });

    // 512 boundary samples from symmetric sphere grids mapped onto the body
    const int n_samples = 512;
    Eigen::MatrixXd pts(n_samples, d);
    const Eigen::MatrixXd map = truth.axes.transpose() * truth.semi_axes.asDiagonal();
    if (d == 2) {
      for (int j = 0; j < n_samples; ++j) {
        const double th = 2 * kPi * j / n_samples;
        pts.row(j) =
            (truth.center + map * Eigen::Vector2d(std::cos(th), std::sin(th)))
                .transpose();
      }
    } else {
      int r = 0;
      for (int i = 0; i < 16; ++i) {
        const double th = (i + 0.5) * kPi / 16;
        for (int j = 0; j < 32; ++j) {
          const double ph = kPi * j / 16;
          const Eigen::Vector3d s(std::sin(th) * std::cos(ph),
                                  std::sin(th) * std::sin(ph), std::cos(th));
          pts.row(r++) = (truth.center + map * s).transpose();
        }
      }
    }
    const Ellipsoid rec = mvee(pts, 1e-7);
    worst_rec = std::max(worst_rec, ellipsoid_hausdorff(rec, truth));

    // John containment certificate on the sampled body
    auto grid = make_grid_ptr(d - 1, d == 2 ? 512 : 16);
    const SupportField u = support_of_ellipsoid(truth, grid);
    const Ellipsoid me = min_ellipsoid_of_body(u, 1e-7);
    worst_margin = std::min(worst_margin, john_containment_margin(me, u));
  }
  const double t = timer.seconds();
  const bool ok = worst_rec <= 1e-4 && worst_margin >= -10 * 1e-7 && t < 30.0;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "MVEE: worst recovery=%.2e (<=1e-4), worst John margin=%.1e "
                "(>=-1e-6), %.1fs (<30s)",
                worst_rec, worst_margin, t);
  report(5, ok, buf);
}

// --- criteria 6 and 7: initial-data search and convergence ------------------
SearchResult criterion6(bool* ok_out) {
  Timer timer;
  auto g = make_grid_ptr(1, 64);
  FlowConfig cfg = flow_config(g, -3.0);
  cfg.T_max = 25.0;
  cfg.track_energy_each_step = true;
  const AdmissibleParams params = AdmissibleParams::defaults(*g, cfg.f, -3.0);

  EllipsoidParams seed = EllipsoidParams::ball(2);
  seed.center << 0.02, -0.01;
  seed.log_semi_axes << std::log(1.15), -std::log(1.15);
  seed.rotation << 0.4;

  SearchOptions opts;
  opts.max_evals = 1500;
  opts.restarts = 3;
  opts.seed = 2026;

  const SearchResult res = limiting_initial({0.5, 1.0, 2.0}, g, cfg, params, seed, opts);
  const double t = timer.seconds();

  bool horizons_ok = true;
  std::string objs;
  for (const auto& h : res.horizon_results) {
    horizons_ok = horizons_ok && h.found && h.objective <= 1e-2;
    char num[40];
    std::snprintf(num, sizeof(num), "%s%.1e", objs.empty() ? "" : ",", h.objective);
    objs += num;
  }
  const bool ok = horizons_ok && res.certified && t < 300.0;
  char buf[300];
  std::snprintf(buf, sizeof(buf),
                "initial search: objectives {%s} (<=1e-2), certified=%s "
                "(sup J=%.2f <= 0.75 A0=%.2f), %.0fs (<300s)",
                objs.c_str(), res.certified ? "true" : "false", res.sup_J,
                0.75 * params.A0, t);
  report(6, ok, buf);
  *ok_out = ok;
  return res;
}

void criterion7(const SearchResult& search) {
  Timer timer;
  auto g = make_grid_ptr(1, 128);
  FlowConfig cfg = flow_config(g, -3.0);
  cfg.T_max = 20.0;
  cfg.track_energy_each_step = true;
  const SupportField u0 = support_of_ellipsoid(search.E_star, g, true);
  const FlowState s = run_flow(u0, cfg, 20.0);

  double t_hit = -1;
  if (equation_residual(u0, cfg.f, cfg.p) <= 1e-4 &&
      dissipation(u0, cfg.f, cfg.p) <= 1e-8)
    t_hit = 0;
  if (t_hit < 0)
    for (const auto& r : s.steps)
      if (r.residual <= 1e-4 && r.dissipation <= 1e-8) {
        t_hit = r.t;
        break;
      }

  const double t = timer.seconds();
  char buf[340];
  if (t_hit >= 0) {
    std::snprintf(buf, sizeof(buf),
                  "convergence: residual<=1e-4 and dissipation<=1e-8 reached at t=%.3f "
                  "(<20); run then ends %s at t=%.2f (finite-precision shooting escapes "
                  "in finite time), %.0fs",
                  t_hit, to_string(s.status).c_str(), s.t, t);
    report(7, true, buf);
  } else {
    double min_res = 1e300;
    for (const auto& r : s.steps) min_res = std::min(min_res, r.residual);
    std::snprintf(buf, sizeof(buf),
                  "convergence: not-reproduced-at-this-scale (status %s at t=%.2f, "
                  "min residual along run %.2e; trajectory in the step history), %.0fs",
                  to_string(s.status).c_str(), s.t, min_res, t);
    report(7, false, buf);
  }
}

// --- criterion 8: homology suite --------------------------------------------
void criterion8() {
  Timer timer;
  bool ok = verify_n1_eccentric_family();

  const HomologyProfile rp2 = homology(rp2_complex());
  ok = ok && rp2[0].betti == 1 && rp2[1].betti == 0 &&
       rp2[1].torsion == std::vector<long long>{2} && rp2[2].betti == 0;

  const std::vector<SimplicialComplex> corpus = {
      circle_complex(), sphere_complex(), rp2_complex(), torus_like(1), torus_like(2),
      torus_like(3),    torus_like(4),    torus_like(5)};
  for (const auto& X : corpus) {
    const HomologyProfile px = homology(X);
    const HomologyProfile ps = homology(suspension(X));
    for (int k = 1; k <= X.dim() + 1; ++k) {
      const long long bx = (k < static_cast<int>(px.size())) ? px[k].betti : 0;
      const long long bs = (k + 1 < static_cast<int>(ps.size())) ? ps[k + 1].betti : 0;
      ok = ok && bs == bx;
      const auto tx = (k < static_cast<int>(px.size())) ? px[k].torsion
                                                        : std::vector<long long>{};
      const auto ts = (k + 1 < static_cast<int>(ps.size())) ? ps[k + 1].torsion
                                                            : std::vector<long long>{};
      ok = ok && tx == ts;
    }
  }

  const HomologyProfile s1s2 = homology(product(circle_complex(), sphere_complex()));
  const HomologyProfile px = homology(circle_complex());
  const HomologyProfile py = homology(sphere_complex());
  for (int k = 0; k <= 3; ++k) {
    long long want = 0;
    for (int i = 0; i <= k; ++i) {
      const long long bi = (i < static_cast<int>(px.size())) ? px[i].betti : 0;
      const long long bj = (k - i < static_cast<int>(py.size())) ? py[k - i].betti : 0;
      want += bi * bj;
    }
    ok = ok && s1s2[k].betti == want;
  }
  const double t = timer.seconds();
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "homology: H1(RP^1 family)=Z, H1(RP^2)=Z/2, suspension identity on 8 "
                "complexes, Kunneth ranks on S1xS2, %.1fs (<10s)",
                t);
  report(8, ok && t < 10.0, buf);
}

// --- criterion 9: curvature bounds inside the C0 window ---------------------
void criterion9(const FlowState& run_a) {
  // The monitored curvature bounds are conditional on the C0 hypothesis
  // 1/C0 <= u <= C0, |grad u| <= C0; the check applies on the maximal prefix
  // where it holds with the fixed constant C0 = 2 (the initial body sits well
  // inside).
  const double C0 = 2.0;
  const auto& st = run_a.steps;
  size_t end = st.size();
  for (size_t k = 0; k < st.size(); ++k)
    if (st[k].min_u < 1.0 / C0 || st[k].max_u > C0 || st[k].max_grad > C0) {
      end = k;
      break;
    }
  const double t_c0 = (end == st.size()) ? run_a.t : st[end].t;
  double k10 = 0, r10 = 0, kmax = 0, rmax = 0;
  for (size_t k = 0; k < end; ++k) {
    const double K = st[k].maxK, R = 1.0 / st[k].min_kappa;
    if (st[k].t <= 0.1 * t_c0) {
      k10 = std::max(k10, K);
      r10 = std::max(r10, R);
    }
    kmax = std::max(kmax, K);
    rmax = std::max(rmax, R);
  }
  const bool ok = kmax <= 10 * k10 && rmax <= 10 * r10;
  char buf[280];
  std::snprintf(buf, sizeof(buf),
                "curvature bounds on C0 window [0,%.3f] (C0=2): maxK %.2f <= 10 x %.2f, "
                "1/min_kappa %.2f <= 10 x %.2f",
                t_c0, kmax, k10, rmax, r10);
  report(9, ok, buf);
}

// --- criterion 10: n=2 stationary smoke test --------------------------------
void criterion10() {
  Timer timer;
  auto g = make_grid_ptr(2, 64);
  const SupportField u0 = support_of_ellipsoid(Ellipsoid::ball(3, 1.0), g);
  FlowConfig cfg = flow_config(g, -4.0);
  cfg.track_energy_each_step = false;
  cfg.sample_interval = 0.25;
  const FlowState s = run_flow(u0, cfg, 1.0);
  const double moved = (s.u.values - u0.values).cwiseAbs().maxCoeff();
  const double t = timer.seconds();
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "n=2 smoke test at 64x128: |u(1)-u0|=%.2e (<=1e-6), %.0fs (<120s)",
                moved, t);
  report(10, moved <= 1e-6 && t < 120.0, buf);
}

}  // namespace

int main() {
  std::printf("acceptance suite: super-critical L_p-Minkowski laboratory\n");
  criterion1();
  bool ok2 = false;
  const FlowState run_a = criterion2(&ok2);
  criterion3();
  criterion4();
  criterion5();
  bool ok6 = false;
  const SearchResult search = criterion6(&ok6);
  if (ok6) {
    criterion7(search);
  } else {
    report(7, false, "convergence: skipped, search did not certify");
  }
  criterion8();
  criterion9(run_a);
  criterion10();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
