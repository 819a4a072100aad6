#include "minklab/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace minklab {

namespace {

Eigen::Matrix3d rot_z(double a) {
  Eigen::Matrix3d r;
  r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return r;
}

Eigen::Matrix3d rot_y(double a) {
  Eigen::Matrix3d r;
  r << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return r;
}

}  // namespace

Eigen::VectorXd EllipsoidParams::pack() const {
  Eigen::VectorXd x(packed_size());
  x << center, log_semi_axes, rotation;
  return x;
}

EllipsoidParams EllipsoidParams::unpack(int dim, const Eigen::VectorXd& x) {
  EllipsoidParams p;
  p.center = x.head(dim);
  p.log_semi_axes = x.segment(dim, dim);
  p.rotation = x.tail(dim == 2 ? 1 : 3);
  return p;
}

Ellipsoid EllipsoidParams::decode() const {
  const int d = dim();
  Ellipsoid e;
  e.center = center;
  Eigen::MatrixXd R;
  if (d == 2) {
    const double a = rotation(0);
    R.resize(2, 2);
    R << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);  // rows = axis dirs
  } else {
    const Eigen::Matrix3d m = rot_z(rotation(0)) * rot_y(rotation(1)) * rot_z(rotation(2));
    R = m.transpose();
  }
  Eigen::VectorXd sa = log_semi_axes.array().exp();
  // Sort ascending, carrying the frame rows along.
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sa(a) < sa(b); });
  e.axes.resize(d, d);
  e.semi_axes.resize(d);
  for (int i = 0; i < d; ++i) {
    e.semi_axes(i) = sa(idx[i]);
    e.axes.row(i) = R.row(idx[i]);
  }
  return e;
}

EllipsoidParams EllipsoidParams::encode(const Ellipsoid& e) {
  const int d = e.dim();
  EllipsoidParams p;
  p.center = e.center;
  p.log_semi_axes = e.semi_axes.array().log();
  if (d == 2) {
    p.rotation.resize(1);
    double a = std::atan2(e.axes(0, 1), e.axes(0, 0));
    if (a < 0) a += std::numbers::pi;  // axis direction is defined mod pi
    if (a >= std::numbers::pi) a -= std::numbers::pi;
    p.rotation(0) = a;
  } else {
    Eigen::Matrix3d R = e.axes.transpose();
    if (R.determinant() < 0) R.col(2) = -R.col(2);
    p.rotation.resize(3);
    // ZYZ Euler angles of R = Rz(a) Ry(b) Rz(c).
    const double b = std::acos(std::clamp(R(2, 2), -1.0, 1.0));
    if (std::abs(std::sin(b)) > 1e-12) {
      p.rotation << std::atan2(R(1, 2), R(0, 2)), b, std::atan2(R(2, 1), -R(2, 0));
    } else {
      p.rotation << std::atan2(R(1, 0), R(0, 0)), b, 0.0;
    }
  }
  return p;
}

ObjectiveValue objective(const EllipsoidParams& params, double horizon, GridPtr grid,
                         const FlowConfig& cfg, const AdmissibleParams& aparams,
                         double mvee_tol) {
  ObjectiveValue out;
  Ellipsoid e;
  try {
    e = params.decode();
  } catch (const std::exception&) {
    out.value = 1e3 * 2.0;
    out.penalized = true;
    return out;
  }
  const AdmissibleCheck chk = in_admissible_class(e, aparams);
  if (!chk.ok) {
    out.value = 1e3 * (1.0 + chk.violation);
    out.penalized = true;
    return out;
  }

  FlowState s;
  try {
    s = run_modified(e, grid, cfg, aparams, horizon);
  } catch (const std::exception&) {
    out.value = 1e3 * 2.0;
    out.flow_failed = true;
    return out;
  }
  out.status = s.status;
  if (s.status == FlowStatus::failed) {
    out.value = 1e3 * 2.0;
    out.flow_failed = true;
    return out;
  }

  Ellipsoid me;
  try {
    me = min_ellipsoid_of_body(s.u, mvee_tol);
  } catch (const std::exception&) {
    out.value = 1e3 * 2.0;
    out.flow_failed = true;
    return out;
  }
  // Hausdorff distance to the unit ball via support sup-norm on the grid.
  double worst = 0.0;
  for (int i = 0; i < grid->size(); ++i) {
    const Eigen::VectorXd x = grid->nodes().row(i).transpose();
    worst = std::max(worst, std::abs(me.support(x) - 1.0));
  }
  out.value = worst;
  return out;
}

namespace {

// Standard Nelder-Mead with restarts handled by the caller.
struct NelderMead {
  double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;

  template <class F>
  std::pair<Eigen::VectorXd, double> minimize(F&& f, const Eigen::VectorXd& x0,
                                              const Eigen::VectorXd& scale, int max_evals,
                                              double fgoal, int* evals_used) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    int evals = 0;
    fs[0] = f(xs[0]);
    ++evals;
    for (int i = 0; i < n; ++i) {
      xs[i + 1](i) += scale(i);
      fs[i + 1] = f(xs[i + 1]);
      ++evals;
    }

    auto order = [&] {
      std::vector<int> idx(n + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
      std::vector<Eigen::VectorXd> xs2(n + 1);
      std::vector<double> fs2(n + 1);
      for (int i = 0; i <= n; ++i) {
        xs2[i] = xs[idx[i]];
        fs2[i] = fs[idx[i]];
      }
      xs.swap(xs2);
      fs.swap(fs2);
    };
    order();

    while (evals < max_evals && fs[0] > fgoal) {
      // Convergence on simplex collapse.
      double spread = 0.0;
      for (int i = 1; i <= n; ++i) spread = std::max(spread, (xs[i] - xs[0]).norm());
      if (spread < 1e-12 && std::abs(fs[n] - fs[0]) < 1e-14) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) centroid += xs[i];
      centroid /= n;

      const Eigen::VectorXd xr = centroid + reflect * (centroid - xs[n]);
      const double fr = f(xr);
      ++evals;
      if (fr < fs[0]) {
        const Eigen::VectorXd xe = centroid + expand * (centroid - xs[n]);
        const double fe = f(xe);
        ++evals;
        if (fe < fr) {
          xs[n] = xe;
          fs[n] = fe;
        } else {
          xs[n] = xr;
          fs[n] = fr;
        }
      } else if (fr < fs[n - 1]) {
        xs[n] = xr;
        fs[n] = fr;
      } else {
        const bool outside = fr < fs[n];
        const Eigen::VectorXd xc =
            centroid + contract * ((outside ? xr : xs[n]) - centroid);
        const double fc = f(xc);
        ++evals;
        if (fc < (outside ? fr : fs[n])) {
          xs[n] = xc;
          fs[n] = fc;
        } else {
          for (int i = 1; i <= n; ++i) {
            xs[i] = xs[0] + shrink * (xs[i] - xs[0]);
            fs[i] = f(xs[i]);
            ++evals;
          }
        }
      }
      order();
    }
    if (evals_used) *evals_used = evals;
    return {xs[0], fs[0]};
  }
};

}  // namespace

FindResult find_initial(double horizon, GridPtr grid, const FlowConfig& cfg,
                        const AdmissibleParams& aparams, const EllipsoidParams& seed,
                        const SearchOptions& opts) {
  const int d = grid->ambient_dim();
  auto f = [&](const Eigen::VectorXd& x) {
    return objective(EllipsoidParams::unpack(d, x), horizon, grid, cfg, aparams,
                     opts.mvee_tol)
        .value;
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  FindResult best;
  best.params = seed;
  best.objective = f(seed.pack());
  best.evals = 1;
  // Early goal well below the success gate; keeps trivial seeds cheap.
  const double fgoal = 1e-4 * opts.tol_search;

  Eigen::VectorXd x = seed.pack();
  double scale0 = 0.05;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Eigen::VectorXd start = x;
    if (r > 0) {
      for (int i = 0; i < start.size(); ++i) start(i) += opts.jitter * gauss(rng);
    }
    Eigen::VectorXd scale = Eigen::VectorXd::Constant(x.size(), scale0);
    int used = 0;
    NelderMead nm;
    auto [xb, fb] = nm.minimize(f, start, scale, opts.max_evals, fgoal, &used);
    best.evals += used;
    if (fb < best.objective) {
      best.objective = fb;
      best.params = EllipsoidParams::unpack(d, xb);
      x = xb;
    }
    if (best.objective <= fgoal) break;
    scale0 *= 0.25;  // later restarts refine locally
  }
  best.found = best.objective <= opts.tol_search;
  return best;
}

SearchResult limiting_initial(const std::vector<double>& horizons, GridPtr grid,
                              const FlowConfig& cfg, const AdmissibleParams& aparams,
                              const EllipsoidParams& seed, const SearchOptions& opts) {
  if (horizons.empty()) throw std::invalid_argument("limiting_initial: no horizons");
  for (size_t i = 0; i + 1 < horizons.size(); ++i)
    if (!(horizons[i] < horizons[i + 1]))
      throw std::invalid_argument("limiting_initial: horizons must be increasing");
  if (horizons.back() > cfg.T_max)
    throw std::invalid_argument("limiting_initial: horizon exceeds T_max");

  SearchResult out;
  EllipsoidParams warm = seed;
  bool all_found = true;
  SearchOptions o = opts;
  for (size_t k = 0; k < horizons.size(); ++k) {
    o.seed = opts.seed + k;
    const FindResult r = find_initial(horizons[k], grid, cfg, aparams, warm, o);
    HorizonEntry entry;
    entry.t = horizons[k];
    entry.E = r.params.decode();
    entry.objective = r.objective;
    entry.found = r.found;
    out.horizon_results.push_back(entry);
    all_found = all_found && r.found;
    warm = r.params;
  }
  out.E_star_params = warm;
  out.E_star = warm.decode();

  out.verification = run_modified(out.E_star, grid, cfg, aparams, horizons.back());
  double supJ = -std::numeric_limits<double>::infinity();
  for (const auto& s : out.verification.steps) supJ = std::max(supJ, s.J);
  for (const auto& r : out.verification.J_history) supJ = std::max(supJ, r.J);
  out.sup_J = supJ;
  out.certified = all_found && out.verification.status != FlowStatus::failed &&
                  supJ <= 0.75 * aparams.A0;
  return out;
}

}  // namespace minklab
