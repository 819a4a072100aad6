#include "minklab/john.hpp"

#include <cmath>

#include "minklab/errors.hpp"

namespace minklab {

Ellipsoid mvee(const Eigen::MatrixXd& points, double tol, int max_iterations) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (tol <= 0 || tol > 1e-2) throw std::invalid_argument("mvee: tol must be in (0, 1e-2]");
  if (n < d + 2) throw degenerate_input("mvee: need at least d+2 points");

  // Lifted points q_i = (x_i, 1).
  Eigen::MatrixXd Q(n, d + 1);
  Q.leftCols(d) = points;
  Q.col(d).setOnes();

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Q.transpose() * w.asDiagonal() * Q);
    if (!lu.isInvertible())
      throw degenerate_input("mvee: affinely degenerate point set");
  }
  Eigen::MatrixXd inv;

  // Weight-dust left by multiplicative shrinking; away steps zero weights
  // exactly, so anything below this is not support.
  const double w_floor = 1e-14;
  const double target = d + 1;
  // On boundary-dense inputs (every sample on the optimal ellipsoid) the
  // ascent stalls at a float64 gap floor ~1e-5 regardless of tol; stop on
  // stagnation and restore exact containment by a minimal inflation below.
  double best_gap = std::numeric_limits<double>::infinity();
  int last_improvement = 0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (it % 128 == 0) inv = (Q.transpose() * w.asDiagonal() * Q).inverse();

    Eigen::VectorXd kap = ((Q * inv).cwiseProduct(Q)).rowwise().sum();
    int j_add = 0;
    kap.maxCoeff(&j_add);
    const double ka = kap(j_add);

    int j_away = -1;
    double kw = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      if (w(i) > w_floor && kap(i) < kw) {
        kw = kap(i);
        j_away = i;
      }

    const double gap = std::max(ka - target, target - kw);
    if (gap <= target * tol) break;
    if (gap < 0.99 * best_gap) {
      best_gap = gap;
      last_improvement = it;
    } else if (it - last_improvement > 500) {
      break;  // numerical floor reached
    }

    int j;
    double step;
    if (ka - target > target - kw) {
      j = j_add;
      step = (ka - target) / (target * (ka - 1));
    } else {
      j = j_away;
      step = std::max((kw - target) / (target * (kw - 1)), -w(j) / (1 - w(j)));
    }

    w *= (1 - step);
    w(j) += step;

    // Sherman-Morrison update of inv(lambda) for
    // lambda <- (1-step) lambda + step q q^T.
    const Eigen::VectorXd q = Q.row(j).transpose();
    inv /= (1 - step);
    const Eigen::VectorXd iv = inv * q;
    inv -= (step / (1 + step * q.dot(iv))) * (iv * iv.transpose());
  }
  if (it >= max_iterations)
    throw iteration_limit("mvee: iteration cap reached before tolerance");

  const Eigen::VectorXd c = points.transpose() * w;
  Eigen::MatrixXd X = points.transpose() * w.asDiagonal() * points - c * c.transpose();
  Eigen::MatrixXd A = X.inverse() / d;
  // Exact containment: scale so the farthest point sits on the boundary.
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd diff = points.row(i).transpose() - c;
    worst = std::max(worst, diff.dot(A * diff));
  }
  if (worst > 1.0) A /= worst;
  return Ellipsoid::from_quadratic(c, A);
}

Ellipsoid min_ellipsoid_of_body(const SupportField& u, double tol) {
  return mvee(boundary_points(u), tol);
}

double john_containment_margin(const Ellipsoid& e, const SupportField& u) {
  const int n1 = u.grid->ambient_dim();
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.size(); ++i) {
    const Eigen::VectorXd x = u.grid->nodes().row(i).transpose();
    const double shrunk = e.center.dot(x) + (e.support(x) - e.center.dot(x)) / n1;
    worst = std::min(worst, u.values(i) - shrunk);
  }
  return worst;
}

double eccentricity(const Ellipsoid& e) {
  return e.semi_axes(e.dim() - 1) / e.semi_axes(0);
}

}  // namespace minklab
