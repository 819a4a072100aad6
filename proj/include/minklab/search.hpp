#ifndef MINKLAB_SEARCH_HPP
#define MINKLAB_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "minklab/flow.hpp"

namespace minklab {

// Chart on the admissible ellipsoid class: center, log semi-axes, and a
// rotation (one angle in the plane, ZYZ Euler angles in space).
struct EllipsoidParams {
  Eigen::VectorXd center;
  Eigen::VectorXd log_semi_axes;
  Eigen::VectorXd rotation;  // size 1 (d=2) or 3 (d=3)

  int dim() const { return static_cast<int>(center.size()); }
  int packed_size() const { return 2 * dim() + static_cast<int>(rotation.size()); }

  Eigen::VectorXd pack() const;
  static EllipsoidParams unpack(int dim, const Eigen::VectorXd& x);

  Ellipsoid decode() const;
  static EllipsoidParams encode(const Ellipsoid& e);

  static EllipsoidParams ball(int dim) {
    EllipsoidParams p;
    p.center = Eigen::VectorXd::Zero(dim);
    p.log_semi_axes = Eigen::VectorXd::Zero(dim);
    p.rotation = Eigen::VectorXd::Zero(dim == 2 ? 1 : 3);
    return p;
  }
};

struct SearchOptions {
  double tol_search = 1e-2;   // Hausdorff success gate
  int max_evals = 2000;       // per restart
  int restarts = 3;           // jittered restarts
  double jitter = 0.02;
  uint64_t seed = 1;
  double mvee_tol = 1e-7;
};

struct ObjectiveValue {
  double value = 0;
  bool penalized = false;   // outside the admissible class
  bool flow_failed = false;
  FlowStatus status = FlowStatus::running;
};

// Hausdorff distance between the minimum ellipsoid of the evolved body at the
// horizon and the unit ball; penalty 1e3*(1+violation) outside the class.
ObjectiveValue objective(const EllipsoidParams& params, double horizon, GridPtr grid,
                         const FlowConfig& cfg, const AdmissibleParams& aparams,
                         double mvee_tol = 1e-7);

struct FindResult {
  EllipsoidParams params;
  double objective = 0;
  bool found = false;  // objective <= tol_search
  int evals = 0;
};

// Nelder-Mead minimization of the shooting objective at one horizon.
FindResult find_initial(double horizon, GridPtr grid, const FlowConfig& cfg,
                        const AdmissibleParams& aparams, const EllipsoidParams& seed,
                        const SearchOptions& opts = {});

struct HorizonEntry {
  double t = 0;
  Ellipsoid E;
  double objective = 0;
  bool found = false;
};

struct SearchResult {
  Ellipsoid E_star;
  EllipsoidParams E_star_params;
  std::vector<HorizonEntry> horizon_results;
  bool certified = false;  // sup J <= 0.75 A0 on the verification run, no failure
  double sup_J = 0;
  FlowState verification;
};

// Warm-started searches over increasing horizons; the last minimizer is E_star
// and a verification run over [0, t_m] checks the energy cap.
SearchResult limiting_initial(const std::vector<double>& horizons, GridPtr grid,
                              const FlowConfig& cfg, const AdmissibleParams& aparams,
                              const EllipsoidParams& seed, const SearchOptions& opts = {});

}  // namespace minklab

#endif
