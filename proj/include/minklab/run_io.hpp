#ifndef MINKLAB_RUN_IO_HPP
#define MINKLAB_RUN_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "minklab/flow.hpp"
#include "minklab/search.hpp"

namespace minklab {

// One experiment description; validated against the target module's
// preconditions before any compute. Unknown JSON keys are rejected.
struct RunConfig {
  std::string kind = "flow";  // flow | modified-flow | search | property-scan | homology-suite
  int dim = 1;
  int resolution = 256;
  double p = -3.0;
  std::string f_spec = "const:1";
  std::string init_spec = "ball:1";

  double T = 1.0;
  double dt_init = 0;  // 0 -> defaults from the grid
  double dt_min = 1e-10;
  double dt_max = 0;
  double eps_b = 1e-6;
  double tol_residual = 0;
  double sample_interval = 0.05;
  int track_energy_each_step = -1;  // -1 auto (on for dim 1), 0 off, 1 on

  double bar_e = 10.0;
  double bar_v = 0.05;
  double bar_d = 0.05;

  std::vector<double> horizons{0.5, 1.0, 2.0};
  double tol_search = 1e-2;
  int restarts = 3;
  int max_evals = 2000;

  std::string family = "offcenter:0.2,0.1,0.05,0.025";
  std::string suite = "paper";

  std::vector<double> snapshot_times;
  std::string out_dir = "run";
  uint64_t seed = 1;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
};

Eigen::VectorXd parse_f_spec(const std::string& spec, const SphereGrid& grid);
Ellipsoid parse_init_spec(const std::string& spec, int ambient_dim);

FlowConfig flow_config_from(const RunConfig& rc, const SphereGrid& grid, FlowMode mode);
AdmissibleParams admissible_from(const RunConfig& rc, const SphereGrid& grid,
                                 const Eigen::VectorXd& f);

// Run directory layout: config.json, series.csv, diagnostics.csv, final.json,
// search.json / scan.csv / homology.json depending on the experiment kind.
void write_flow_artifacts(const std::filesystem::path& dir, const RunConfig& rc,
                          const FlowState& state);
void write_search_artifacts(const std::filesystem::path& dir, const RunConfig& rc,
                            const SearchResult& result);
void write_scan_artifacts(const std::filesystem::path& dir, const RunConfig& rc,
                          const std::vector<std::pair<double, double>>& table);

std::string ellipsoid_to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const std::string& text);

// Gnuplot-ready two-column files from a completed run directory; returns the
// files written. Throws std::invalid_argument when artifacts are missing.
std::vector<std::string> emit_plotdata(const std::filesystem::path& run_dir);

std::string format17(double v);

}  // namespace minklab

#endif
