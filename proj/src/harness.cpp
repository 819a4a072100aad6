#include "minklab/harness.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "minklab/homology.hpp"

namespace minklab {

namespace {

int worker_count() {
  if (const char* env = std::getenv("MINKLAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void write_snapshots(const std::filesystem::path& dir, const RunConfig& rc,
                     const FlowConfig& cfg, const SupportField& u0) {
  if (rc.snapshot_times.empty()) return;
  // Re-run per snapshot horizon; runs share no state so correctness is easy
  // to see, and snapshot lists are short.
  for (double ts : rc.snapshot_times) {
    const FlowState s = run_flow(u0, cfg, ts);
    std::ofstream out(dir / ("snapshot_" + format17(ts) + ".json"));
    out << support_field_to_json(s.u);
  }
}

}  // namespace

std::vector<std::pair<double, SupportField>> build_family(const std::string& family,
                                                          GridPtr grid) {
  const auto colon = family.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("family: expected name:params");
  const std::string name = family.substr(0, colon);
  std::vector<double> params;
  {
    std::stringstream ss(family.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) params.push_back(std::stod(tok));
  }
  if (params.empty()) throw std::invalid_argument("family: no parameters");

  const int d = grid->ambient_dim();
  std::vector<std::pair<double, SupportField>> out;
  for (double v : params) {
    Ellipsoid e;
    if (name == "offcenter") {
      // B_1((1-d) e_1): origin distance d.
      Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
      c(0) = 1.0 - v;
      e = Ellipsoid::ball(d, 1.0, c);
    } else if (name == "balls") {
      e = Ellipsoid::ball(d, v);
    } else if (name == "ellipses") {
      // centered, eccentricity exactly v, unit-ball volume
      EllipsoidParams ep = EllipsoidParams::ball(d);
      ep.log_semi_axes(0) = -0.5 * std::log(v);
      ep.log_semi_axes(d - 1) = 0.5 * std::log(v);
      e = ep.decode();
    } else {
      throw std::invalid_argument("family: unknown name '" + name + "'");
    }
    out.emplace_back(v, support_of_ellipsoid(e, grid, true));
  }
  return out;
}

int run_flow_experiment(const RunConfig& rc) {
  GridPtr grid = make_grid_ptr(rc.dim, rc.resolution);
  const FlowMode mode = rc.kind == "modified-flow" ? FlowMode::modified : FlowMode::raw;
  const FlowConfig cfg = flow_config_from(rc, *grid, mode);
  const Ellipsoid e0 = parse_init_spec(rc.init_spec, grid->ambient_dim());

  FlowState state;
  if (mode == FlowMode::modified) {
    const AdmissibleParams params = admissible_from(rc, *grid, cfg.f);
    state = run_modified(e0, grid, cfg, params, rc.T);
  } else {
    state = run_flow(support_of_ellipsoid(e0, grid, true), cfg, rc.T);
  }

  write_flow_artifacts(rc.out_dir, rc, state);
  write_snapshots(rc.out_dir, rc, cfg, support_of_ellipsoid(e0, grid, true));
  return state.status == FlowStatus::failed ? 3 : 0;
}

int run_search_experiment(const RunConfig& rc) {
  GridPtr grid = make_grid_ptr(rc.dim, rc.resolution);
  const FlowConfig cfg = flow_config_from(rc, *grid, FlowMode::modified);
  const AdmissibleParams params = admissible_from(rc, *grid, cfg.f);

  const Ellipsoid seed_e = parse_init_spec(rc.init_spec, grid->ambient_dim());
  SearchOptions opts;
  opts.tol_search = rc.tol_search;
  opts.restarts = rc.restarts;
  opts.max_evals = rc.max_evals;
  opts.seed = rc.seed;

  const SearchResult result = limiting_initial(rc.horizons, grid, cfg, params,
                                               EllipsoidParams::encode(seed_e), opts);
  write_search_artifacts(rc.out_dir, rc, result);

  for (const auto& h : result.horizon_results)
    if (!h.found) return 4;
  return result.verification.status == FlowStatus::failed ? 3 : 0;
}

int run_scan_experiment(const RunConfig& rc) {
  GridPtr grid = make_grid_ptr(rc.dim, rc.resolution);
  const Eigen::VectorXd f = parse_f_spec(rc.f_spec, *grid);
  if (rc.p >= -rc.dim - 1)
    throw std::invalid_argument("scan: requires the super-critical range p < -n-1");

  const auto family = build_family(rc.family, grid);
  std::vector<std::pair<double, double>> table(family.size());
  const int workers = std::min<int>(worker_count(), static_cast<int>(family.size()));
  if (workers <= 1) {
    table = property_P_scan(family, f, rc.p);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w)
      futs.push_back(std::async(std::launch::async, [&] {
        for (size_t i = next.fetch_add(1); i < family.size(); i = next.fetch_add(1))
          table[i] = {family[i].first, functional_J(family[i].second, f, rc.p)};
      }));
    for (auto& f2 : futs) f2.get();
  }

  write_scan_artifacts(rc.out_dir, rc, table);
  return 0;
}

int run_homology_suite(const RunConfig& rc) {
  nlohmann::json j;
  if (rc.suite != "paper" && rc.suite != "corpus")
    throw std::invalid_argument("homology: unknown suite '" + rc.suite + "'");

  j["rp1_family"] = verify_n1_eccentric_family(rc.bar_e);
  j["rp2"] = nlohmann::json::parse(homology_profile_to_json(homology(rp2_complex())));
  j["circle"] = nlohmann::json::parse(homology_profile_to_json(homology(circle_complex())));
  j["sphere"] = nlohmann::json::parse(homology_profile_to_json(homology(sphere_complex())));

  if (rc.suite == "corpus") {
    nlohmann::json susp = nlohmann::json::array();
    const std::vector<SimplicialComplex> corpus = {
        circle_complex(), sphere_complex(), rp2_complex(), torus_like(1), torus_like(2),
        torus_like(3),    torus_like(4),    torus_like(5)};
    for (const auto& X : corpus) {
      nlohmann::json e;
      e["X"] = nlohmann::json::parse(homology_profile_to_json(homology(X)));
      e["SX"] = nlohmann::json::parse(homology_profile_to_json(homology(suspension(X))));
      susp.push_back(e);
    }
    j["suspensions"] = susp;
    j["s1_x_s2"] = nlohmann::json::parse(
        homology_profile_to_json(homology(product(circle_complex(), sphere_complex()))));
  }

  std::filesystem::create_directories(rc.out_dir);
  std::ofstream out(std::filesystem::path(rc.out_dir) / "homology.json");
  out << j.dump(2) << "\n";
  return 0;
}

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"numerical laboratory for the super-critical L_p-Minkowski problem"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string config_path;
  std::string report_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "load a config.json (other flags ignored)");
    sub->add_option("--dim", rc.dim)->check(CLI::IsMember({1, 2}));
    sub->add_option("--resolution", rc.resolution);
    sub->add_option("--p", rc.p);
    sub->add_option("--f", rc.f_spec);
    sub->add_option("--out", rc.out_dir);
    sub->add_option("--seed", rc.seed);
    sub->add_option("--bar-e", rc.bar_e);
    sub->add_option("--bar-v", rc.bar_v);
    sub->add_option("--bar-d", rc.bar_d);
  };

  CLI::App* flow = app.add_subcommand("flow", "integrate the support-function flow");
  add_common(flow);
  flow->add_option("--init", rc.init_spec);
  flow->add_option("--T", rc.T);
  flow->add_option("--dt", rc.dt_init);
  flow->add_option("--dt-min", rc.dt_min);
  flow->add_option("--dt-max", rc.dt_max);
  flow->add_option("--eps-b", rc.eps_b);
  flow->add_option("--tol-residual", rc.tol_residual);
  flow->add_option("--sample-interval", rc.sample_interval);
  flow->add_option("--snapshot-times", rc.snapshot_times)->delimiter(',');
  bool modified = false;
  flow->add_flag("--modified", modified, "run the modified flow (freeze at A0)");

  CLI::App* search = app.add_subcommand("search", "shooting search for initial data");
  add_common(search);
  search->add_option("--init", rc.init_spec);
  search->add_option("--horizons", rc.horizons)->delimiter(',');
  search->add_option("--tol-search", rc.tol_search);
  search->add_option("--restarts", rc.restarts);
  search->add_option("--max-evals", rc.max_evals);
  search->add_option("--dt-max", rc.dt_max);
  search->add_option("--sample-interval", rc.sample_interval);

  CLI::App* scan = app.add_subcommand("scan", "evaluate J over a body family");
  add_common(scan);
  scan->add_option("--family", rc.family);

  CLI::App* hom = app.add_subcommand("homology", "finite-complex topology suite");
  add_common(hom);
  hom->add_option("--suite", rc.suite)->check(CLI::IsMember({"paper", "corpus"}));

  CLI::App* report = app.add_subcommand("report", "emit gnuplot data from a run directory");
  report->add_option("--dir", report_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      rc = RunConfig::from_json(ss.str());
    }

    if (app.got_subcommand(flow)) {
      rc.kind = (modified || rc.kind == "modified-flow") ? "modified-flow" : "flow";
      return run_flow_experiment(rc);
    }
    if (app.got_subcommand(search)) {
      rc.kind = "search";
      return run_search_experiment(rc);
    }
    if (app.got_subcommand(scan)) {
      rc.kind = "property-scan";
      return run_scan_experiment(rc);
    }
    if (app.got_subcommand(hom)) {
      rc.kind = "homology-suite";
      return run_homology_suite(rc);
    }
    if (app.got_subcommand(report)) {
      emit_plotdata(report_dir);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace minklab
