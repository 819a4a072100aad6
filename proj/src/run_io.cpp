#include "minklab/run_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace minklab {

namespace {

using nlohmann::json;

const std::vector<std::string> kKnownKeys = {
    "kind",        "dim",          "resolution",   "p",
    "f",           "init",         "T",            "dt_init",
    "dt_min",      "dt_max",       "eps_b",        "tol_residual",
    "sample_interval", "track_energy_each_step",   "bar_e",
    "bar_v",       "bar_d",        "horizons",     "tol_search",
    "restarts",    "max_evals",    "family",       "suite",
    "snapshot_times", "out_dir",   "seed"};

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string RunConfig::to_json() const {
  json j;
  j["kind"] = kind;
  j["dim"] = dim;
  j["resolution"] = resolution;
  j["p"] = p;
  j["f"] = f_spec;
  j["init"] = init_spec;
  j["T"] = T;
  j["dt_init"] = dt_init;
  j["dt_min"] = dt_min;
  j["dt_max"] = dt_max;
  j["eps_b"] = eps_b;
  j["tol_residual"] = tol_residual;
  j["sample_interval"] = sample_interval;
  j["track_energy_each_step"] = track_energy_each_step;
  j["bar_e"] = bar_e;
  j["bar_v"] = bar_v;
  j["bar_d"] = bar_d;
  j["horizons"] = horizons;
  j["tol_search"] = tol_search;
  j["restarts"] = restarts;
  j["max_evals"] = max_evals;
  j["family"] = family;
  j["suite"] = suite;
  j["snapshot_times"] = snapshot_times;
  j["out_dir"] = out_dir;
  j["seed"] = seed;
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  const json j = json::parse(text);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), it.key()) == kKnownKeys.end())
      throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  }
  RunConfig c;
  if (j.contains("kind")) c.kind = j["kind"].get<std::string>();
  if (j.contains("dim")) c.dim = j["dim"].get<int>();
  if (j.contains("resolution")) c.resolution = j["resolution"].get<int>();
  if (j.contains("p")) c.p = j["p"].get<double>();
  if (j.contains("f")) c.f_spec = j["f"].get<std::string>();
  if (j.contains("init")) c.init_spec = j["init"].get<std::string>();
  if (j.contains("T")) c.T = j["T"].get<double>();
  if (j.contains("dt_init")) c.dt_init = j["dt_init"].get<double>();
  if (j.contains("dt_min")) c.dt_min = j["dt_min"].get<double>();
  if (j.contains("dt_max")) c.dt_max = j["dt_max"].get<double>();
  if (j.contains("eps_b")) c.eps_b = j["eps_b"].get<double>();
  if (j.contains("tol_residual")) c.tol_residual = j["tol_residual"].get<double>();
  if (j.contains("sample_interval")) c.sample_interval = j["sample_interval"].get<double>();
  if (j.contains("track_energy_each_step"))
    c.track_energy_each_step = j["track_energy_each_step"].get<int>();
  if (j.contains("bar_e")) c.bar_e = j["bar_e"].get<double>();
  if (j.contains("bar_v")) c.bar_v = j["bar_v"].get<double>();
  if (j.contains("bar_d")) c.bar_d = j["bar_d"].get<double>();
  if (j.contains("horizons")) c.horizons = j["horizons"].get<std::vector<double>>();
  if (j.contains("tol_search")) c.tol_search = j["tol_search"].get<double>();
  if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
  if (j.contains("max_evals")) c.max_evals = j["max_evals"].get<int>();
  if (j.contains("family")) c.family = j["family"].get<std::string>();
  if (j.contains("suite")) c.suite = j["suite"].get<std::string>();
  if (j.contains("snapshot_times"))
    c.snapshot_times = j["snapshot_times"].get<std::vector<double>>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  return c;
}

Eigen::VectorXd parse_f_spec(const std::string& spec, const SphereGrid& grid) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "const") {
    const double c = arg.empty() ? 1.0 : std::stod(arg);
    if (c <= 0) throw std::invalid_argument("f const: must be positive");
    return Eigen::VectorXd::Constant(grid.size(), c);
  }
  if (name == "cosine-bump") {
    const double a = arg.empty() ? 0.2 : std::stod(arg);
    if (std::abs(a) >= 1)
      throw std::invalid_argument("f cosine-bump: amplitude must be in (-1,1)");
    // 1 + a * (last ambient coordinate); smooth, positive.
    Eigen::VectorXd f(grid.size());
    const int last = grid.ambient_dim() - 1;
    for (int i = 0; i < grid.size(); ++i) f(i) = 1.0 + a * grid.nodes()(i, last);
    return f;
  }
  if (name == "file") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("f file: cannot open " + arg);
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) != grid.size())
      throw std::invalid_argument("f file: sample count does not match the grid");
    Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
    if (f.minCoeff() <= 0) throw std::invalid_argument("f file: samples must be positive");
    return f;
  }
  throw std::invalid_argument("f: unknown spec '" + spec + "'");
}

Ellipsoid parse_init_spec(const std::string& spec, int ambient_dim) {
  // ball:R[@cx,cy[,cz]]  |  ellipsoid:a1,a2[,a3][@cx,..][rot:psi[,..]]
  std::string s = spec;
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("init: missing ':'");
  const std::string name = s.substr(0, colon);
  s = s.substr(colon + 1);

  std::string rot_part;
  const auto rot_pos = s.find("rot:");
  if (rot_pos != std::string::npos) {
    rot_part = s.substr(rot_pos + 4);
    s = s.substr(0, rot_pos);
    if (!s.empty() && s.back() == ':') s.pop_back();
  }
  std::string center_part;
  const auto at = s.find('@');
  if (at != std::string::npos) {
    center_part = s.substr(at + 1);
    s = s.substr(0, at);
  }

  Eigen::VectorXd center = Eigen::VectorXd::Zero(ambient_dim);
  if (!center_part.empty()) {
    const auto c = parse_csv_doubles(center_part);
    if (static_cast<int>(c.size()) != ambient_dim)
      throw std::invalid_argument("init: center dimension mismatch");
    center = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
  }

  if (name == "ball") {
    const double r = std::stod(s);
    return Ellipsoid::ball(ambient_dim, r, center);
  }
  if (name == "ellipsoid") {
    const auto a = parse_csv_doubles(s);
    if (static_cast<int>(a.size()) != ambient_dim)
      throw std::invalid_argument("init: semi-axis count mismatch");
    EllipsoidParams params;
    params.center = center;
    params.log_semi_axes.resize(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) {
      if (a[i] <= 0) throw std::invalid_argument("init: semi-axes must be positive");
      params.log_semi_axes(i) = std::log(a[i]);
    }
    params.rotation = Eigen::VectorXd::Zero(ambient_dim == 2 ? 1 : 3);
    if (!rot_part.empty()) {
      const auto r = parse_csv_doubles(rot_part);
      if (static_cast<int>(r.size()) != params.rotation.size())
        throw std::invalid_argument("init: rotation angle count mismatch");
      params.rotation = Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
    }
    return params.decode();
  }
  throw std::invalid_argument("init: unknown spec '" + spec + "'");
}

FlowConfig flow_config_from(const RunConfig& rc, const SphereGrid& grid, FlowMode mode) {
  FlowConfig cfg;
  cfg.p = rc.p;
  cfg.f = parse_f_spec(rc.f_spec, grid);
  cfg.dt_init = rc.dt_init;
  cfg.dt_min = rc.dt_min;
  cfg.dt_max = rc.dt_max;
  cfg.eps_b = rc.eps_b;
  cfg.tol_residual = rc.tol_residual;
  cfg.T_max = std::max(rc.T, rc.horizons.empty() ? 0.0 : rc.horizons.back());
  cfg.mode = mode;
  cfg.sample_interval = rc.sample_interval;
  cfg.track_energy_each_step =
      rc.track_energy_each_step < 0 ? (rc.dim == 1) : rc.track_energy_each_step > 0;
  cfg.validate(grid);
  return cfg;
}

AdmissibleParams admissible_from(const RunConfig& rc, const SphereGrid& grid,
                                 const Eigen::VectorXd& f) {
  AdmissibleParams a;
  a.bar_e = rc.bar_e;
  a.bar_v = rc.bar_v;
  a.bar_d = rc.bar_d;
  a.A0 = compute_A0(grid, f, rc.p);
  if (!(a.bar_e > 1) || !(a.bar_v > 0 && a.bar_v < 1) || !(a.bar_d > 0))
    throw std::invalid_argument("admissible params: need bar_e>1, 0<bar_v<1, bar_d>0");
  return a;
}

std::string ellipsoid_to_json(const Ellipsoid& e) {
  json j;
  j["center"] = std::vector<double>(e.center.data(), e.center.data() + e.center.size());
  std::vector<double> axes;
  for (int i = 0; i < e.dim(); ++i)
    for (int k = 0; k < e.dim(); ++k) axes.push_back(e.axes(i, k));
  j["axes"] = axes;
  j["semi_axes"] =
      std::vector<double>(e.semi_axes.data(), e.semi_axes.data() + e.semi_axes.size());
  return j.dump();
}

Ellipsoid ellipsoid_from_json(const std::string& text) {
  const json j = json::parse(text);
  Ellipsoid e;
  const auto c = j.at("center").get<std::vector<double>>();
  const auto a = j.at("axes").get<std::vector<double>>();
  const auto s = j.at("semi_axes").get<std::vector<double>>();
  const int d = static_cast<int>(c.size());
  if (static_cast<int>(a.size()) != d * d || static_cast<int>(s.size()) != d)
    throw std::invalid_argument("ellipsoid json: inconsistent sizes");
  e.center = Eigen::Map<const Eigen::VectorXd>(c.data(), d);
  e.semi_axes = Eigen::Map<const Eigen::VectorXd>(s.data(), d);
  e.axes.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) e.axes(i, k) = a[i * d + k];
  return e;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

void write_flow_artifacts(const std::filesystem::path& dir, const RunConfig& rc,
                          const FlowState& state) {
  std::filesystem::create_directories(dir);
  write_file(dir / "config.json", rc.to_json());

  std::string series = EnergyReport::csv_header() + "\n";
  for (const auto& r : state.J_history) series += r.csv_row() + "\n";
  write_file(dir / "series.csv", series);

  std::string diag = "t,maxK,min_kappa,min_u,max_u,max_grad_u\n";
  for (const auto& d : state.diagnostics)
    diag += format17(d.t) + "," + format17(d.maxK) + "," + format17(d.min_kappa) + "," +
            format17(d.min_u) + "," + format17(d.max_u) + "," + format17(d.max_grad) + "\n";
  write_file(dir / "diagnostics.csv", diag);

  json fin;
  fin["status"] = to_string(state.status);
  fin["t"] = state.t;
  fin["failure_reason"] = state.failure_reason;
  fin["u"] = json::parse(support_field_to_json(state.u));
  write_file(dir / "final.json", fin.dump(2));
}

void write_search_artifacts(const std::filesystem::path& dir, const RunConfig& rc,
                            const SearchResult& result) {
  std::filesystem::create_directories(dir);
  write_file(dir / "config.json", rc.to_json());

  json j;
  j["certified"] = result.certified;
  j["sup_J"] = result.sup_J;
  j["E_star"] = json::parse(ellipsoid_to_json(result.E_star));
  j["horizons"] = json::array();
  std::string trace = "t,objective,found\n";
  for (const auto& h : result.horizon_results) {
    json e;
    e["t"] = h.t;
    e["objective"] = h.objective;
    e["found"] = h.found;
    e["ellipsoid"] = json::parse(ellipsoid_to_json(h.E));
    j["horizons"].push_back(e);
    trace += format17(h.t) + "," + format17(h.objective) + "," +
             (h.found ? "1" : "0") + "\n";
  }
  write_file(dir / "search.json", j.dump(2));
  write_file(dir / "trace.csv", trace);
  write_flow_artifacts(dir, rc, result.verification);
}

void write_scan_artifacts(const std::filesystem::path& dir, const RunConfig& rc,
                          const std::vector<std::pair<double, double>>& table) {
  std::filesystem::create_directories(dir);
  write_file(dir / "config.json", rc.to_json());
  std::string csv = "param,J\n";
  for (const auto& [d, J] : table) csv += format17(d) + "," + format17(J) + "\n";
  write_file(dir / "scan.csv", csv);
}

namespace {

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("missing artifact " + path.string());
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    if (first) {
      while (std::getline(ss, tok, ',')) header->push_back(tok);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    rows.push_back(row);
  }
  return rows;
}

void write_two_column(const std::filesystem::path& path,
                      const std::vector<std::vector<double>>& rows, int cx, int cy,
                      const std::string& extra = "") {
  std::string out;
  for (const auto& r : rows) out += format17(r[cx]) + " " + format17(r[cy]) + "\n";
  out += extra;
  write_file(path, out);
}

}  // namespace

std::vector<std::string> emit_plotdata(const std::filesystem::path& run_dir) {
  std::vector<std::string> written;
  const auto series = run_dir / "series.csv";
  const auto scan = run_dir / "scan.csv";

  if (std::filesystem::exists(series)) {
    std::vector<std::string> h;
    const auto rows = read_csv(series, &h);
    write_two_column(run_dir / "plot_J.dat", rows, 0, 1);
    write_two_column(run_dir / "plot_dissipation.dat", rows, 0, 2);
    written = {"plot_J.dat", "plot_dissipation.dat"};
    std::vector<std::string> hd;
    const auto diag = read_csv(run_dir / "diagnostics.csv", &hd);
    write_two_column(run_dir / "plot_maxK.dat", diag, 0, 1);
    written.push_back("plot_maxK.dat");
    return written;
  }
  if (std::filesystem::exists(scan)) {
    std::vector<std::string> h;
    const auto rows = read_csv(scan, &h);
    // log-log table plus a least-squares slope summary line.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(rows.size());
    std::string out;
    for (const auto& r : rows) {
      const double lx = std::log(r[0]), ly = std::log(r[1]);
      out += format17(lx) + " " + format17(ly) + "\n";
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out += "# slope " + format17(slope) + "\n";
    write_file(run_dir / "plot_loglog.dat", out);
    return {"plot_loglog.dat"};
  }
  throw std::invalid_argument("emit_plotdata: no artifacts in " + run_dir.string());
}

}  // namespace minklab
