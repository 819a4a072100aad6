#include "minklab/homology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "minklab/ellipsoid.hpp"
#include "minklab/errors.hpp"

namespace minklab {

using boost::multiprecision::cpp_int;

namespace {

void insert_with_faces(std::vector<std::set<Simplex>>& by_dim, Simplex s) {
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw invalid_complex("simplex with repeated vertex");
  const int k = static_cast<int>(s.size()) - 1;
  if (k >= static_cast<int>(by_dim.size())) by_dim.resize(k + 1);
  if (!by_dim[k].insert(s).second) return;  // already present with its faces
  if (k == 0) return;
  for (size_t i = 0; i < s.size(); ++i) {
    Simplex face;
    face.reserve(s.size() - 1);
    for (size_t j = 0; j < s.size(); ++j)
      if (j != i) face.push_back(s[j]);
    insert_with_faces(by_dim, std::move(face));
  }
}

}  // namespace

SimplicialComplex SimplicialComplex::from_simplices(const std::vector<Simplex>& simplices) {
  if (simplices.empty()) throw invalid_complex("empty complex");
  std::vector<std::set<Simplex>> by_dim;
  for (const auto& s : simplices) insert_with_faces(by_dim, s);
  SimplicialComplex X;
  X.simplices_.reserve(by_dim.size());
  for (auto& level : by_dim)
    X.simplices_.emplace_back(level.begin(), level.end());
  X.check_boundary_squares_to_zero();
  return X;
}

SimplicialComplex SimplicialComplex::from_listed(
    const std::vector<std::vector<Simplex>>& by_dim) {
  std::vector<Simplex> all;
  for (const auto& level : by_dim)
    for (const auto& s : level) all.push_back(s);
  SimplicialComplex X = from_simplices(all);
  // Every face produced by closure must have been listed explicitly.
  for (int k = 0; k <= X.dim(); ++k) {
    std::set<Simplex> listed;
    if (k < static_cast<int>(by_dim.size()))
      for (auto s : by_dim[k]) {
        std::sort(s.begin(), s.end());
        listed.insert(s);
      }
    for (const auto& s : X.simplices_[k])
      if (!listed.count(s)) throw invalid_complex("missing face in listed complex");
  }
  return X;
}

int SimplicialComplex::euler_characteristic() const {
  int chi = 0, sign = 1;
  for (int k = 0; k <= dim(); ++k, sign = -sign) chi += sign * count(k);
  return chi;
}

std::vector<std::vector<long long>> SimplicialComplex::boundary_matrix(int k) const {
  const int rows = count(k - 1), cols = count(k);
  std::vector<std::vector<long long>> m(rows, std::vector<long long>(cols, 0));
  if (k <= 0 || k > dim()) return m;
  std::map<Simplex, int> row_index;
  for (int i = 0; i < rows; ++i) row_index[simplices_[k - 1][i]] = i;
  for (int c = 0; c < cols; ++c) {
    const Simplex& s = simplices_[k][c];
    int sign = 1;
    for (size_t i = 0; i < s.size(); ++i, sign = -sign) {
      Simplex face;
      for (size_t j = 0; j < s.size(); ++j)
        if (j != i) face.push_back(s[j]);
      m[row_index.at(face)][c] = sign;
    }
  }
  return m;
}

void SimplicialComplex::check_boundary_squares_to_zero() const {
  for (int k = 2; k <= dim(); ++k) {
    const auto a = boundary_matrix(k - 1);
    const auto b = boundary_matrix(k);
    const int rows = count(k - 2), mid = count(k - 1), cols = count(k);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        long long acc = 0;
        for (int l = 0; l < mid; ++l) acc += a[i][l] * b[l][j];
        if (acc != 0) throw invalid_complex("boundary of boundary is nonzero");
      }
  }
}

SmithSummary smith_normal_form(const std::vector<std::vector<long long>>& input) {
  const int rows = static_cast<int>(input.size());
  const int cols = rows ? static_cast<int>(input[0].size()) : 0;
  std::vector<std::vector<cpp_int>> m(rows, std::vector<cpp_int>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m[i][j] = input[i][j];

  SmithSummary out;
  std::vector<cpp_int> diag;
  int top = 0;
  while (top < rows && top < cols) {
    // Pick the nonzero entry of smallest magnitude as pivot (bounds growth).
    int pi = -1, pj = -1;
    cpp_int best = 0;
    for (int i = top; i < rows; ++i)
      for (int j = top; j < cols; ++j)
        if (m[i][j] != 0 && (pi < 0 || abs(m[i][j]) < best)) {
          best = abs(m[i][j]);
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    std::swap(m[top], m[pi]);
    for (int i = 0; i < rows; ++i) std::swap(m[i][top], m[i][pj]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = top + 1; i < rows; ++i)
        if (m[i][top] != 0) {
          const cpp_int q = m[i][top] / m[top][top];
          for (int j = top; j < cols; ++j) m[i][j] -= q * m[top][j];
          if (m[i][top] != 0) {  // remainder smaller than pivot: swap up
            std::swap(m[top], m[i]);
            clean = false;
          }
        }
      for (int j = top + 1; j < cols; ++j)
        if (m[top][j] != 0) {
          const cpp_int q = m[top][j] / m[top][top];
          for (int i = top; i < rows; ++i) m[i][j] -= q * m[i][top];
          if (m[top][j] != 0) {
            for (int i = 0; i < rows; ++i) std::swap(m[i][top], m[i][j]);
            clean = false;
          }
        }
    }
    // Divisibility: pivot must divide the remaining submatrix.
    bool redo = false;
    for (int i = top + 1; i < rows && !redo; ++i)
      for (int j = top + 1; j < cols && !redo; ++j)
        if (m[i][j] % m[top][top] != 0) {
          for (int jj = top; jj < cols; ++jj) m[top][jj] += m[i][jj];
          redo = true;
        }
    if (redo) continue;
    diag.push_back(abs(m[top][top]));
    ++top;
  }

  out.rank = static_cast<int>(diag.size());
  for (const auto& d : diag)
    if (d > 1) out.invariant_factors.push_back(d.convert_to<long long>());
  return out;
}

HomologyProfile homology(const SimplicialComplex& X) {
  const int d = X.dim();
  std::vector<SmithSummary> snf(d + 2);
  for (int k = 1; k <= d; ++k) snf[k] = smith_normal_form(X.boundary_matrix(k));

  HomologyProfile profile(d + 1);
  for (int k = 0; k <= d; ++k) {
    const int rank_k = (k >= 1) ? snf[k].rank : 0;
    const int rank_k1 = (k + 1 <= d) ? snf[k + 1].rank : 0;
    profile[k].betti = X.count(k) - rank_k - rank_k1;
    if (k + 1 <= d) profile[k].torsion = snf[k + 1].invariant_factors;
  }
  return profile;
}

SimplicialComplex suspension(const SimplicialComplex& X) {
  int max_v = -1;
  for (const auto& v : X.simplices(0)) max_v = std::max(max_v, v[0]);
  const int a0 = max_v + 1, a1 = max_v + 2;
  std::vector<Simplex> out;
  out.push_back({a0});
  out.push_back({a1});
  for (int k = 0; k <= X.dim(); ++k)
    for (const auto& s : X.simplices(k)) {
      out.push_back(s);
      Simplex c0 = s, c1 = s;
      c0.push_back(a0);
      c1.push_back(a1);
      out.push_back(std::move(c0));
      out.push_back(std::move(c1));
    }
  return SimplicialComplex::from_simplices(out);
}

SimplicialComplex product(const SimplicialComplex& X, const SimplicialComplex& Y) {
  int max_y = -1;
  for (const auto& v : Y.simplices(0)) max_y = std::max(max_y, v[0]);
  const int stride = max_y + 1;
  const auto encode = [stride](int a, int b) { return a * stride + b; };

  std::vector<Simplex> out;
  for (int p = 0; p <= X.dim(); ++p)
    for (const auto& sx : X.simplices(p))
      for (int q = 0; q <= Y.dim(); ++q)
        for (const auto& sy : Y.simplices(q)) {
          // Monotone staircase paths through the (p+1) x (q+1) vertex grid.
          Simplex path{encode(sx[0], sy[0])};
          std::function<void(int, int, Simplex&)> walk = [&](int i, int j, Simplex& acc) {
            if (i == p && j == q) {
              out.push_back(acc);
              return;
            }
            if (i < p) {
              acc.push_back(encode(sx[i + 1], sy[j]));
              walk(i + 1, j, acc);
              acc.pop_back();
            }
            if (j < q) {
              acc.push_back(encode(sx[i], sy[j + 1]));
              walk(i, j + 1, acc);
              acc.pop_back();
            }
          };
          walk(0, 0, path);
        }
  return SimplicialComplex::from_simplices(out);
}

bool verify_n1_eccentric_family(double bar_e, int samples) {
  if (samples < 3) throw invalid_complex("eccentric family: need at least 3 samples");
  // Centered ellipses of area pi with eccentricity bar_e, parametrized by the
  // major-axis angle in [0, pi).
  const double r1 = 1.0 / std::sqrt(bar_e), r2 = std::sqrt(bar_e);
  const auto member = [&](double psi) {
    Ellipsoid e;
    e.center = Eigen::Vector2d::Zero();
    e.semi_axes = Eigen::Vector2d(r1, r2);
    e.axes.resize(2, 2);
    e.axes << -std::sin(psi), std::cos(psi), std::cos(psi), std::sin(psi);
    return e;
  };

  // The angle-pi member must close up onto the angle-0 member (RP^1 glueing).
  if (ellipsoid_hausdorff(member(0.0), member(std::numbers::pi)) > 1e-10) return false;

  // Consecutive members must be close so the cycle is a faithful nerve.
  const double step_gap =
      ellipsoid_hausdorff(member(0.0), member(std::numbers::pi / samples));
  for (int j = 0; j < samples; ++j) {
    const double a = j * std::numbers::pi / samples;
    const double b = (j + 1) * std::numbers::pi / samples;
    if (ellipsoid_hausdorff(member(a), member(b)) > 2.0 * step_gap + 1e-12) return false;
  }

  std::vector<Simplex> edges;
  for (int j = 0; j < samples; ++j) edges.push_back({j, (j + 1) % samples});
  const HomologyProfile prof = homology(SimplicialComplex::from_simplices(edges));

  const int n = 1, n_star = n * (n + 1) / 2;
  const int k = n_star + n - 1;
  if (k != 1) return false;
  return prof.size() >= 2 && prof[0].betti == 1 && prof[1].betti == 1 &&
         prof[1].torsion.empty();
}

SimplicialComplex circle_complex(int vertices) {
  if (vertices < 3) throw invalid_complex("circle: need at least 3 vertices");
  std::vector<Simplex> edges;
  for (int j = 0; j < vertices; ++j) edges.push_back({j, (j + 1) % vertices});
  return SimplicialComplex::from_simplices(edges);
}

SimplicialComplex sphere_complex() {
  // Octahedron boundary: vertices 0..5 with 0/1, 2/3, 4/5 antipodal.
  std::vector<Simplex> tris;
  for (int a : {0, 1})
    for (int b : {2, 3})
      for (int c : {4, 5}) tris.push_back({a, b, c});
  return SimplicialComplex::from_simplices(tris);
}

SimplicialComplex rp2_complex() {
  // Minimal 6-vertex triangulation of the projective plane (antipodal
  // icosahedron quotient): 6 vertices, 15 edges, 10 triangles, chi = 1.
  return SimplicialComplex::from_simplices({{1, 2, 3},
                                            {1, 3, 4},
                                            {1, 2, 6},
                                            {1, 4, 5},
                                            {1, 5, 6},
                                            {2, 3, 5},
                                            {2, 4, 5},
                                            {2, 4, 6},
                                            {3, 4, 6},
                                            {3, 5, 6}});
}

SimplicialComplex point_complex() { return SimplicialComplex::from_simplices({{0}}); }

SimplicialComplex torus_like(int which) {
  // Small deterministic pseudo-random 2-complexes for property tests.
  std::mt19937_64 rng(0x9e3779b9u + which);
  std::uniform_int_distribution<int> vtx(0, 7);
  std::vector<Simplex> top;
  const int count = 6 + which % 5;
  while (static_cast<int>(top.size()) < count) {
    int a = vtx(rng), b = vtx(rng), c = vtx(rng);
    if (a == b || b == c || a == c) continue;
    Simplex s{a, b, c};
    std::sort(s.begin(), s.end());
    top.push_back(s);
  }
  return SimplicialComplex::from_simplices(top);
}

std::string homology_profile_to_json(const HomologyProfile& profile) {
  nlohmann::json j;
  for (size_t k = 0; k < profile.size(); ++k) {
    nlohmann::json g;
    g["betti"] = profile[k].betti;
    g["torsion"] = profile[k].torsion;
    j[std::to_string(k)] = g;
  }
  return j.dump();
}

std::string complex_to_json(const SimplicialComplex& X) {
  nlohmann::json j;
  for (int k = 0; k <= X.dim(); ++k) j[std::to_string(k)] = X.simplices(k);
  return j.dump();
}

SimplicialComplex complex_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<std::vector<Simplex>> by_dim;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const int k = std::stoi(it.key());
    if (k >= static_cast<int>(by_dim.size())) by_dim.resize(k + 1);
    by_dim[k] = it.value().get<std::vector<Simplex>>();
  }
  return SimplicialComplex::from_listed(by_dim);
}

}  // namespace minklab
