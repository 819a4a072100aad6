#ifndef MINKLAB_HOMOLOGY_HPP
#define MINKLAB_HOMOLOGY_HPP

#include <map>
#include <string>
#include <vector>

namespace minklab {

using Simplex = std::vector<int>;  // sorted vertex ids

// Finite abstract simplicial complex; simplices stored per dimension as sorted
// vertex tuples, orientation induced by vertex order. Face closure and the
// boundary-of-boundary identity are enforced at construction.
class SimplicialComplex {
 public:
  // Builds the closure of the given simplices under faces.
  static SimplicialComplex from_simplices(const std::vector<Simplex>& simplices);

  // Strict variant used for external input: every face must already be listed,
  // otherwise invalid_complex is thrown.
  static SimplicialComplex from_listed(const std::vector<std::vector<Simplex>>& by_dim);

  int dim() const { return static_cast<int>(simplices_.size()) - 1; }
  int count(int k) const {
    return (k < 0 || k > dim()) ? 0 : static_cast<int>(simplices_[k].size());
  }
  const std::vector<Simplex>& simplices(int k) const { return simplices_[k]; }
  int euler_characteristic() const;

  // Boundary matrix d_k: rows index (k-1)-simplices, columns k-simplices.
  std::vector<std::vector<long long>> boundary_matrix(int k) const;

 private:
  std::vector<std::vector<Simplex>> simplices_;  // per dimension, sorted
  void check_boundary_squares_to_zero() const;
};

struct HomologyGroup {
  long long betti = 0;
  std::vector<long long> torsion;  // invariant factors > 1, each dividing the next
};

using HomologyProfile = std::vector<HomologyGroup>;  // index = dimension k

HomologyProfile homology(const SimplicialComplex& X);

// Double cone: two fresh apex vertices coned over every simplex.
SimplicialComplex suspension(const SimplicialComplex& X);

// Staircase triangulation of |X| x |Y|.
SimplicialComplex product(const SimplicialComplex& X, const SimplicialComplex& Y);

// Smith normal form summary of an integer matrix.
struct SmithSummary {
  int rank = 0;
  std::vector<long long> invariant_factors;  // absolute values, ascending divisibility
};
SmithSummary smith_normal_form(const std::vector<std::vector<long long>>& m);

// Builds the n=1 boundary class of centered ellipses with fixed area pi and
// eccentricity bar_e as a circle complex over the major-axis angle mod pi, and
// checks H_1 = Z (the RP^1 instance) together with n*+n-1 = 1.
bool verify_n1_eccentric_family(double bar_e = 10.0, int samples = 64);

// Ready-made complexes for tests and the homology suite.
SimplicialComplex circle_complex(int vertices = 3);
SimplicialComplex sphere_complex();         // octahedron boundary
SimplicialComplex rp2_complex();            // minimal 6-vertex triangulation
SimplicialComplex point_complex();
SimplicialComplex torus_like(int which);    // small seeded random complexes

std::string homology_profile_to_json(const HomologyProfile& profile);
std::string complex_to_json(const SimplicialComplex& X);
SimplicialComplex complex_from_json(const std::string& text);

}  // namespace minklab

#endif
