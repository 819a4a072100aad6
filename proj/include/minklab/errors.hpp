#ifndef MINKLAB_ERRORS_HPP
#define MINKLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace minklab {

// Uniform convexity failed: the matrix field b = hess(u) + u*I stopped being
// positive definite at some grid node.
class convexity_lost : public std::runtime_error {
 public:
  convexity_lost(int node, double min_eig)
      : std::runtime_error("convexity lost at node " + std::to_string(node) +
                           " (min eigenvalue " + std::to_string(min_eig) + ")"),
        node_(node),
        min_eig_(min_eig) {}
  int node() const { return node_; }
  double min_eigenvalue() const { return min_eig_; }

 private:
  int node_;
  double min_eig_;
};

// Point set affinely degenerate (MVEE undefined).
class degenerate_input : public std::runtime_error {
 public:
  explicit degenerate_input(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver hit its cap without reaching its tolerance.
class iteration_limit : public std::runtime_error {
 public:
  explicit iteration_limit(const std::string& what) : std::runtime_error(what) {}
};

// Simplicial complex violates a structural invariant.
class invalid_complex : public std::runtime_error {
 public:
  explicit invalid_complex(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace minklab

#endif
