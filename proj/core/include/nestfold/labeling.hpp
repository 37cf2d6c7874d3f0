#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nestfold/complexes.hpp"
#include "nestfold/spec.hpp"

namespace nestfold {

// Labels are 0..k-1 and follow the counter-clockwise order of V0. A seed is
// a bijection: seed[j] is the label of the j-th vertex of K^<M>. A complex
// with rotation r carries label seed[(j + r) mod k] on its j-th vertex.
// r = 0 is the identity.

struct Labeling {
  int order = 0;
  std::vector<int> seed;
  std::shared_ptr<const Window> window;
  std::vector<int> labels;     // per window vertex
  std::vector<int> rotations;  // per window complex
  std::vector<int> parent;     // BFS tree over complexes, -1 at the seed complex
};

struct Conflict {
  FieldElement vertex;
  int label_a = -1;
  int label_b = -1;
  // Complexes from the seed complex to the one that forced each label.
  std::vector<ComplexAddress> chain_a;
  std::vector<ComplexAddress> chain_b;
};

struct PropagationResult {
  std::optional<Labeling> labeling;
  std::optional<Conflict> conflict;
  bool ok() const { return labeling.has_value(); }
};

std::vector<int> identity_seed(int k);

// Breadth-first propagation of a seed labelling over the window's complex
// adjacency graph. Throws ValidationError if the graph is disconnected.
PropagationResult propagate_labels(std::shared_ptr<const Window> window, const std::vector<int>& seed);

// Propagation on V_0^<1>.
PropagationResult check_glp(const FractalSpec& spec, const std::vector<int>& seed);
inline PropagationResult check_glp(const FractalSpec& spec) {
  return check_glp(spec, identity_seed(spec.k));
}

// The unique r with labels(vertex j) = seed[(j + r) mod k] for all j.
// Throws IntegrityError if none exists.
int rotation_for_complex(const Labeling& labeling, const ComplexAddress& addr);

// Replays a forcing chain and returns the label it puts on `vertex`, or -1
// if the chain's last complex does not contain it.
int replay_chain(const FractalSpec& spec, const std::vector<int>& seed,
                 const std::vector<ComplexAddress>& chain, const FieldElement& vertex);

// (p1^n1 o p2^n2)(a) with p1 = (a b c), p2 = (a c b). k = 3 only.
int triangle_closed_form(const FractalSpec& spec, long n1, long n2);

struct TwoClassResult {
  bool bipartite = false;
  std::vector<int> color;      // per digit, when bipartite
  std::vector<int> odd_cycle;  // digits, when not
};

// 2-colours the adjacency graph of the N 0-complexes of K^<1>. Even k only.
TwoClassResult two_class_partition(const FractalSpec& spec);

// Rotation structure of a fractal with the good labelling property, valid at
// every order M by scaling the M = 0 labelling.
class GoodLabeling {
 public:
  // Throws DomainError when the spec lacks the property.
  GoodLabeling(const FractalSpec& spec, std::vector<int> seed);
  explicit GoodLabeling(const FractalSpec& spec) : GoodLabeling(spec, identity_seed(spec.k)) {}

  const FractalSpec& spec() const { return spec_; }
  const std::vector<int>& seed() const { return seed_; }
  // Rotation of the i-th 0-complex of K^<1>.
  int base_rotation(int digit) const { return base_[digit]; }
  // Digit permutation induced by the rotation zeta^r about the barycenter.
  int permute_digit(int r, int digit) const;

  // Rotation of any complex, composed digit by digit.
  int rotation(const ComplexAddress& addr) const;
  int label_of(const ComplexAddress& addr, int j) const;

  // Label of a level-M vertex by the point recursion
  // v -> R(v - nu_Delta) one level at a time.
  int label_vertex(const FieldElement& v, int M) const;

 private:
  FractalSpec spec_;
  std::vector<int> seed_;
  std::vector<int> base_;
  std::vector<std::vector<int>> perm_;  // perm_[r][digit]
};

}  // namespace nestfold
