#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nestfold/field.hpp"
#include "nestfold/spec.hpp"

namespace nestfold {

// An M-complex K^<M> + nu_Delta. The word lists digits from the outermost
// level down: word[0] is the digit at level M + m, word.back() at level M + 1.
// Digits are 0-based. Leading zero digits do not change the complex (Psi_1
// fixes the origin), so equality compares normalized words.
struct ComplexAddress {
  int level = 0;
  std::vector<int> word;

  int top_level() const { return level + static_cast<int>(word.size()); }
  ComplexAddress normalized() const;
  // The level-M complex containing this one (M >= level).
  ComplexAddress ancestor(int M) const;
  // The same complex described inside a window whose root is at top.
  std::vector<int> padded_word(int top) const;
  bool contains(const ComplexAddress& finer) const;
  // "M:(d1,d2,...)" with 1-based digits.
  std::string to_string() const;
  static ComplexAddress parse(std::string_view text);

  friend bool operator==(const ComplexAddress& a, const ComplexAddress& b);
};

struct ComplexAddressHash {
  std::size_t operator()(const ComplexAddress& a) const;
};

// A point of the fractal known to be a vertex of the level-`grid` complexes.
struct Point {
  FieldElement value;
  int grid = 0;
};

FieldElement complex_anchor(const FractalSpec& spec, const ComplexAddress& addr);
std::vector<FieldElement> complex_vertices(const FractalSpec& spec, const ComplexAddress& addr);
FieldElement complex_barycenter(const FractalSpec& spec, const ComplexAddress& addr);

// Radius rho with K^<0> inside the closed ball B(b0, rho).
double bounding_radius(const FractalSpec& spec);

// All M-complexes of the one-sided unbounded fractal that contain the point,
// found by digit descent with ball pruning. The point must be a vertex of
// the level-`grid` complexes; a grid above M is treated as M. Empty when the
// point is not such a vertex within the search depth.
std::vector<ComplexAddress> containing_complexes(const FractalSpec& spec, const Point& x, int M);

// Same search restricted to the subtree of `root`.
std::vector<ComplexAddress> containing_complexes_in(const FractalSpec& spec, const Point& x, int M,
                                                    const ComplexAddress& root);

// Number of M-complexes meeting at v. Throws DomainError when v is not a
// level-M vertex.
int rank(const FractalSpec& spec, const FieldElement& v, int M);

// Smallest level T >= floor such that the point lies in K^<T>.
// Throws ResourceError if none is found within the depth budget.
int enclosing_level(const FractalSpec& spec, const Point& x, int floor);

// Finest search: the largest grid level g in [finest, coarsest] such that x is
// a level-g vertex. Throws DomainError if none.
Point locate_point(const FractalSpec& spec, const FieldElement& x, int coarsest, int finest);

// All N^depth M-complexes of K^<M+depth>, with deduplicated vertices.
class Window {
 public:
  Window(const FractalSpec& spec, int level, int depth);

  const FractalSpec& spec() const { return spec_; }
  int level() const { return level_; }
  int depth() const { return depth_; }
  int top_level() const { return level_ + depth_; }

  int complex_count() const { return static_cast<int>(anchors_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }

  ComplexAddress address(int c) const;
  // -1 when the complex is not part of this window.
  int index_of(const ComplexAddress& addr) const;
  const FieldElement& anchor(int c) const { return anchors_[c]; }
  // The k vertex ids of complex c, in V0 order.
  std::span<const int> complex_vertex_ids(int c) const;

  const std::vector<FieldElement>& vertices() const { return vertices_; }
  const FieldElement& vertex(int v) const { return vertices_[v]; }
  const std::vector<std::complex<double>>& shadows() const { return shadows_; }
  // -1 when absent.
  int find_vertex(const FieldElement& x) const;

  std::span<const int> incident(int v) const;
  std::span<const int> adjacent(int c) const;
  int window_rank(int v) const { return static_cast<int>(incident(v).size()); }

  // Vertex ids of L^top V0 (the window's own corners), in V0 order.
  std::vector<int> corner_ids() const;

  // Window complexes containing the point (domain error when none).
  std::vector<int> containing(const Point& x) const;

 private:
  FractalSpec spec_;
  int level_;
  int depth_;
  std::vector<FieldElement> anchors_;
  std::vector<int> cv_;  // complex -> k vertex ids
  std::vector<FieldElement> vertices_;
  std::vector<std::complex<double>> shadows_;
  std::unordered_map<FieldElement, int, FieldElementHash> vertex_id_;
  std::vector<int> inc_offset_, inc_;
  std::vector<int> adj_offset_, adj_;
};

}  // namespace nestfold
