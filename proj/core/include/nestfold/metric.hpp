#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nestfold/complexes.hpp"

namespace nestfold {

// Complex-adjacency graph of a window, with the complexes that touch the
// window's open boundary flagged. A corner of K^<top> is open when its rank
// in the unbounded fractal exceeds its rank inside the window.
class ComplexGraph {
 public:
  ComplexGraph(const FractalSpec& spec, int M, int depth);

  const Window& window() const { return window_; }
  bool is_frontier(int c) const { return frontier_[c]; }

  // layer[c] = n when complex c belongs to L_{M,n} of the start set (start
  // complexes are layer 1); 0 when not reached within n_max.
  std::vector<int> layers(std::span<const int> start, int n_max) const;

  // Minimal chain length from a complex in `from` to one in `to`; -1 when the
  // window does not connect them.
  int distance(std::span<const int> from, std::span<const int> to) const;

 private:
  Window window_;
  std::vector<char> frontier_;
};

// d_M(x, y), on a window one level above the smallest complex K^<T> holding
// both points.
int graph_distance(const FractalSpec& spec, const Point& x, const Point& y, int M);

struct ShellTable {
  Point base;
  int order = 0;
  int n_max = 0;
  // shells[n - 1] lists L_{M,n,x}.
  std::vector<std::vector<ComplexAddress>> shells;

  std::vector<int> counts() const;
};

// Shells grow the window until no shell up to n_max touches an open corner.
ShellTable shells(const FractalSpec& spec, const Point& x, int M, int n_max);

struct Bracket {
  Rational lo;
  Rational hi;
  long long pairs = 0;    // initial complex pairs (after offset deduplication)
  long long states = 0;   // refined pair states visited
  int depth = 0;          // deepest refinement used
};

// L/(L-1) times the largest distance of a first-level vertex from hull(V0);
// K^<0> lies within that distance of the hull.
double hull_excess(const FractalSpec& spec);

// Minimal distance between disjoint 0-complexes of K^<level>, bracketed to
// width < tol by refining complex pairs.
Bracket min_gap_C5(const FractalSpec& spec, int level, double tol);

// Diameter of K^<0>, bracketed to width < tol.
Bracket diameter_bracket(const FractalSpec& spec, double tol);

struct MetricConstants {
  int order = 0;
  Bracket c5;
  Bracket diam;       // of K^<0>
  double C6 = 0.0;    // 1 / (diam_hi L^M)
  double C7 = 0.0;    // 2 N^(1-M) C5_lo^(-d_f)
  double C8 = 0.0;    // fitted, 0 when not fitted
  double n_uniform = 0.0;
};

MetricConstants metric_constants(const FractalSpec& spec, int M, const Bracket& c5, const Bracket& diam);

struct ShellFit {
  double C8 = 0.0;
  double max_ratio = 0.0;
  int bases = 0;
  int n_max = 0;
};

// C8 = 1.05 * max #L_{M,n,x} / n^d_f over every level-(M-1) grid point x of
// K^<M+depth> and n <= n_max.
ShellFit fit_C8(const FractalSpec& spec, int M, int depth, int n_max);

struct ComparisonReport {
  MetricConstants constants;
  int pairs = 0;
  int bases = 0;
  int n_max = 0;
  int uniform_pairs = 0;  // pairs with |x - y| <= L^M
  double max_lower_ratio = 0.0;   // max C6 |x-y| / d
  double max_upper_ratio = 0.0;   // max d / max{2, C7 |x-y|^d_f}
  double max_shell_ratio = 0.0;   // max #L / (C8 n^d_f)
  std::vector<std::string> violations;
};

// Samples vertex pairs of V_M^<M+3> and base points of V_(M-1)^<M+3>, then
// checks both comparability inequalities, the n_uniform consequence, and
// the shell bound. Violations are findings, not errors.
ComparisonReport verify_comparison(const FractalSpec& spec, int M, int sample_size, std::uint64_t seed,
                                   const MetricConstants& constants, int n_max = 6);

}  // namespace nestfold
