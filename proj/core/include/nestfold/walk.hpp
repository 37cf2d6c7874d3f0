#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nestfold/complexes.hpp"
#include "nestfold/labeling.hpp"
#include "nestfold/projection.hpp"

namespace nestfold {

// Simple random walk graph on V_m of a window: each m-complex contributes a
// complete graph on its k vertices. Corners of the window whose rank in the
// unbounded fractal exceeds their window rank form the frontier.
class GridGraph {
 public:
  // Throws IntegrityError if deg(v) != rank(v) (k - 1) anywhere.
  GridGraph(const FractalSpec& spec, int m, int depth);

  const Window& window() const { return window_; }
  const FractalSpec& spec() const { return window_.spec(); }
  int level() const { return window_.level(); }
  int vertex_count() const { return window_.vertex_count(); }
  std::span<const int> neighbors(int v) const;
  int degree(int v) const { return offset_[v + 1] - offset_[v]; }
  bool is_frontier(int v) const { return frontier_[v]; }
  // Rank in the unbounded fractal.
  int rank(int v) const { return rank_[v]; }
  // lcm of all degrees.
  long long degree_lcm() const { return lcm_; }
  // Exact minimal squared distance between adjacent vertices.
  FieldElement min_edge_length2() const;
  // Graph distance from v to every vertex (-1 when unreachable).
  std::vector<int> hop_distances(int v) const;

 private:
  Window window_;
  std::vector<int> offset_, adj_;
  std::vector<char> frontier_;
  std::vector<int> rank_;
  long long lcm_ = 1;
};

// A grid window large enough that `steps` steps from x never reach the
// frontier.
std::shared_ptr<const GridGraph> grid_around(const FractalSpec& spec, int m, const Point& x, int steps);

enum class KernelMode { exact, floating };

// Iterated one-step kernel with an absorbing frontier. Exact mode stores
// integer numerators over D^n with D = degree_lcm().
struct KernelTable {
  int start = -1;
  int horizon = 0;
  KernelMode mode = KernelMode::exact;
  mpz_class D;
  std::vector<std::vector<mpz_class>> num;   // [n][v], exact mode
  std::vector<mpz_class> escape_num;         // [n]
  std::vector<std::vector<double>> prob;     // [n][v], float mode
  std::vector<double> escape_prob;           // [n]

  Rational probability(int n, int v) const;
  Rational escape(int n) const;
  double probability_d(int n, int v) const;
  double escape_d(int n) const;
};

KernelTable kernel(const GridGraph& g, int x0, int n, KernelMode mode);

// Picks exact mode for graphs <= 5000 vertices and horizons <= 1000.
KernelMode default_kernel_mode(const GridGraph& g, int n);

// Joint law of (T_M^(j), label at T_M^(j)) for j = 1..J, as exact rationals.
struct HittingLaw {
  int order = 0;
  int level = 0;
  Point start;
  int horizon = 0;
  int k = 0;
  // law[j-1][t][label] = P(T^(j) = t, label); t in 0..horizon.
  std::vector<std::vector<std::vector<Rational>>> law;
  std::vector<Rational> residual;  // per j: 1 - total mass
  Rational escape;                 // frontier absorption; zero by construction

  Rational probability(int j, int t, int label) const { return law[j - 1][t][label]; }
  // P(T^(j) <= horizon, label).
  Rational label_marginal(int j, int label) const;
};

// Requires m <= M. First hits by absorbing V_M \ {current}; the second and later hits by
// renewal over the vertex reached.
HittingLaw hitting_law(const GoodLabeling& labeling, const Point& x, int M, int m, int horizon, int J = 2);

// Expected level-m steps from the origin (a rank-1 vertex of V_(m+1)) until
// V_(m+1) minus the origin is hit. Exact.
Rational estimate_gamma(const FractalSpec& spec, int m);

// pi_M on the vertices of a level-m grid window. Vertices where incident
// M-complexes disagree raise IntegrityError.
class FoldIndex {
 public:
  FoldIndex(const Folding& folding, const GridGraph& grid, int M);
  const Window& target() const { return target_; }   // V_m of K^<M>
  int folded(int v) const { return fold_[v]; }
  int size() const { return target_.vertex_count(); }

 private:
  Window target_;
  std::vector<int> fold_;
};

// The folded level-m walk on V_m of K^<M>.
class QuotientWalk {
 public:
  // Q is read off every non-frontier fiber representative of a guard grid of
  // depth M - m + guard; all rows must agree (IntegrityError otherwise).
  QuotientWalk(std::shared_ptr<const GoodLabeling> labeling, int M, int m, int guard = 1);

  int order() const { return M_; }
  int level() const { return m_; }
  int size() const { return static_cast<int>(q_.size()); }
  const Window& vertices() const { return *target_; }
  const std::vector<std::vector<Rational>>& matrix() const { return q_; }
  // Degree inside the grid of K^<M>.
  int quotient_degree(int v) const { return qdeg_[v]; }
  // Number of representatives whose rows were compared for vertex v.
  int representatives(int v) const { return reps_[v]; }
  // Ranks (level m) of the representatives seen for v.
  const std::vector<int>& representative_ranks(int v) const { return rep_ranks_[v]; }

  std::vector<std::vector<Rational>> power(int n) const;
  // Q^n / (k - 1).
  std::vector<std::vector<Rational>> rank_weighted(int n) const;

 private:
  int M_, m_;
  std::shared_ptr<const Window> target_;
  std::vector<std::vector<Rational>> q_;
  std::vector<int> qdeg_;
  std::vector<int> reps_;
  std::vector<std::vector<int>> rep_ranks_;
};

using Matrix = std::vector<std::vector<Rational>>;
Matrix multiply(const Matrix& a, const Matrix& b);

// Law of pi_M(Y_n) from a raw start vertex, exact, plus the escape mass.
struct FoldedLaw {
  std::vector<Rational> mass;  // over FoldIndex::target() vertices
  Rational escape;
};
FoldedLaw folded_law(const GridGraph& grid, const FoldIndex& fold, int start, int n);

// Folded law of the walk killed at its first visit to V_M \ {start}:
// mass[t][v] = P(pi_M(Y_t) = v, t < T_M^(1)).
std::vector<std::vector<Rational>> prehit_folded_law(const GridGraph& grid, const FoldIndex& fold,
                                                     const std::vector<char>& absorbing, int start,
                                                     int horizon);

// Marks the V_M vertices of a grid.
std::vector<char> level_vertices(const GridGraph& grid, int M);

struct SimulationConfig {
  int M = 1;
  int m = 0;
  std::uint64_t seed = 0;
  long long count = 0;
  int steps = 0;
  int threads = 0;            // 0 = hardware concurrency
  long long archive_paths = 0;  // paths kept in the archive
};

struct PathRecord {
  long long path_id;
  int step;
  int raw_vertex;
  int folded_vertex;
};

struct SimulationResult {
  std::vector<long long> folded_histogram;  // position at the final step
  long long escaped = 0;
  std::vector<PathRecord> archive;
};

// Paths of the level-m walk from `start`, folded through pi_M at every step.
// Path i draws from a stream seeded by (seed, i), so results do not depend on
// the number of workers.
SimulationResult simulate_paths(const GridGraph& grid, const FoldIndex& fold, int start,
                                const SimulationConfig& config);

struct FirstHitSample {
  std::vector<long long> label_counts;
  long long unfinished = 0;
};

// Label at T_M^(1) for `count` paths, truncated at `horizon` steps.
FirstHitSample simulate_first_hits(const GridGraph& grid, const std::vector<int>& vertex_labels,
                                   int start, const SimulationConfig& config, int horizon);

// Level-M labels of grid vertices (-1 for vertices not in V_M).
std::vector<int> grid_labels(const GoodLabeling& labeling, const GridGraph& grid, int M);

}  // namespace nestfold
