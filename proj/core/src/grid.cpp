#include <algorithm>
#include <deque>
#include <numeric>

#include "nestfold/error.hpp"
#include "nestfold/walk.hpp"

namespace nestfold {

GridGraph::GridGraph(const FractalSpec& spec, int m, int depth) : window_(spec, m, depth) {
  const int n = window_.vertex_count();
  const int k = spec.k;
  std::vector<std::vector<int>> nb(n);
  for (int c = 0; c < window_.complex_count(); ++c) {
    const auto ids = window_.complex_vertex_ids(c);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a != b) nb[ids[a]].push_back(ids[b]);
      }
    }
  }
  offset_.push_back(0);
  for (auto& l : nb) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    adj_.insert(adj_.end(), l.begin(), l.end());
    offset_.push_back(static_cast<int>(adj_.size()));
  }
  frontier_.assign(n, 0);
  rank_.resize(n);
  for (int v = 0; v < n; ++v) rank_[v] = window_.window_rank(v);
  for (int v : window_.corner_ids()) {
    if (v < 0) continue;
    const int r = nestfold::rank(spec, window_.vertex(v), m);
    if (r > rank_[v]) {
      frontier_[v] = 1;
      rank_[v] = r;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (degree(v) != window_.window_rank(v) * (k - 1)) {
      throw IntegrityError("degree law fails at " + window_.vertex(v).to_string() + ": degree " +
                           std::to_string(degree(v)) + ", rank " + std::to_string(window_.window_rank(v)));
    }
    lcm_ = std::lcm(lcm_, static_cast<long long>(degree(v)));
  }
}

std::span<const int> GridGraph::neighbors(int v) const {
  return {adj_.data() + offset_[v], static_cast<std::size_t>(offset_[v + 1] - offset_[v])};
}

FieldElement GridGraph::min_edge_length2() const {
  FieldElement best;
  double best_d = -1;
  for (int v = 0; v < vertex_count(); ++v) {
    for (int w : neighbors(v)) {
      const double d = std::norm(window_.shadows()[v] - window_.shadows()[w]);
      if (best_d < 0 || d < best_d * (1 - 1e-9)) {
        best_d = d;
        best = (window_.vertex(v) - window_.vertex(w)).norm2();
      }
    }
  }
  return best;
}

std::vector<int> GridGraph::hop_distances(int v) const {
  std::vector<int> dist(vertex_count(), -1);
  std::deque<int> queue{v};
  dist[v] = 0;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (int y : neighbors(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

std::shared_ptr<const GridGraph> grid_around(const FractalSpec& spec, int m, const Point& x, int steps) {
  if (x.grid < m) throw DomainError("start point is not a level-" + std::to_string(m) + " vertex");
  const int limit = Budget::current().max_depth;
  for (int depth = enclosing_level(spec, Point{x.value, m}, m) + 1 - m; depth <= limit; ++depth) {
    auto g = std::make_shared<const GridGraph>(spec, m, depth);
    const int s = g->window().find_vertex(x.value);
    if (s < 0) throw IntegrityError("start vertex missing from its own window");
    const auto dist = g->hop_distances(s);
    bool reachable = false;
    for (int v = 0; v < g->vertex_count() && !reachable; ++v) {
      reachable = g->is_frontier(v) && dist[v] >= 0 && dist[v] <= steps;
    }
    if (!reachable) return g;
  }
  throw ResourceError("no window within the depth budget keeps the walk off the frontier");
}

// ---------------------------------------------------------------------------

Rational KernelTable::probability(int n, int v) const {
  if (mode != KernelMode::exact) throw DomainError("kernel table is in float mode");
  mpz_class den;
  mpz_pow_ui(den.get_mpz_t(), D.get_mpz_t(), static_cast<unsigned long>(n));
  Rational q(num[n][v], den);
  q.canonicalize();
  return q;
}

Rational KernelTable::escape(int n) const {
  if (mode != KernelMode::exact) throw DomainError("kernel table is in float mode");
  mpz_class den;
  mpz_pow_ui(den.get_mpz_t(), D.get_mpz_t(), static_cast<unsigned long>(n));
  Rational q(escape_num[n], den);
  q.canonicalize();
  return q;
}

double KernelTable::probability_d(int n, int v) const {
  return mode == KernelMode::exact ? probability(n, v).get_d() : prob[n][v];
}

double KernelTable::escape_d(int n) const {
  return mode == KernelMode::exact ? escape(n).get_d() : escape_prob[n];
}

KernelMode default_kernel_mode(const GridGraph& g, int n) {
  return g.vertex_count() <= 5000 && n <= 1000 ? KernelMode::exact : KernelMode::floating;
}

KernelTable kernel(const GridGraph& g, int x0, int n, KernelMode mode) {
  if (x0 < 0 || x0 >= g.vertex_count()) throw DomainError("start vertex outside the grid");
  if (n < 0) throw DomainError("negative horizon");
  const int V = g.vertex_count();
  KernelTable t;
  t.start = x0;
  t.horizon = n;
  t.mode = mode;
  t.D = static_cast<long>(g.degree_lcm());
  if (mode == KernelMode::exact) {
    if (static_cast<double>(V) * (n + 1) > 5e7) {
      throw ResourceError("exact kernel table too large; use float mode");
    }
    std::vector<mpz_class> share(V);
    for (int v = 0; v < V; ++v) share[v] = t.D / g.degree(v);
    t.num.assign(1, std::vector<mpz_class>(V, 0));
    t.num[0][x0] = 1;
    t.escape_num.assign(1, 0);
    for (int step = 1; step <= n; ++step) {
      const auto& cur = t.num.back();
      std::vector<mpz_class> next(V, 0);
      for (int v = 0; v < V; ++v) {
        if (cur[v] == 0) continue;
        const mpz_class out = cur[v] * share[v];
        for (int w : g.neighbors(v)) next[w] += out;
      }
      mpz_class esc = t.escape_num.back() * t.D;
      for (int v = 0; v < V; ++v) {
        if (g.is_frontier(v) && next[v] != 0) {
          esc += next[v];
          next[v] = 0;
        }
      }
      t.num.push_back(std::move(next));
      t.escape_num.push_back(std::move(esc));
    }
  } else {
    t.prob.assign(1, std::vector<double>(V, 0.0));
    t.prob[0][x0] = 1.0;
    t.escape_prob.assign(1, 0.0);
    for (int step = 1; step <= n; ++step) {
      const auto& cur = t.prob.back();
      std::vector<double> next(V, 0.0);
      for (int v = 0; v < V; ++v) {
        if (cur[v] == 0.0) continue;
        const double out = cur[v] / g.degree(v);
        for (int w : g.neighbors(v)) next[w] += out;
      }
      double esc = t.escape_prob.back();
      for (int v = 0; v < V; ++v) {
        if (g.is_frontier(v)) {
          esc += next[v];
          next[v] = 0.0;
        }
      }
      t.prob.push_back(std::move(next));
      t.escape_prob.push_back(esc);
    }
  }
  return t;
}

std::vector<char> level_vertices(const GridGraph& grid, int M) {
  const Window& w = grid.window();
  if (M < w.level() || M > w.top_level()) throw DomainError("order outside the grid window");
  const Window coarse(w.spec(), M, w.top_level() - M);
  std::vector<char> mark(grid.vertex_count(), 0);
  for (const auto& v : coarse.vertices()) {
    const int id = w.find_vertex(v);
    if (id < 0) throw IntegrityError("level vertex missing from the grid");
    mark[id] = 1;
  }
  return mark;
}

std::vector<int> grid_labels(const GoodLabeling& labeling, const GridGraph& grid, int M) {
  const Window& w = grid.window();
  if (M < w.level() || M > w.top_level()) throw DomainError("order outside the grid window");
  const int k = w.spec().k;
  const Window coarse(w.spec(), M, w.top_level() - M);
  std::vector<int> labels(grid.vertex_count(), -1);
  for (int c = 0; c < coarse.complex_count(); ++c) {
    const int r = labeling.rotation(coarse.address(c));
    const auto ids = coarse.complex_vertex_ids(c);
    for (int j = 0; j < k; ++j) {
      const int id = w.find_vertex(coarse.vertex(ids[j]));
      const int lab = labeling.seed()[(j + r) % k];
      if (labels[id] >= 0 && labels[id] != lab) {
        throw IntegrityError("labels disagree at " + coarse.vertex(ids[j]).to_string());
      }
      labels[id] = lab;
    }
  }
  return labels;
}

}  // namespace nestfold
