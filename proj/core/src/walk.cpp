#include <map>

#include "nestfold/error.hpp"
#include "nestfold/metric.hpp"
#include "nestfold/walk.hpp"

namespace nestfold {

namespace {

// Depth of a level-M window in which the complexes within `layers` of x
// stay clear of open corners.
int region_depth(const FractalSpec& spec, const Point& x, int M, int layers) {
  const int limit = Budget::current().max_depth;
  for (int depth = enclosing_level(spec, Point{x.value, std::min(x.grid, M)}, M) + 1 - M; depth <= limit;
       ++depth) {
    const ComplexGraph g(spec, M, depth);
    const auto layer = g.layers(g.window().containing(x), layers);
    bool open = false;
    for (int c = 0; c < g.window().complex_count() && !open; ++c) open = layer[c] > 0 && g.is_frontier(c);
    if (!open) return depth;
  }
  throw ResourceError("hitting-law region exceeds the depth budget");
}

struct FirstHits {
  std::map<int, std::vector<mpz_class>> by_vertex;  // numerators over D^t
  Rational escape;
};

FirstHits first_hits(const GridGraph& g, const std::vector<char>& level, int s, int horizon) {
  const int V = g.vertex_count();
  const mpz_class D = static_cast<long>(g.degree_lcm());
  std::vector<mpz_class> share(V);
  for (int v = 0; v < V; ++v) share[v] = D / g.degree(v);
  FirstHits out;
  std::vector<mpz_class> cur(V, 0);
  cur[s] = 1;
  mpz_class den = 1;
  for (int t = 1; t <= horizon; ++t) {
    den *= D;
    std::vector<mpz_class> next(V, 0);
    bool alive = false;
    for (int v = 0; v < V; ++v) {
      if (cur[v] == 0) continue;
      const mpz_class o = cur[v] * share[v];
      for (int w : g.neighbors(v)) next[w] += o;
    }
    for (int v = 0; v < V; ++v) {
      if (next[v] == 0) continue;
      if (level[v] && v != s) {
        auto& slot = out.by_vertex[v];
        if (slot.empty()) slot.assign(horizon + 1, 0);
        slot[t] = next[v];
        next[v] = 0;
      } else if (g.is_frontier(v)) {
        out.escape += Rational(next[v], den);
        next[v] = 0;
      } else {
        alive = true;
      }
    }
    cur = std::move(next);
    if (!alive) break;
  }
  out.escape.canonicalize();
  return out;
}

}  // namespace

Rational HittingLaw::label_marginal(int j, int label) const {
  Rational total = 0;
  for (const auto& row : law[j - 1]) total += row[label];
  return total;
}

HittingLaw hitting_law(const GoodLabeling& labeling, const Point& x, int M, int m, int horizon, int J) {
  const FractalSpec& spec = labeling.spec();
  if (m > M) throw DomainError("hitting law needs m <= M");
  if (x.grid < m) throw DomainError("start point is not a level-m vertex");
  if (J < 1 || horizon < 0) throw DomainError("bad hitting-law parameters");
  const int depth = region_depth(spec, x, M, J);
  const GridGraph g(spec, m, M + depth - m);
  const int s = g.window().find_vertex(x.value);
  if (s < 0) throw IntegrityError("start vertex missing from the grid");
  const auto level = level_vertices(g, M);
  const auto labels = grid_labels(labeling, g, M);
  const int k = spec.k;

  HittingLaw out;
  out.order = M;
  out.level = m;
  out.start = x;
  out.horizon = horizon;
  out.k = k;
  out.escape = 0;

  std::map<int, FirstHits> cache;
  auto hits_from = [&](int v) -> const FirstHits& {
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, first_hits(g, level, v, horizon)).first;
    return it->second;
  };

  // current[z][t]: numerator over D^t of {j-th hit at time t, at vertex z}.
  std::map<int, std::vector<mpz_class>> current = hits_from(s).by_vertex;
  out.escape += hits_from(s).escape;
  const mpz_class D = static_cast<long>(g.degree_lcm());
  for (int j = 1; j <= J; ++j) {
    if (j > 1) {
      std::map<int, std::vector<mpz_class>> next;
      for (const auto& [z, series] : current) {
        const FirstHits& f = hits_from(z);
        Rational first_mass = 0;
        mpz_class den = 1;
        for (int t = 0; t <= horizon; ++t) {
          if (t) den *= D;
          if (series[t] != 0) first_mass += Rational(series[t], den);
        }
        first_mass.canonicalize();
        out.escape += first_mass * f.escape;
        for (const auto& [z2, tail] : f.by_vertex) {
          auto& slot = next[z2];
          if (slot.empty()) slot.assign(horizon + 1, 0);
          for (int t = 1; t <= horizon; ++t) {
            if (series[t] == 0) continue;
            for (int u = 1; t + u <= horizon; ++u) {
              if (tail[u] != 0) slot[t + u] += series[t] * tail[u];
            }
          }
        }
      }
      current = std::move(next);
    }
    std::vector<std::vector<Rational>> law(horizon + 1, std::vector<Rational>(k, 0));
    Rational total = 0;
    mpz_class den = 1;
    for (int t = 0; t <= horizon; ++t) {
      if (t) den *= D;
      for (const auto& [z, series] : current) {
        if (series[t] == 0) continue;
        if (labels[z] < 0) throw IntegrityError("hit vertex without a label");
        law[t][labels[z]] += Rational(series[t], den);
      }
      for (auto& q : law[t]) {
        q.canonicalize();
        total += q;
      }
    }
    out.law.push_back(std::move(law));
    out.residual.push_back(1 - total);
  }
  out.escape.canonicalize();
  return out;
}

Rational estimate_gamma(const FractalSpec& spec, int m) {
  const GridGraph g(spec, m, 1);
  const auto level = level_vertices(g, m + 1);
  const int origin = g.window().find_vertex(spec.zero());
  std::vector<int> idx(g.vertex_count(), -1);
  std::vector<int> transient;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!level[v] || v == origin) {
      idx[v] = static_cast<int>(transient.size());
      transient.push_back(v);
    }
  }
  const int n = static_cast<int>(transient.size());
  // (I - P_TT) h = 1
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, 0));
  for (int i = 0; i < n; ++i) {
    const int v = transient[i];
    a[i][i] = 1;
    a[i][n] = 1;
    const Rational p(1, g.degree(v));
    for (int w : g.neighbors(v)) {
      if (idx[w] >= 0) a[i][idx[w]] -= p;
    }
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) throw IntegrityError("singular absorbing-chain system");
    std::swap(a[c], a[piv]);
    const Rational inv = 1 / a[c][c];
    for (int j = c; j <= n; ++j) a[c][j] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return a[idx[origin]][n];
}

}  // namespace nestfold
