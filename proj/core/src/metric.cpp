#include "nestfold/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <unordered_set>

#include "nestfold/error.hpp"

namespace nestfold {

using cplx = std::complex<double>;

ComplexGraph::ComplexGraph(const FractalSpec& spec, int M, int depth)
    : window_(spec, M, depth), frontier_(window_.complex_count(), 0) {
  for (int v : window_.corner_ids()) {
    if (v < 0) continue;
    if (rank(spec, window_.vertex(v), M) > window_.window_rank(v)) {
      for (int c : window_.incident(v)) frontier_[c] = 1;
    }
  }
}

std::vector<int> ComplexGraph::layers(std::span<const int> start, int n_max) const {
  std::vector<int> layer(window_.complex_count(), 0);
  std::deque<int> queue;
  for (int c : start) {
    if (layer[c] == 0) {
      layer[c] = 1;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    if (layer[c] >= n_max) continue;
    for (int d : window_.adjacent(c)) {
      if (layer[d] == 0) {
        layer[d] = layer[c] + 1;
        queue.push_back(d);
      }
    }
  }
  return layer;
}

int ComplexGraph::distance(std::span<const int> from, std::span<const int> to) const {
  std::vector<char> target(window_.complex_count(), 0);
  for (int c : to) target[c] = 1;
  std::vector<int> layer(window_.complex_count(), 0);
  std::deque<int> queue;
  for (int c : from) {
    if (target[c]) return 1;
    layer[c] = 1;
    queue.push_back(c);
  }
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    for (int d : window_.adjacent(c)) {
      if (layer[d]) continue;
      layer[d] = layer[c] + 1;
      if (target[d]) return layer[d];
      queue.push_back(d);
    }
  }
  return -1;
}

int graph_distance(const FractalSpec& spec, const Point& x, const Point& y, int M) {
  if (x.value == y.value) return 0;
  const int top = std::max(enclosing_level(spec, x, M), enclosing_level(spec, y, M));
  const ComplexGraph g(spec, M, top + 1 - M);
  const auto from = g.window().containing(x);
  const auto to = g.window().containing(y);
  const int d = g.distance(from, to);
  if (d < 0) throw ResourceError("window too small to connect the two points");
  return d;
}

std::vector<int> ShellTable::counts() const {
  std::vector<int> out;
  for (const auto& s : shells) out.push_back(static_cast<int>(s.size()));
  return out;
}

ShellTable shells(const FractalSpec& spec, const Point& x, int M, int n_max) {
  if (n_max < 1) throw DomainError("n_max must be positive");
  const int limit = Budget::current().max_depth;
  for (int depth = enclosing_level(spec, x, M) + 1 - M; depth <= limit; ++depth) {
    const ComplexGraph g(spec, M, depth);
    const auto start = g.window().containing(x);
    const auto layer = g.layers(start, n_max);
    bool open = false;
    for (int c = 0; c < g.window().complex_count() && !open; ++c) {
      open = layer[c] > 0 && layer[c] < n_max && g.is_frontier(c);
    }
    if (open) continue;
    ShellTable t{x, M, n_max, std::vector<std::vector<ComplexAddress>>(n_max)};
    for (int c = 0; c < g.window().complex_count(); ++c) {
      if (layer[c] > 0) t.shells[layer[c] - 1].push_back(g.window().address(c).normalized());
    }
    return t;
  }
  throw ResourceError("shells need a window deeper than the depth budget");
}

// ---------------------------------------------------------------------------

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Convex hull, counter-clockwise, collinear points dropped.
std::vector<cplx> convex_hull(std::vector<cplx> pts) {
  std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  if (pts.size() < 3) return pts;
  const double eps = 1e-12;
  std::vector<cplx> h(2 * pts.size());
  std::size_t n = 0;
  for (const auto& p : pts) {
    while (n >= 2 && cross(h[n - 1] - h[n - 2], p - h[n - 2]) <= eps) --n;
    h[n++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = n + 1; i-- > 0;) {
    while (n >= lo && cross(h[n - 1] - h[n - 2], pts[i] - h[n - 2]) <= eps) --n;
    h[n++] = pts[i];
  }
  h.resize(n - 1);
  return h;
}

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// Distance from p to a convex counter-clockwise polygon (0 inside).
double polygon_distance(cplx p, const std::vector<cplx>& poly) {
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const cplx a = poly[i];
    const cplx b = poly[(i + 1) % poly.size()];
    if (cross(b - a, p - a) < 0) inside = false;
    best = std::min(best, segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

Rational outward(double x, bool up) {
  const double pad = 1e-12 * (std::abs(x) + 1e-300);
  return Rational(up ? x + pad : std::max(0.0, x - pad));
}

FieldElement canonical_offset(FieldElement w) {
  FieldElement n = -w;
  return n < w ? n : w;
}

class PairSearch {
 public:
  explicit PairSearch(const FractalSpec& spec) : s_(spec), e_(hull_excess(spec)) {
    for (const auto& v : spec.v0) v0_.push_back(v.to_complex());
    std::vector<cplx> diffs;
    for (auto a : v0_) {
      for (auto b : v0_) diffs.push_back(a - b);
    }
    diff_hull_ = convex_hull(diffs);
  }

  // Normalized pair (K0, K0 + w) scaled by s.
  double min_upper(cplx w, double s) const {
    double best = std::numeric_limits<double>::infinity();
    for (auto a : v0_) {
      for (auto b : v0_) best = std::min(best, std::abs(a - b - w));
    }
    return s * best;
  }
  double min_lower(cplx w, double s) const {
    return s * std::max(0.0, polygon_distance(w, diff_hull_) - 2 * e_);
  }
  double max_lower(cplx w, double s) const {
    double best = 0.0;
    for (auto a : v0_) {
      for (auto b : v0_) best = std::max(best, std::abs(a - b - w));
    }
    return s * best;
  }
  double max_upper(cplx w, double s) const {
    double best = 0.0;
    for (auto d : diff_hull_) best = std::max(best, std::abs(d - w));
    return s * (best + 2 * e_);
  }

  std::vector<FieldElement> children(const FieldElement& w, bool canonical) const {
    std::vector<FieldElement> out;
    const Rational L(s_.L);
    for (int i = 0; i < s_.N; ++i) {
      for (int j = 0; j < s_.N; ++j) {
        FieldElement c = (w + s_.nu[j] - s_.nu[i]) * L;
        out.push_back(canonical ? canonical_offset(std::move(c)) : std::move(c));
      }
    }
    return out;
  }

 private:
  const FractalSpec& s_;
  double e_;
  std::vector<cplx> v0_;
  std::vector<cplx> diff_hull_;
};

}  // namespace

double hull_excess(const FractalSpec& spec) {
  std::vector<cplx> v;
  for (const auto& p : spec.v0) v.push_back(p.to_complex());
  const auto hull = convex_hull(v);
  double worst = 0.0;
  for (int i = 0; i < spec.N; ++i) {
    for (const auto& p : spec.v0) {
      worst = std::max(worst, polygon_distance(spec.psi(i, p).to_complex(), hull));
    }
  }
  // Numerical noise on hull edges is not excess.
  if (worst < 1e-12) return 0.0;
  return worst * spec.L / (spec.L - 1.0);
}

Bracket min_gap_C5(const FractalSpec& spec, int level, double tol) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (level < 1) throw DomainError("C5 needs level >= 1");
  const PairSearch search(spec);
  const Window w(spec, 0, level);

  std::unordered_set<FieldElement, FieldElementHash> touching;
  for (const auto& a : spec.v0) {
    for (const auto& b : spec.v0) touching.insert(a - b);
  }
  std::unordered_set<FieldElement, FieldElementHash> seen;
  std::vector<FieldElement> states;
  for (int c = 0; c < w.complex_count(); ++c) {
    for (int d = c + 1; d < w.complex_count(); ++d) {
      FieldElement off = canonical_offset(w.anchor(d) - w.anchor(c));
      if (touching.count(off) || touching.count(-off)) continue;
      if (seen.insert(off).second) states.push_back(std::move(off));
    }
  }
  if (states.empty()) throw DomainError("no disjoint complex pairs at this level");

  Bracket out;
  out.pairs = static_cast<long long>(states.size());
  double hi = std::numeric_limits<double>::infinity();
  double lo_dropped = std::numeric_limits<double>::infinity();
  double s = 1.0;
  const int limit = Budget::current().max_depth;
  for (int depth = 0; !states.empty(); ++depth) {
    if (depth > limit) throw ResourceError("C5 refinement exceeded the depth budget");
    out.depth = depth;
    out.states += static_cast<long long>(states.size());
    std::vector<cplx> ws;
    std::vector<double> lbs;
    for (const auto& x : states) {
      ws.push_back(x.to_complex());
      hi = std::min(hi, search.min_upper(ws.back(), s));
      lbs.push_back(search.min_lower(ws.back(), s));
    }
    std::vector<FieldElement> next;
    std::unordered_set<FieldElement, FieldElementHash> next_seen;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (lbs[i] >= hi - tol / 2) {
        lo_dropped = std::min(lo_dropped, lbs[i]);
        continue;
      }
      for (auto& c : search.children(states[i], true)) {
        if (next_seen.insert(c).second) next.push_back(std::move(c));
      }
      if (next.size() > static_cast<std::size_t>(Budget::current().max_complexes)) {
        throw ResourceError("C5 refinement exceeded the state budget");
      }
    }
    states = std::move(next);
    s /= spec.L;
  }
  out.lo = outward(std::min(lo_dropped, hi), false);
  out.hi = outward(hi, true);
  return out;
}

Bracket diameter_bracket(const FractalSpec& spec, double tol) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  const PairSearch search(spec);
  std::vector<FieldElement> states{spec.zero()};
  Bracket out;
  out.pairs = 1;
  double lo = 0.0;
  double hi_dropped = 0.0;
  double s = 1.0;
  const int limit = Budget::current().max_depth;
  for (int depth = 0; !states.empty(); ++depth) {
    if (depth > limit) throw ResourceError("diameter refinement exceeded the depth budget");
    out.depth = depth;
    out.states += static_cast<long long>(states.size());
    std::vector<double> ubs;
    for (const auto& x : states) {
      const cplx w = x.to_complex();
      lo = std::max(lo, search.max_lower(w, s));
      ubs.push_back(search.max_upper(w, s));
    }
    std::vector<FieldElement> next;
    std::unordered_set<FieldElement, FieldElementHash> next_seen;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (ubs[i] <= lo + tol / 2) {
        hi_dropped = std::max(hi_dropped, ubs[i]);
        continue;
      }
      for (auto& c : search.children(states[i], true)) {
        if (next_seen.insert(c).second) next.push_back(std::move(c));
      }
    }
    states = std::move(next);
    s /= spec.L;
  }
  out.lo = outward(lo, false);
  out.hi = outward(std::max(lo, hi_dropped), true);
  return out;
}

MetricConstants metric_constants(const FractalSpec& spec, int M, const Bracket& c5, const Bracket& diam) {
  MetricConstants c;
  c.order = M;
  c.c5 = c5;
  c.diam = diam;
  const double lM = std::pow(static_cast<double>(spec.L), M);
  c.C6 = 1.0 / (diam.hi.get_d() * lM);
  const double c5lo = c5.lo.get_d();
  const double df = spec.dimension;
  c.C7 = 2.0 * std::pow(static_cast<double>(spec.N), 1 - M) * std::pow(c5lo, -df);
  c.n_uniform = std::max(2.0, 2.0 * spec.N * std::pow(c5lo, -df));
  return c;
}

namespace {

// Shell counts for every vertex of a level-(M-1) window of K^<M+depth>.
template <typename Visit>
void for_each_shell_profile(const FractalSpec& spec, int M, int depth, int n_max,
                            const std::vector<int>& base_ids, Visit visit) {
  const Window fine(spec, M - 1, depth + 1);
  for (int extra = 2;; ++extra) {
    if (depth + extra > Budget::current().max_depth) {
      throw ResourceError("shell window exceeds the depth budget");
    }
    const ComplexGraph g(spec, M, depth + extra);
    bool open = false;
    std::vector<std::vector<int>> profiles;
    for (int u : base_ids) {
      std::vector<int> start;
      const int v = g.window().find_vertex(fine.vertex(u));
      if (v >= 0) {
        start.assign(g.window().incident(v).begin(), g.window().incident(v).end());
      } else {
        for (int c : fine.incident(u)) start.push_back(c / spec.N);
        std::sort(start.begin(), start.end());
        start.erase(std::unique(start.begin(), start.end()), start.end());
      }
      const auto layer = g.layers(start, n_max);
      std::vector<int> counts(n_max, 0);
      for (int c = 0; c < g.window().complex_count(); ++c) {
        if (layer[c] == 0) continue;
        if (layer[c] < n_max && g.is_frontier(c)) open = true;
        ++counts[layer[c] - 1];
      }
      if (open) break;
      profiles.push_back(std::move(counts));
    }
    if (open) continue;
    for (std::size_t i = 0; i < base_ids.size(); ++i) visit(fine, base_ids[i], profiles[i]);
    return;
  }
}

}  // namespace

ShellFit fit_C8(const FractalSpec& spec, int M, int depth, int n_max) {
  const Window fine(spec, M - 1, depth + 1);
  std::vector<int> ids(fine.vertex_count());
  for (int i = 0; i < fine.vertex_count(); ++i) ids[i] = i;
  ShellFit fit;
  fit.n_max = n_max;
  fit.bases = static_cast<int>(ids.size());
  for_each_shell_profile(spec, M, depth, n_max, ids,
                         [&](const Window&, int, const std::vector<int>& counts) {
                           for (int n = 1; n <= n_max; ++n) {
                             const double r = counts[n - 1] / std::pow(n, spec.dimension);
                             fit.max_ratio = std::max(fit.max_ratio, r);
                           }
                         });
  fit.C8 = 1.05 * fit.max_ratio;
  return fit;
}

ComparisonReport verify_comparison(const FractalSpec& spec, int M, int sample_size, std::uint64_t seed,
                                   const MetricConstants& constants, int n_max) {
  ComparisonReport rep;
  rep.constants = constants;
  rep.n_max = n_max;
  if (rep.constants.C8 <= 0) rep.constants.C8 = fit_C8(spec, M, 2, n_max).C8;
  const auto& C = rep.constants;
  const double df = spec.dimension;
  const double lM = std::pow(static_cast<double>(spec.L), M);
  const double slack = 1e-12;
  std::mt19937_64 rng(seed);

  const Window w3(spec, M, 3);
  const ComplexGraph g4(spec, M, 4);
  std::uniform_int_distribution<int> pick(0, w3.vertex_count() - 1);
  for (int t = 0; t < sample_size; ++t) {
    const int a = pick(rng);
    const int b = pick(rng);
    const double dist = std::abs(w3.shadows()[a] - w3.shadows()[b]);
    int d = 0;
    if (a != b) {
      const int va = g4.window().find_vertex(w3.vertex(a));
      const int vb = g4.window().find_vertex(w3.vertex(b));
      d = g4.distance(g4.window().incident(va), g4.window().incident(vb));
      if (d < 0) throw IntegrityError("guard window failed to connect two window vertices");
    }
    ++rep.pairs;
    const double lower = C.C6 * dist;
    const double upper = std::max(2.0, C.C7 * std::pow(dist, df));
    if (d > 0) {
      rep.max_lower_ratio = std::max(rep.max_lower_ratio, lower / d);
      rep.max_upper_ratio = std::max(rep.max_upper_ratio, d / upper);
    }
    auto where = [&] {
      return w3.vertex(a).to_string() + " / " + w3.vertex(b).to_string() + " d=" + std::to_string(d);
    };
    if (lower > d * (1 + slack) + slack) rep.violations.push_back("lower bound fails at " + where());
    if (d > upper * (1 + slack)) rep.violations.push_back("upper bound fails at " + where());
    if (dist <= lM * (1 + slack)) {
      ++rep.uniform_pairs;
      if (d > C.n_uniform * (1 + slack)) rep.violations.push_back("n_uniform bound fails at " + where());
    }
  }

  const Window fine(spec, M - 1, 4);
  std::uniform_int_distribution<int> pick_base(0, fine.vertex_count() - 1);
  std::vector<int> bases;
  for (int t = 0; t < sample_size; ++t) bases.push_back(pick_base(rng));
  for_each_shell_profile(spec, M, 3, n_max, bases,
                         [&](const Window& fw, int u, const std::vector<int>& counts) {
                           ++rep.bases;
                           for (int n = 1; n <= n_max; ++n) {
                             const double bound = C.C8 * std::pow(n, df);
                             rep.max_shell_ratio = std::max(rep.max_shell_ratio, counts[n - 1] / bound);
                             if (counts[n - 1] > bound * (1 + slack)) {
                               rep.violations.push_back("shell bound fails at " + fw.vertex(u).to_string() +
                                                        " n=" + std::to_string(n));
                             }
                           }
                         });
  return rep;
}

}  // namespace nestfold
