#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <random>

#include "common.hpp"
#include "nestfold/geometry.hpp"
#include "nestfold/metric.hpp"

using namespace nestfold;
using testing_support::at;
using testing_support::builtin;

namespace {

// Breadth-first chain length over complexes sharing a vertex, written
// against the raw window incidence only.
int brute_distance(const Window& w, const FieldElement& x, const FieldElement& y) {
  const int vx = w.find_vertex(x), vy = w.find_vertex(y);
  if (vx == vy) return 0;
  std::vector<int> dist(w.complex_count(), -1);
  std::deque<int> q;
  for (int c : w.incident(vx)) {
    dist[c] = 1;
    q.push_back(c);
  }
  while (!q.empty()) {
    const int c = q.front();
    q.pop_front();
    for (int v : w.complex_vertex_ids(c)) {
      if (v == vy) return dist[c];
      for (int d : w.incident(v)) {
        if (dist[d] < 0) {
          dist[d] = dist[c] + 1;
          q.push_back(d);
        }
      }
    }
  }
  return -1;
}

// Smallest vertex distance between disjoint 0-complexes of K^<level>,
// refined `depth` times. An upper bound for C5.
double vertex_gap(const FractalSpec& s, int level, int depth) {
  const Window w(s, 0, level);
  std::vector<std::vector<std::complex<double>>> pts(w.complex_count());
  for (int c = 0; c < w.complex_count(); ++c) {
    for (const auto& v : refined_vertices(s, depth)) pts[c].push_back((v + w.anchor(c)).to_complex());
  }
  double best = INFINITY;
  for (int a = 0; a < w.complex_count(); ++a) {
    for (int b = a + 1; b < w.complex_count(); ++b) {
      bool touch = false;
      for (int u : w.complex_vertex_ids(a)) {
        for (int v : w.complex_vertex_ids(b)) touch = touch || u == v;
      }
      if (touch) continue;
      for (auto p : pts[a]) {
        for (auto q : pts[b]) best = std::min(best, std::abs(p - q));
      }
    }
  }
  return best;
}

}  // namespace

TEST(Distance, GasketBottomEdge) {
  const auto& s = builtin("gasket");
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(graph_distance(s, Point{s.zero(), 0}, Point{at(s, {n}), 0}, 0), n);
  }
  EXPECT_EQ(graph_distance(s, Point{s.zero(), 0}, Point{s.zero(), 0}, 0), 0);
}

TEST(Distance, AgreesWithBruteForceSearch) {
  std::mt19937_64 rng(21);
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    const Window inner(s, 0, 2);
    const Window big(s, 0, 4);
    std::uniform_int_distribution<int> pick(0, inner.vertex_count() - 1);
    for (int i = 0; i < 25; ++i) {
      const auto& x = inner.vertex(pick(rng));
      const auto& y = inner.vertex(pick(rng));
      EXPECT_EQ(graph_distance(s, Point{x, 0}, Point{y, 0}, 0), brute_distance(big, x, y))
          << n << " " << x.to_string() << " " << y.to_string();
    }
  }
}

TEST(Distance, Symmetric) {
  const auto& s = builtin("hexagon");
  const Window w(s, 0, 2);
  for (int i = 0; i < w.vertex_count(); i += 7) {
    for (int j = 0; j < w.vertex_count(); j += 11) {
      const Point a{w.vertex(i), 0}, b{w.vertex(j), 0};
      EXPECT_EQ(graph_distance(s, a, b, 0), graph_distance(s, b, a, 0));
    }
  }
}

TEST(Shells, GasketFromOrigin) {
  const auto& s = builtin("gasket");
  const auto t = shells(s, Point{s.zero(), 0}, 0, 6);
  EXPECT_EQ(t.counts(), (std::vector<int>{1, 2, 2, 4, 2, 4}));
}

TEST(Shells, MatchDistancesToComplexes) {
  const auto& s = builtin("vicsek");
  const auto t = shells(s, Point{s.zero(), 0}, 0, 5);
  const Window big(s, 0, 4);
  for (std::size_t n = 0; n < t.shells.size(); ++n) {
    for (const auto& a : t.shells[n]) {
      int best = 1 << 30;
      for (const auto& v : complex_vertices(s, a)) best = std::min(best, brute_distance(big, s.zero(), v));
      EXPECT_EQ(best, static_cast<int>(n));
    }
  }
}

TEST(Constants, C5Brackets) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    const auto b2 = min_gap_C5(s, 2, 1e-6);
    const auto b3 = min_gap_C5(s, 3, 1e-6);
    EXPECT_LE(b2.lo, b2.hi);
    EXPECT_LT(Rational(b2.hi - b2.lo).get_d(), 1e-6);
    // More pairs at the finer level, never a larger gap.
    EXPECT_LE(b3.lo, b2.hi) << n;
    EXPECT_LE(b2.lo.get_d(), vertex_gap(s, 2, 1) + 1e-12) << n;
  }
  const auto g = min_gap_C5(builtin("gasket"), 2, 1e-6);
  const double r = std::sqrt(3.0) / 2;
  EXPECT_LE(g.lo.get_d(), r + 1e-12);
  EXPECT_GE(g.hi.get_d(), r - 1e-12);
}

TEST(Constants, DiameterOfTheGasketIsOne) {
  const auto d = diameter_bracket(builtin("gasket"), 1e-6);
  EXPECT_LE(d.lo, 1);
  EXPECT_GE(d.hi, 1);
  const auto v = diameter_bracket(builtin("vicsek"), 1e-6);
  EXPECT_NEAR(v.hi.get_d(), std::sqrt(2.0), 1e-6);
}

TEST(Constants, HullExcessIsZeroForBuiltins) {
  for (const auto& n : builtin_spec_names()) EXPECT_EQ(hull_excess(builtin(n)), 0.0) << n;
}

TEST(Constants, ComparisonHoldsOnSamples) {
  const auto& s = builtin("gasket");
  const auto c5 = min_gap_C5(s, 2, 1e-6);
  auto constants = metric_constants(s, 0, c5, diameter_bracket(s, 1e-6));
  constants.C8 = fit_C8(s, 0, 2, 6).C8;
  EXPECT_GT(constants.C6, 0.0);
  EXPECT_GT(constants.C7, 0.0);
  EXPECT_GT(constants.C8, 0.0);
  const auto rep = verify_comparison(s, 0, 2000, 5, constants);
  EXPECT_TRUE(rep.violations.empty());
  EXPECT_LE(rep.max_lower_ratio, 1.0);
  EXPECT_LE(rep.max_upper_ratio, 1.0);
  EXPECT_LE(rep.max_shell_ratio, 1.0);
  // Same seed, same report.
  const auto again = verify_comparison(s, 0, 2000, 5, constants);
  EXPECT_EQ(again.max_upper_ratio, rep.max_upper_ratio);
}

TEST(Distance, TriangleInequality) {
  std::mt19937_64 rng(4);
  for (const char* n : {"gasket", "vicsek"}) {
    const auto& s = builtin(n);
    const Window w(s, 0, 2);
    std::uniform_int_distribution<int> pick(0, w.vertex_count() - 1);
    for (int i = 0; i < 20; ++i) {
      const Point a{w.vertex(pick(rng)), 0}, b{w.vertex(pick(rng)), 0}, c{w.vertex(pick(rng)), 0};
      EXPECT_LE(graph_distance(s, a, c, 0), graph_distance(s, a, b, 0) + graph_distance(s, b, c, 0)) << n;
      EXPECT_EQ(graph_distance(s, a, b, 0) == 0, a.value == b.value);
    }
  }
}

TEST(Distance, ScaleCovariance) {
  const auto& s = builtin("hexagon");
  const Window w(s, 0, 2);
  const Rational L(s.L);
  for (int i = 0; i < w.vertex_count(); i += 13) {
    for (int j = 0; j < w.vertex_count(); j += 17) {
      const int d0 = graph_distance(s, Point{w.vertex(i), 0}, Point{w.vertex(j), 0}, 0);
      const int d1 = graph_distance(s, Point{w.vertex(i) * L, 1}, Point{w.vertex(j) * L, 1}, 1);
      EXPECT_EQ(d0, d1);
    }
  }
}
