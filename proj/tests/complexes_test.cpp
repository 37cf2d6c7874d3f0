#include <gtest/gtest.h>

#include <random>
#include <set>

#include "common.hpp"
#include "nestfold/complexes.hpp"
#include "nestfold/error.hpp"

using namespace nestfold;
using testing_support::at;
using testing_support::builtin;

TEST(Address, TextRoundTrip) {
  const ComplexAddress a{2, {0, 3, 1}};
  EXPECT_EQ(a.to_string(), "2:(1,4,2)");
  EXPECT_EQ(ComplexAddress::parse(a.to_string()), a);
  EXPECT_EQ(a.top_level(), 5);
}

TEST(Address, LeadingZerosDoNotMatter) {
  const ComplexAddress a{0, {0, 0, 2, 1}};
  const ComplexAddress b{0, {2, 1}};
  EXPECT_EQ(a, b);
  EXPECT_EQ(ComplexAddressHash{}(a), ComplexAddressHash{}(b));
  EXPECT_EQ(a.normalized().word, b.word);
  EXPECT_EQ(b.padded_word(4), (std::vector<int>{0, 0, 2, 1}));
}

TEST(Address, AncestorsContainDescendants) {
  const ComplexAddress fine{0, {1, 2, 0}};
  EXPECT_EQ(fine.ancestor(1), (ComplexAddress{1, {1, 2}}));
  EXPECT_EQ(fine.ancestor(3), (ComplexAddress{3, {}}));
  EXPECT_TRUE(fine.ancestor(2).contains(fine));
  EXPECT_FALSE((ComplexAddress{1, {2, 2}}).contains(fine));
}

TEST(Address, AnchorAndVerticesOfAComplex) {
  const auto& s = builtin("gasket");
  // Level-0 complex with word (2): K^<0> + 2 nu_2 = K^<0> + (1, 0).
  const ComplexAddress a{0, {1}};
  EXPECT_EQ(complex_anchor(s, a), at(s, {1}));
  const auto vs = complex_vertices(s, a);
  ASSERT_EQ(vs.size(), 3u);
  EXPECT_EQ(vs[0], at(s, {1}));
  EXPECT_EQ(vs[1], at(s, {2}));
}

TEST(Window, GasketCounts) {
  const auto& s = builtin("gasket");
  const int expected[] = {3, 6, 15, 42, 123};
  int complexes = 1;
  for (int d = 0; d <= 4; ++d) {
    const Window w(s, 0, d);
    EXPECT_EQ(w.vertex_count(), expected[d]);
    EXPECT_EQ(w.complex_count(), complexes);
    complexes *= 3;
  }
}

TEST(Window, EveryComplexHasKDistinctVertices) {
  for (const auto& n : builtin_spec_names()) {
    const Window w(builtin(n), 0, 2);
    for (int c = 0; c < w.complex_count(); ++c) {
      const auto ids = w.complex_vertex_ids(c);
      EXPECT_EQ(std::set<int>(ids.begin(), ids.end()).size(), static_cast<std::size_t>(w.spec().k));
      EXPECT_EQ(w.index_of(w.address(c)), c);
    }
  }
}

TEST(Window, IncidenceAndAdjacencyAgree) {
  // Two complexes are adjacent exactly when they share a vertex.
  const Window w(builtin("vicsek"), 0, 2);
  for (int c = 0; c < w.complex_count(); ++c) {
    std::set<int> shared;
    for (int v : w.complex_vertex_ids(c)) {
      for (int d : w.incident(v)) {
        if (d != c) shared.insert(d);
      }
    }
    const auto adj = w.adjacent(c);
    EXPECT_EQ(std::set<int>(adj.begin(), adj.end()), shared);
  }
}

TEST(Rank, MatchesBruteForceCountInALargerWindow) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    const Window small(s, 0, 2);
    const Window big(s, 0, 4);
    for (const auto& v : small.vertices()) {
      const int brute = big.window_rank(big.find_vertex(v));
      EXPECT_EQ(rank(s, v, 0), brute) << n << " " << v.to_string();
    }
  }
}

TEST(Rank, GasketValues) {
  const auto& s = builtin("gasket");
  EXPECT_EQ(rank(s, s.zero(), 0), 1);
  EXPECT_EQ(rank(s, at(s, {1}), 0), 2);
  EXPECT_EQ(rank(s, at(s, {2}), 1), 2);
  EXPECT_THROW(rank(s, at(s, {1}), 1), DomainError);
}

TEST(Rank, BoundedByThreeForTrianglesAndTwoOtherwise) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    const Window w(s, 0, 2);
    for (const auto& v : w.vertices()) {
      const int r = rank(s, v, 0);
      EXPECT_GE(r, 1);
      EXPECT_LE(r, s.k == 3 ? 3 : 2);
    }
  }
}

TEST(Containment, ContainingComplexesHoldThePoint) {
  std::mt19937_64 rng(2);
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    const Window w(s, 0, 3);
    std::uniform_int_distribution<int> pick(0, w.vertex_count() - 1);
    for (int i = 0; i < 40; ++i) {
      const auto& v = w.vertex(pick(rng));
      for (int M : {0, 1}) {
        for (const auto& a : containing_complexes(s, Point{v, 0}, M)) {
          bool hit = false;
          for (const auto& u : complex_vertices(s, a)) hit = hit || u == v;
          if (M == 0) {
            EXPECT_TRUE(hit);
          }
          EXPECT_EQ(a.level, M);
        }
      }
    }
  }
}

TEST(Containment, LocateAndEnclose) {
  const auto& s = builtin("gasket");
  const Point p = locate_point(s, at(s, {4}), 3, 0);
  EXPECT_EQ(p.grid, 2);
  EXPECT_EQ(enclosing_level(s, Point{at(s, {4}), 0}, 0), 2);
  EXPECT_THROW(locate_point(s, FieldElement(s.field(), Rational(1, 3)), 2, 0), DomainError);
}

TEST(Window, ScalingEquivariance) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    const Window fine(s, 0, 2), coarse(s, 1, 2);
    ASSERT_EQ(fine.vertex_count(), coarse.vertex_count());
    std::set<std::string> scaled, direct;
    for (const auto& v : fine.vertices()) scaled.insert((v * Rational(s.L)).to_string());
    for (const auto& v : coarse.vertices()) direct.insert(v.to_string());
    EXPECT_EQ(scaled, direct) << n;
  }
}

TEST(Window, VertexCountBound) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    EXPECT_EQ(Window(s, 0, 0).vertex_count(), s.k);
    long bound = s.k;
    for (int m = 1; m <= 3; ++m) {
      bound *= s.N;
      EXPECT_LE(Window(s, 0, m).vertex_count(), bound) << n;
    }
  }
}
