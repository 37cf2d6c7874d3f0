#include <gtest/gtest.h>

#include <random>
#include <set>

#include "common.hpp"
#include "nestfold/error.hpp"
#include "nestfold/projection.hpp"

using namespace nestfold;
using testing_support::at;
using testing_support::builtin;

namespace {

Folding folding(const std::string& n) { return Folding(std::make_shared<const GoodLabeling>(builtin(n))); }

const char* kGlp[] = {"gasket", "vicsek", "hexagon"};

}  // namespace

TEST(Projection, GasketWorkedExample) {
  const auto& s = builtin("gasket");
  const auto f = folding("gasket");
  // (4,0) folds onto (1, sqrt 3), the corner of K^<1> labelled c.
  const Point y = f.project(Point{at(s, {4}), 1}, 1);
  EXPECT_EQ(y.value, at(s, {2, 2}));
  EXPECT_EQ(GoodLabeling(s).label_vertex(y.value, 1), 2);
  EXPECT_EQ(f.unfold(y, ComplexAddress{1, {1}}).value, at(s, {4}));
}

TEST(Projection, IdentityOnThePrimaryComplex) {
  for (const char* n : kGlp) {
    const auto f = folding(n);
    const Window w(builtin(n), 0, 1);
    for (const auto& v : w.vertices()) {
      EXPECT_EQ(f.project(Point{v, 0}, 1).value, v);
      EXPECT_EQ(f.unfold(Point{v, 0}, ComplexAddress{1, {}}).value, v);
    }
  }
}

TEST(Projection, IdempotentAndRoundTrips) {
  std::mt19937_64 rng(8);
  for (const char* n : kGlp) {
    const auto& s = builtin(n);
    const auto f = folding(n);
    const Window w(s, 0, 3);
    std::uniform_int_distribution<int> pick(0, w.vertex_count() - 1), digit(0, s.N - 1);
    for (int i = 0; i < 100; ++i) {
      const Point x{w.vertex(pick(rng)), 0};
      for (int M : {0, 1, 2}) {
        const Point y = f.project(x, M);
        EXPECT_EQ(f.project(y, M).value, y.value);
        ComplexAddress a{M, {}};
        for (int t = M; t < 3; ++t) a.word.push_back(digit(rng));
        const Point u = f.unfold(y, a);
        EXPECT_EQ(f.project(u, M).value, y.value);
        EXPECT_EQ(f.project_to(x, a).value, u.value);
      }
    }
  }
}

TEST(Projection, IsometryOnEachComplex) {
  std::mt19937_64 rng(12);
  for (const char* n : kGlp) {
    const auto& s = builtin(n);
    const auto f = folding(n);
    const Window inside(s, 0, 1);
    std::uniform_int_distribution<int> pick(0, inside.vertex_count() - 1), digit(0, s.N - 1);
    for (int i = 0; i < 50; ++i) {
      const Point y1{inside.vertex(pick(rng)), 0}, y2{inside.vertex(pick(rng)), 0};
      const ComplexAddress a{1, {digit(rng), digit(rng)}};
      const auto d = f.unfold(y1, a).value - f.unfold(y2, a).value;
      EXPECT_EQ(d.norm2(), (y1.value - y2.value).norm2());
    }
  }
}

TEST(Projection, PointInsideTargetComplexIsFixed) {
  const auto& s = builtin("vicsek");
  const auto f = folding("vicsek");
  const ComplexAddress a{1, {2}};
  for (const auto& v : complex_vertices(s, ComplexAddress{0, {2, 4}})) {
    EXPECT_EQ(f.project_to(Point{v, 0}, a).value, v);
  }
}

TEST(Projection, VertexImagesAgreeAcrossIncidentComplexes) {
  for (const char* n : kGlp) {
    const auto& s = builtin(n);
    const auto f = folding(n);
    const Window w(s, 1, 2);
    for (const auto& v : w.vertices()) {
      const Point x{v, 1};
      const auto image = f.project(x, 1).value;
      for (const auto& a : containing_complexes(s, x, 1)) EXPECT_EQ(f.fold_through(v, a), image);
    }
  }
}

TEST(Fiber, NonVertexHasOnePreimagePerComplex) {
  const auto& s = builtin("gasket");
  const auto f = folding("gasket");
  // (1, 0) is a level-0 vertex but not a level-1 vertex.
  const Window w(s, 1, 2);
  const auto pre = f.fiber(Point{at(s, {1}), 0}, w);
  EXPECT_EQ(pre.size(), 9u);
  for (const auto& p : pre) EXPECT_EQ(f.project(p, 1).value, at(s, {1}));
}

TEST(Fiber, VertexFibersAreSmallerAndPartitionTheWindow) {
  for (const char* n : kGlp) {
    const auto& s = builtin(n);
    const auto f = folding(n);
    const Window target(s, 0, 1);
    const Window w(s, 1, 2);
    const Window grid(s, 0, 3);
    std::set<FieldElement> seen;
    std::size_t total = 0;
    for (const auto& y : target.vertices()) {
      const auto pre = f.fiber(Point{y, 0}, w);
      total += pre.size();
      for (const auto& p : pre) {
        EXPECT_TRUE(seen.insert(p.value).second) << "fibers overlap";
        EXPECT_EQ(f.project(p, 1).value, y);
      }
    }
    EXPECT_EQ(total, static_cast<std::size_t>(grid.vertex_count()));
    const auto corner = f.fiber(Point{s.zero(), 1}, w);
    EXPECT_LT(corner.size(), static_cast<std::size_t>(w.complex_count()));
  }
}

TEST(Projection, RejectsPointsOffTheFractal) {
  const auto& s = builtin("gasket");
  const auto f = folding("gasket");
  EXPECT_THROW(f.project(Point{FieldElement(s.field(), Rational(1, 3)), 0}, 1), DomainError);
}

TEST(Projection, CoarserFoldAbsorbsFinerOne) {
  for (const char* n : kGlp) {
    const auto& s = builtin(n);
    const auto f = folding(n);
    const Window w(s, 0, 3);
    for (int v = 0; v < w.vertex_count(); v += 3) {
      const Point x{w.vertex(v), 0};
      const auto p1 = f.project(x, 1);
      EXPECT_EQ(f.project(f.project(x, 2), 1).value, p1.value) << n;
      EXPECT_EQ(f.project(p1, 2).value, p1.value) << n;
    }
  }
}
