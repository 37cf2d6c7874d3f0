#include <gtest/gtest.h>

#include <random>
#include <set>

#include "common.hpp"
#include "nestfold/error.hpp"
#include "nestfold/labeling.hpp"

using namespace nestfold;
using testing_support::at;
using testing_support::builtin;

namespace {

std::shared_ptr<const Window> window(const std::string& n, int M, int depth) {
  return std::make_shared<const Window>(builtin(n), M, depth);
}

const char* kGlp[] = {"gasket", "vicsek", "hexagon"};

}  // namespace

TEST(Labeling, GasketDepthOne) {
  const auto w = window("gasket", 0, 1);
  const auto res = propagate_labels(w, identity_seed(3));
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res.labeling->labels.size(), 6u);
  // Each inner vertex carries the label missing from the two corners of the
  // edge it sits on.
  const auto& s = builtin("gasket");
  auto label = [&](std::initializer_list<int> c) { return res.labeling->labels[w->find_vertex(at(s, c))]; };
  EXPECT_EQ(label({0}), 0);
  EXPECT_EQ(label({2}), 2);
  EXPECT_EQ(label({2, 2}), 1);
  EXPECT_EQ(label({1}), 1);     // between labels 0 and 2
  EXPECT_EQ(label({1, 1}), 2);  // between labels 0 and 1
  EXPECT_EQ(label({2, 1}), 0);  // between labels 2 and 1
}

TEST(Labeling, EveryComplexCarriesEveryLabelOnce) {
  for (const char* n : kGlp) {
    const auto w = window(n, 0, 2);
    const auto res = propagate_labels(w, identity_seed(w->spec().k));
    ASSERT_TRUE(res.ok()) << n;
    for (int c = 0; c < w->complex_count(); ++c) {
      std::set<int> seen;
      for (int v : w->complex_vertex_ids(c)) seen.insert(res.labeling->labels[v]);
      EXPECT_EQ(static_cast<int>(seen.size()), w->spec().k);
    }
  }
}

TEST(Labeling, UniqueUpToAlphabetPermutation) {
  std::mt19937_64 rng(4);
  for (const char* n : kGlp) {
    const auto w = window(n, 0, 2);
    const int k = w->spec().k;
    const auto base = propagate_labels(w, identity_seed(k));
    for (int trial = 0; trial < 5; ++trial) {
      auto sigma = identity_seed(k);
      std::shuffle(sigma.begin(), sigma.end(), rng);
      const auto other = propagate_labels(w, sigma);
      ASSERT_TRUE(other.ok());
      for (int v = 0; v < w->vertex_count(); ++v) {
        EXPECT_EQ(other.labeling->labels[v], sigma[base.labeling->labels[v]]);
      }
    }
  }
}

TEST(Labeling, DeeperWindowRestrictsToShallowOne) {
  for (const char* n : kGlp) {
    const auto w1 = window(n, 0, 1);
    const auto w2 = window(n, 0, 2);
    const auto a = propagate_labels(w1, identity_seed(w1->spec().k));
    const auto b = propagate_labels(w2, identity_seed(w1->spec().k));
    ASSERT_TRUE(a.ok() && b.ok());
    for (int v = 0; v < w1->vertex_count(); ++v) {
      EXPECT_EQ(a.labeling->labels[v], b.labeling->labels[w2->find_vertex(w1->vertex(v))]);
    }
  }
}

TEST(Labeling, RecursiveRotationsAgreeWithPropagation) {
  for (const char* n : kGlp) {
    for (int depth : {1, 2, 3}) {
      const auto w = window(n, 0, depth);
      const auto res = propagate_labels(w, identity_seed(w->spec().k));
      const GoodLabeling good(w->spec());
      for (int c = 0; c < w->complex_count(); ++c) {
        const auto addr = w->address(c);
        EXPECT_EQ(good.rotation(addr), res.labeling->rotations[c]) << n << " " << addr.to_string();
        EXPECT_EQ(rotation_for_complex(*res.labeling, addr), res.labeling->rotations[c]);
      }
      for (int v = 0; v < w->vertex_count(); ++v) {
        EXPECT_EQ(good.label_vertex(w->vertex(v), 0), res.labeling->labels[v]);
      }
    }
  }
}

TEST(Labeling, HigherOrderWindows) {
  for (const char* n : kGlp) {
    const auto w = window(n, 1, 2);
    const auto res = propagate_labels(w, identity_seed(w->spec().k));
    ASSERT_TRUE(res.ok());
    const GoodLabeling good(w->spec());
    for (int v = 0; v < w->vertex_count(); ++v) {
      EXPECT_EQ(good.label_vertex(w->vertex(v), 1), res.labeling->labels[v]);
    }
  }
}

TEST(Labeling, GlpVerdicts) {
  EXPECT_TRUE(check_glp(builtin("gasket")).ok());
  EXPECT_TRUE(check_glp(builtin("vicsek")).ok());
  EXPECT_TRUE(check_glp(builtin("hexagon")).ok());
  const auto snow = check_glp(builtin("snowflake"));
  ASSERT_FALSE(snow.ok());
  EXPECT_THROW(GoodLabeling(builtin("snowflake")), DomainError);
}

TEST(Labeling, SnowflakeConflictReplays) {
  const auto& s = builtin("snowflake");
  const auto res = check_glp(s);
  ASSERT_TRUE(res.conflict.has_value());
  const auto& c = *res.conflict;
  EXPECT_NE(c.label_a, c.label_b);
  EXPECT_EQ(replay_chain(s, identity_seed(6), c.chain_a, c.vertex), c.label_a);
  EXPECT_EQ(replay_chain(s, identity_seed(6), c.chain_b, c.vertex), c.label_b);
  EXPECT_EQ(c.chain_a.front(), (ComplexAddress{0, {}}));
}

TEST(Labeling, TriangleClosedFormValues) {
  const auto& s = builtin("gasket");
  EXPECT_EQ(triangle_closed_form(s, 0, 0), 0);
  EXPECT_EQ(triangle_closed_form(s, 1, 0), 1);
  EXPECT_EQ(triangle_closed_form(s, 1, 1), 0);
  EXPECT_EQ(triangle_closed_form(s, 2, 0), 2);
  EXPECT_THROW(triangle_closed_form(builtin("vicsek"), 0, 0), DomainError);
}

TEST(Labeling, TriangleClosedFormAgreesWithRecursion) {
  // v = n1 e1 + n2 e2 with e1 = 1, e2 = 1 + zeta_3.
  const auto& s = builtin("gasket");
  const GoodLabeling good(s);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(0, 40);
  int checked = 0;
  while (checked < 200) {
    const int n1 = pick(rng), n2 = pick(rng);
    const auto v = at(s, {n1 + n2, n2});
    Point p{v, 0};
    try {
      p = locate_point(s, v, 0, 0);
    } catch (const DomainError&) {
      continue;  // not a point of the one-sided gasket
    }
    EXPECT_EQ(good.label_vertex(p.value, 0), triangle_closed_form(s, n1, n2)) << n1 << "," << n2;
    ++checked;
  }
  EXPECT_EQ(good.label_vertex(at(s, {2}), 0), 2);
}

TEST(Labeling, EvenKPartitionMatchesVerdict) {
  for (const char* n : {"vicsek", "hexagon", "snowflake"}) {
    const auto& s = builtin(n);
    const auto part = two_class_partition(s);
    EXPECT_EQ(part.bipartite, check_glp(s).ok()) << n;
    if (part.bipartite) {
      // The two classes are the rotations 0 and k/2.
      const GoodLabeling good(s);
      for (int d = 0; d < s.N; ++d) {
        EXPECT_EQ(good.base_rotation(d), part.color[d] == part.color[0] ? good.base_rotation(0) : (good.base_rotation(0) + s.k / 2) % s.k);
      }
    } else {
      EXPECT_FALSE(part.odd_cycle.empty());
      EXPECT_EQ(part.odd_cycle.size() % 2, 1u);
    }
  }
  EXPECT_THROW(two_class_partition(builtin("gasket")), DomainError);
}

TEST(Labeling, HexagonRingAdvancesByConstantStep) {
  const auto& s = builtin("hexagon");
  const GoodLabeling good(s);
  const int step = (good.base_rotation(1) - good.base_rotation(0) + s.k) % s.k;
  for (int d = 0; d < s.N; ++d) {
    EXPECT_EQ((good.base_rotation((d + 1) % s.N) - good.base_rotation(d) + s.k) % s.k, step);
  }
  EXPECT_EQ(step, 3);
}
