#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "nestfold/error.hpp"
#include "nestfold/geometry.hpp"

using namespace nestfold;
using testing_support::builtin;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kSquare =
    R"({"name":"square","k":4,"L":2,"N":4,"nu":[["0","0","0","0"],["1/2","0","0","0"],)"
    R"(["1/2","1/2","0","0"],["0","1/2","0","0"]]})";

}  // namespace

TEST(Spec, BuiltinShapes) {
  struct Row {
    const char* name;
    int k, L, N;
  };
  for (const Row& r : {Row{"gasket", 3, 2, 3}, Row{"vicsek", 4, 3, 5}, Row{"hexagon", 6, 3, 6},
                       Row{"snowflake", 6, 3, 7}}) {
    const auto& s = builtin(r.name);
    EXPECT_EQ(s.k, r.k);
    EXPECT_EQ(s.L, r.L);
    EXPECT_EQ(s.N, r.N);
    EXPECT_EQ(static_cast<int>(s.v0.size()), s.k);
    EXPECT_NEAR(s.dimension, std::log(double(r.N)) / std::log(double(r.L)), 1e-12);
  }
}

TEST(Spec, GasketDimension) {
  EXPECT_NEAR(builtin("gasket").dimension, std::log(3.0) / std::log(2.0), 1e-15);
}

TEST(Spec, TranslationsFollowFixedPoints) {
  // nu_i = x_i (1 - 1/L) for the fixed point x_i of Psi_i.
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    for (int i = 0; i < s.N; ++i) {
      const auto& x = s.fixed_points[i];
      EXPECT_EQ(s.psi(i, x), x);
      EXPECT_EQ(s.nu[i], x * Rational(s.L - 1, s.L));
    }
  }
}

TEST(Spec, V0IsRegularCounterClockwisePolygonFromOrigin) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    EXPECT_TRUE(s.v0[0].is_zero());
    const auto side = (s.v0[1] - s.v0[0]).norm2();
    for (int j = 0; j < s.k; ++j) {
      const auto& a = s.v0[j];
      const auto& b = s.v0[(j + 1) % s.k];
      EXPECT_EQ((b - a).norm2(), side);
      // Turning left at every corner.
      const auto c = s.v0[(j + 2) % s.k];
      const auto u = (b - a).to_complex(), w = (c - b).to_complex();
      EXPECT_GT(u.real() * w.imag() - u.imag() * w.real(), 0.0);
    }
  }
}

TEST(Spec, EssentialPointsAreTheV0Corners) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    auto ess = essential_fixed_points(s);
    auto v0 = s.v0;
    std::sort(ess.begin(), ess.end());
    std::sort(v0.begin(), v0.end());
    EXPECT_EQ(ess, v0);
    for (int j = 0; j < s.k; ++j) EXPECT_EQ(s.fixed_points[s.essential_index[j]], s.v0[j]);
  }
}

TEST(Spec, BuiltinsValidate) {
  for (const auto& n : builtin_spec_names()) {
    const auto rep = validate_spec(builtin(n));
    EXPECT_TRUE(rep.all_pass()) << n;
    EXPECT_EQ(rep.nesting_depth, 3);
    ASSERT_FALSE(rep.warnings.empty());
  }
}

TEST(Spec, FilledSquareFailsNesting) {
  const auto s = parse_spec(kSquare);
  const auto rep = validate_spec(s);
  EXPECT_FALSE(rep.nesting.pass);
  EXPECT_FALSE(rep.nesting.witness.empty());
  EXPECT_FALSE(rep.all_pass());
}

TEST(Spec, StructuralErrors) {
  const auto& f = CyclotomicField::get(3);
  const FieldElement z(f);
  EXPECT_THROW(make_spec("x", 3, 2, 3, {z, z}), ValidationError);
  EXPECT_THROW(make_spec("x", 3, 1, 3, {z, z, z}), ValidationError);
  EXPECT_THROW(make_spec("x", 3, 2, 3, {FieldElement(f, 1), z, z}), ValidationError);
  EXPECT_THROW(parse_spec("{not json"), ValidationError);
  EXPECT_THROW(load_spec("builtin:nonesuch"), ValidationError);
  // Nine maps of ratio 1/2 give d_f > 2.
  std::vector<FieldElement> nine(9, z);
  for (int i = 1; i < 9; ++i) nine[i] = FieldElement(f, Rational(i, 16));
  EXPECT_THROW(make_spec("x", 3, 2, 9, nine), ValidationError);
}

TEST(Spec, SerializeRoundTrip) {
  for (const auto& n : builtin_spec_names()) {
    const auto& s = builtin(n);
    const auto t = parse_spec(serialize_spec(s));
    EXPECT_EQ(t.name, s.name);
    EXPECT_EQ(t.nu, s.nu);
    EXPECT_EQ(serialize_spec(t), serialize_spec(s));
  }
}

TEST(Spec, ShippedFilesMatchBuiltins) {
  for (const auto& n : builtin_spec_names()) {
    const auto file = load_spec(std::string(NESTFOLD_DATA_DIR) + "/specs/" + n + ".json");
    EXPECT_EQ(serialize_spec(file), serialize_spec(builtin(n))) << n;
    EXPECT_FALSE(read(std::string(NESTFOLD_DATA_DIR) + "/specs/" + n + ".json").empty());
  }
}

TEST(Geometry, ReflectBisector) {
  const auto& s = builtin("hexagon");
  const auto a = s.v0[1], b = s.v0[3];
  EXPECT_EQ(reflect_bisector(a, a, b), b);
  EXPECT_EQ(reflect_bisector(b, a, b), a);
  for (const auto& p : s.nu) {
    EXPECT_EQ(reflect_bisector(reflect_bisector(p, a, b), a, b), p);
    EXPECT_EQ((reflect_bisector(p, a, b) - a).norm2(), (p - b).norm2());
  }
  EXPECT_THROW(reflect_bisector(a, a, a), DegenerateInputError);
}

TEST(Geometry, RotateAboutFullTurnIsIdentity) {
  const auto& s = builtin("vicsek");
  const auto c = s.barycenter;
  for (const auto& p : s.nu) {
    EXPECT_EQ(rotate_about(p, c, s.k), p);
    EXPECT_EQ(rotate_about(rotate_about(p, c, 1), c, s.k - 1), p);
  }
  // V0 is invariant under rotation about its barycenter.
  for (int j = 0; j < s.k; ++j) EXPECT_EQ(rotate_about(s.v0[j], c, 1), s.v0[(j + 1) % s.k]);
}

TEST(Geometry, RefinedVertexCounts) {
  // Gasket: (3^(n+1) + 3) / 2 vertices after n refinements.
  const auto& s = builtin("gasket");
  long p = 3;
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(static_cast<long>(refined_vertices(s, n).size()), (p + 3) / 2);
    p *= 3;
  }
  EXPECT_EQ(refined_vertices(builtin("vicsek"), 1).size(), 16u);
}
