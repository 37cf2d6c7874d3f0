#pragma once

#include <string>
#include <vector>

#include "nestfold/field.hpp"
#include "nestfold/spec.hpp"

namespace nestfold {

// center + zeta^j (p - center).
FieldElement rotate_about(const FieldElement& p, const FieldElement& center, int j);

// Reflection across the perpendicular bisector of [a, b].
FieldElement reflect_bisector(const FieldElement& p, const FieldElement& a, const FieldElement& b);

// {x fixed : exists fixed y and i != j with Psi_i(x) = Psi_j(y)}, in the
// order of the similitudes.
std::vector<FieldElement> essential_fixed_points(const FractalSpec& spec);

struct AxiomVerdict {
  bool pass = true;
  std::string witness;
};

struct ValidationReport {
  AxiomVerdict regular_polygon;
  AxiomVerdict symmetry;
  AxiomVerdict nesting;
  AxiomVerdict connectivity;
  AxiomVerdict koch_uniqueness;
  int nesting_depth = 0;
  std::vector<FieldElement> essential;
  std::vector<std::string> warnings;

  bool all_pass() const {
    return regular_polygon.pass && symmetry.pass && nesting.pass && connectivity.pass &&
           koch_uniqueness.pass;
  }
};

ValidationReport validate_spec(const FractalSpec& spec, int nesting_depth = 3);

// Vertices of K^<0> refined `depth` times: Psi_w(V0) over all words of that
// length, deduplicated, in first-seen order.
std::vector<FieldElement> refined_vertices(const FractalSpec& spec, int depth);

}  // namespace nestfold
