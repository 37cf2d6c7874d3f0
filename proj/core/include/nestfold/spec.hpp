#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nestfold/field.hpp"

namespace nestfold {

// Planar IFS Psi_i(x) = x / L + nu_i with integer L >= 2 and nu_0 = 0.
// Indices are 0-based in code; documents and reports use 1-based digits.
struct FractalSpec {
  std::string name;
  int k = 0;
  int L = 0;
  int N = 0;
  std::vector<FieldElement> nu;
  // Optional exponents (d_w, d_s, d_J). Informational only.
  std::map<std::string, double> metadata;

  // Derived by make_spec.
  std::vector<FieldElement> fixed_points;
  // essential_index[j] is the similitude whose fixed point is v0[j].
  std::vector<int> essential_index;
  // The k essential fixed points, counter-clockwise, starting at 0.
  std::vector<FieldElement> v0;
  FieldElement barycenter;
  double dimension = 0.0;

  const CyclotomicField& field() const { return CyclotomicField::get(k); }
  FieldElement psi(int i, const FieldElement& x) const;
  FieldElement zero() const { return FieldElement(field()); }
  // L^e as a rational (e may be negative).
  Rational scale(int e) const { return rational_pow(Rational(L), e); }
  // -1 when v0 holds no such point.
  int corner_index(const FieldElement& x) const;
};

// Derives fixed points, essential points, V0, barycenter and dimension.
// Throws ValidationError on structural problems (wrong counts, nu_0 != 0,
// #essential != k, d_f outside (0,2]).
FractalSpec make_spec(std::string name, int k, int L, int N, std::vector<FieldElement> nu,
                      std::map<std::string, double> metadata = {});

FractalSpec parse_spec(std::string_view json_text);
std::string serialize_spec(const FractalSpec& spec);

// "builtin:<name>" or a path to a spec document.
FractalSpec load_spec(std::string_view ref);
std::vector<std::string> builtin_spec_names();
std::string builtin_spec_text(std::string_view name);

}  // namespace nestfold
