#pragma once

#include <map>
#include <string>

#include "nestfold/spec.hpp"

namespace testing_support {

inline const nestfold::FractalSpec& builtin(const std::string& name) {
  static std::map<std::string, nestfold::FractalSpec> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, nestfold::load_spec("builtin:" + name)).first;
  return it->second;
}

// Element with the given integer coefficients over 1, zeta, zeta^2, ...
inline nestfold::FieldElement at(const nestfold::FractalSpec& s, std::initializer_list<int> coeffs) {
  std::vector<nestfold::Rational> c;
  for (int x : coeffs) c.emplace_back(x);
  return nestfold::FieldElement::from_coefficients(s.field(), c);
}

}  // namespace testing_support
