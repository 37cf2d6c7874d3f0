#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestfold/spec.hpp"

namespace nestfold::suite {

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  bool applicable = true;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::vector<FractalSpec> specs;  // empty: every builtin
  std::uint64_t seed = 7;
  bool monte_carlo = true;         // criterion 12
};

// GLP verdict known for a builtin: 1 or 0, and -1 for other specs.
int expected_glp(const FractalSpec& spec);

Criterion glp_verdicts(const std::vector<FractalSpec>& specs);
Criterion labelling_uniqueness(const std::vector<FractalSpec>& specs);
Criterion triangle_oracle(const std::vector<FractalSpec>& specs);
Criterion even_k_characterization(const std::vector<FractalSpec>& specs);
Criterion projection_composition(const std::vector<FractalSpec>& specs, std::uint64_t seed);
Criterion metric_bounds(const std::vector<FractalSpec>& specs, std::uint64_t seed);
Criterion hitting_invariance(const std::vector<FractalSpec>& specs);
Criterion fiber_invariance(const std::vector<FractalSpec>& specs);
Criterion chapman_kolmogorov(const std::vector<FractalSpec>& specs);
Criterion detailed_balance(const std::vector<FractalSpec>& specs);
Criterion time_scale(const std::vector<FractalSpec>& specs);
Criterion monte_carlo(const std::vector<FractalSpec>& specs, std::uint64_t seed);

// Criteria 1..12 in order. With explicit specs every criterion restricts
// itself to those; without, each uses the builtins it is stated for.
std::vector<Criterion> run_all(const Options& options);

}  // namespace nestfold::suite
