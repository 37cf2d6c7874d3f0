#include "nestfold/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "nestfold/error.hpp"

namespace nestfold {

FieldElement rotate_about(const FieldElement& p, const FieldElement& center, int j) {
  return center + (p - center).rotated(j);
}

FieldElement reflect_bisector(const FieldElement& p, const FieldElement& a, const FieldElement& b) {
  if (a == b) throw DegenerateInputError("reflect_bisector needs two distinct points");
  const FieldElement mid = (a + b) * Rational(1, 2);
  const FieldElement d = b - a;
  return mid - (d / d.conj()) * (p - mid).conj();
}

std::vector<FieldElement> essential_fixed_points(const FractalSpec& spec) {
  std::vector<FieldElement> out;
  const int n = spec.N;
  // images[i][a] = Psi_i(x_a)
  std::vector<std::vector<FieldElement>> images(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) images[i].push_back(spec.psi(i, spec.fixed_points[a]));
  }
  for (int a = 0; a < n; ++a) {
    bool essential = false;
    for (int i = 0; i < n && !essential; ++i) {
      for (int j = 0; j < n && !essential; ++j) {
        if (i == j) continue;
        for (int b = 0; b < n; ++b) {
          if (images[i][a] == images[j][b]) {
            essential = true;
            break;
          }
        }
      }
    }
    if (essential) out.push_back(spec.fixed_points[a]);
  }
  return out;
}

std::vector<FieldElement> refined_vertices(const FractalSpec& spec, int depth) {
  std::vector<FieldElement> cur = spec.v0;
  for (int d = 0; d < depth; ++d) {
    std::vector<FieldElement> next;
    std::unordered_set<FieldElement, FieldElementHash> seen;
    for (int i = 0; i < spec.N; ++i) {
      for (const auto& v : cur) {
        FieldElement w = spec.psi(i, v);
        if (seen.insert(w).second) next.push_back(std::move(w));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

namespace {

std::vector<FieldElement> sorted(std::vector<FieldElement> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<FieldElement> image(const FractalSpec& spec, int i, const std::vector<FieldElement>& pts) {
  std::vector<FieldElement> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(spec.psi(i, p));
  return out;
}

AxiomVerdict check_regular_polygon(const FractalSpec& spec) {
  const int k = spec.k;
  std::vector<FieldElement> e;
  for (int j = 0; j < k; ++j) e.push_back(spec.v0[(j + 1) % k] - spec.v0[j]);
  const FieldElement side = e[0].norm2();
  const FieldElement turn = e[1] * e[0].conj();
  for (int j = 0; j < k; ++j) {
    if (e[j].norm2() != side) {
      return {false, "side " + std::to_string(j + 1) + " differs from side 1"};
    }
    if (e[(j + 1) % k] * e[j].conj() != turn) {
      return {false, "angle at vertex " + std::to_string((j + 1) % k + 1) + " differs"};
    }
  }
  // Equal sides and equal turns with turn = |e|^2 zeta: a convex regular k-gon.
  if (turn != side.rotated(1)) {
    return {false, "turning angle is not 2 pi / k"};
  }
  return {};
}

AxiomVerdict check_symmetry(const FractalSpec& spec) {
  std::vector<std::vector<FieldElement>> cells;
  for (int i = 0; i < spec.N; ++i) cells.push_back(sorted(image(spec, i, spec.v0)));
  for (int a = 0; a < spec.k; ++a) {
    for (int b = a + 1; b < spec.k; ++b) {
      for (int i = 0; i < spec.N; ++i) {
        std::vector<FieldElement> reflected;
        for (const auto& p : cells[i]) reflected.push_back(reflect_bisector(p, spec.v0[a], spec.v0[b]));
        reflected = sorted(std::move(reflected));
        bool found = std::any_of(cells.begin(), cells.end(),
                                 [&](const auto& c) { return c == reflected; });
        if (!found) {
          return {false, "reflection swapping V0 points " + std::to_string(a + 1) + " and " +
                             std::to_string(b + 1) + " maps cell " + std::to_string(i + 1) +
                             " outside the cell family"};
        }
      }
    }
  }
  return {};
}

AxiomVerdict check_nesting(const FractalSpec& spec, int depth) {
  const auto base = refined_vertices(spec, depth);
  std::vector<std::unordered_set<FieldElement, FieldElementHash>> approx(spec.N);
  std::vector<std::unordered_set<FieldElement, FieldElementHash>> corners(spec.N);
  for (int i = 0; i < spec.N; ++i) {
    for (const auto& p : base) approx[i].insert(spec.psi(i, p));
    for (const auto& p : spec.v0) corners[i].insert(spec.psi(i, p));
  }
  for (int i = 0; i < spec.N; ++i) {
    for (int j = i + 1; j < spec.N; ++j) {
      for (const auto& p : approx[i]) {
        if (!approx[j].count(p)) continue;
        if (!corners[i].count(p) || !corners[j].count(p)) {
          return {false, "cells " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                             " share non-vertex point " + p.to_string()};
        }
      }
    }
  }
  return {};
}

AxiomVerdict check_connectivity(const FractalSpec& spec) {
  std::unordered_map<FieldElement, int, FieldElementHash> id;
  std::vector<int> parent;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < spec.N; ++i) {
    int first = -1;
    for (const auto& v : spec.v0) {
      auto [it, inserted] = id.emplace(spec.psi(i, v), static_cast<int>(parent.size()));
      if (inserted) parent.push_back(it->second);
      if (first < 0) {
        first = it->second;
      } else {
        parent[find(it->second)] = find(first);
      }
    }
  }
  const int root = find(0);
  for (int x = 0; x < static_cast<int>(parent.size()); ++x) {
    if (find(x) != root) {
      return {false, "V_-1 graph is disconnected (" + std::to_string(parent.size()) + " vertices)"};
    }
  }
  return {};
}

AxiomVerdict check_koch(const FractalSpec& spec) {
  for (int j = 0; j < spec.k; ++j) {
    int count = 0;
    for (int i = 0; i < spec.N; ++i) {
      for (const auto& p : spec.v0) {
        if (spec.psi(i, p) == spec.v0[j]) ++count;
      }
    }
    if (count != 1) {
      return {false, "V0 point " + std::to_string(j + 1) + " lies in " + std::to_string(count) +
                         " first-level cells"};
    }
  }
  return {};
}

}  // namespace

ValidationReport validate_spec(const FractalSpec& spec, int nesting_depth) {
  if (nesting_depth < 0) throw DomainError("nesting depth must be non-negative");
  double count = static_cast<double>(spec.k);
  for (int d = 0; d <= nesting_depth; ++d) count *= spec.N;
  if (count > static_cast<double>(Budget::current().max_complexes)) {
    throw ResourceError("nesting check at depth " + std::to_string(nesting_depth) + " needs " +
                        std::to_string(static_cast<long long>(count)) + " points");
  }
  ValidationReport r;
  r.nesting_depth = nesting_depth;
  r.essential = essential_fixed_points(spec);
  r.regular_polygon = check_regular_polygon(spec);
  r.symmetry = check_symmetry(spec);
  r.nesting = check_nesting(spec, nesting_depth);
  r.connectivity = check_connectivity(spec);
  r.koch_uniqueness = check_koch(spec);
  r.warnings.push_back("open set condition not checked");
  r.warnings.push_back("nesting checked on vertex approximations to depth " +
                       std::to_string(nesting_depth) + " only");
  return r;
}

}  // namespace nestfold
