#include "nestfold/spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "nestfold/error.hpp"
#include "nestfold/geometry.hpp"

namespace nestfold {

namespace {

struct Builtin {
  const char* name;
  const char* text;
};

// Translations are nu_i = x_i (1 - 1/L) for the chosen fixed points x_i.
constexpr Builtin kBuiltins[] = {
    {"gasket", R"({
  "name": "gasket",
  "k": 3,
  "L": 2,
  "N": 3,
  "nu": [
    ["0", "0", "0"],
    ["1/2", "0", "0"],
    ["1/2", "1/2", "0"]
  ]
})"},
    {"vicsek", R"({
  "name": "vicsek",
  "k": 4,
  "L": 3,
  "N": 5,
  "nu": [
    ["0", "0", "0", "0"],
    ["2/3", "0", "0", "0"],
    ["2/3", "2/3", "0", "0"],
    ["0", "2/3", "0", "0"],
    ["1/3", "1/3", "0", "0"]
  ]
})"},
    {"hexagon", R"({
  "name": "hexagon",
  "k": 6,
  "L": 3,
  "N": 6,
  "nu": [
    ["0", "0", "0", "0", "0", "0"],
    ["2/3", "0", "0", "0", "0", "0"],
    ["2/3", "2/3", "0", "0", "0", "0"],
    ["0", "4/3", "0", "0", "0", "0"],
    ["-2/3", "4/3", "0", "0", "0", "0"],
    ["-2/3", "2/3", "0", "0", "0", "0"]
  ]
})"},
    {"snowflake", R"({
  "name": "snowflake",
  "k": 6,
  "L": 3,
  "N": 7,
  "nu": [
    ["0", "0", "0", "0", "0", "0"],
    ["2/3", "0", "0", "0", "0", "0"],
    ["2/3", "2/3", "0", "0", "0", "0"],
    ["0", "4/3", "0", "0", "0", "0"],
    ["-2/3", "4/3", "0", "0", "0", "0"],
    ["-2/3", "2/3", "0", "0", "0", "0"],
    ["0", "2/3", "0", "0", "0", "0"]
  ]
})"},
};

}  // namespace

FieldElement FractalSpec::psi(int i, const FieldElement& x) const {
  return x * Rational(1, L) + nu[i];
}

int FractalSpec::corner_index(const FieldElement& x) const {
  for (std::size_t j = 0; j < v0.size(); ++j) {
    if (v0[j] == x) return static_cast<int>(j);
  }
  return -1;
}

FractalSpec make_spec(std::string name, int k, int L, int N, std::vector<FieldElement> nu,
                      std::map<std::string, double> metadata) {
  if (k < 3) throw ValidationError("k must be at least 3");
  if (L < 2) throw ValidationError("L must be an integer >= 2");
  if (N < k) throw ValidationError("N must be at least k");
  if (static_cast<int>(nu.size()) != N) {
    throw ValidationError("expected " + std::to_string(N) + " translations, got " +
                          std::to_string(nu.size()));
  }
  const auto& field = CyclotomicField::get(k);
  for (const auto& v : nu) {
    if (!v.valid() || &v.field() != &field) throw ValidationError("translation outside Q(zeta_k)");
  }
  if (!nu[0].is_zero()) throw ValidationError("nu_1 must be zero");

  FractalSpec s;
  s.name = std::move(name);
  s.k = k;
  s.L = L;
  s.N = N;
  s.nu = std::move(nu);
  s.metadata = std::move(metadata);
  s.dimension = std::log(static_cast<double>(N)) / std::log(static_cast<double>(L));
  if (!(s.dimension > 0.0 && s.dimension <= 2.0)) {
    throw ValidationError("fractal dimension log N / log L must lie in (0, 2]");
  }

  const Rational ratio(L, L - 1);
  for (const auto& v : s.nu) s.fixed_points.push_back(v * ratio);
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      if (s.fixed_points[i] == s.fixed_points[j]) {
        throw ValidationError("similitudes " + std::to_string(i + 1) + " and " +
                              std::to_string(j + 1) + " coincide");
      }
    }
  }

  const auto essential = essential_fixed_points(s);
  if (static_cast<int>(essential.size()) != k) {
    throw ValidationError("expected " + std::to_string(k) + " essential fixed points, found " +
                          std::to_string(essential.size()));
  }

  FieldElement centroid(field);
  for (const auto& e : essential) centroid += e;
  centroid *= Rational(1, k);
  const auto c = centroid.to_complex();

  std::vector<int> idx;
  for (const auto& e : essential) {
    for (int i = 0; i < N; ++i) {
      if (s.fixed_points[i] == e) {
        idx.push_back(i);
        break;
      }
    }
  }
  auto angle = [&](int i) {
    const auto z = s.fixed_points[i].to_complex() - c;
    return std::atan2(z.imag(), z.real());
  };
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return angle(a) < angle(b); });
  auto start = std::find(idx.begin(), idx.end(), 0);
  if (start != idx.end()) std::rotate(idx.begin(), start, idx.end());
  s.essential_index = idx;
  for (int i : idx) s.v0.push_back(s.fixed_points[i]);
  s.barycenter = centroid;
  return s;
}

FractalSpec parse_spec(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(key)) {
      throw ValidationError(std::string("spec missing field '") + key + "'");
    }
    return doc.at(key);
  };
  try {
    const std::string name = need("name").get<std::string>();
    const int k = need("k").get<int>();
    const int L = need("L").get<int>();
    const int N = need("N").get<int>();
    const auto& rows = need("nu");
    if (!rows.is_array()) throw ValidationError("'nu' must be an array");
    if (k < 3 || k > 200) throw ValidationError("k out of range");
    const auto& field = CyclotomicField::get(k);
    std::vector<FieldElement> nu;
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != k) {
        throw ValidationError("each translation needs exactly k coefficients");
      }
      std::vector<Rational> coeffs;
      for (const auto& c : row) {
        if (c.is_string()) {
          coeffs.push_back(parse_rational(c.get<std::string>()));
        } else if (c.is_number_integer()) {
          coeffs.push_back(Rational(c.get<long>()));
        } else {
          throw ValidationError("coefficients must be integers or \"p/q\" strings");
        }
      }
      nu.push_back(FieldElement::from_coefficients(field, coeffs));
    }
    std::map<std::string, double> meta;
    if (doc.contains("metadata")) {
      for (auto it = doc["metadata"].begin(); it != doc["metadata"].end(); ++it) {
        if (it.value().is_number()) meta[it.key()] = it.value().get<double>();
      }
    }
    return make_spec(name, k, L, N, std::move(nu), std::move(meta));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed spec: ") + e.what());
  }
}

std::string serialize_spec(const FractalSpec& spec) {
  nlohmann::ordered_json doc;
  doc["name"] = spec.name;
  doc["k"] = spec.k;
  doc["L"] = spec.L;
  doc["N"] = spec.N;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& v : spec.nu) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& c : v.expanded()) row.push_back(to_string(c));
    rows.push_back(row);
  }
  doc["nu"] = rows;
  if (!spec.metadata.empty()) {
    for (const auto& [key, value] : spec.metadata) doc["metadata"][key] = value;
  }
  return doc.dump(2);
}

std::vector<std::string> builtin_spec_names() {
  std::vector<std::string> names;
  for (const auto& b : kBuiltins) names.emplace_back(b.name);
  return names;
}

std::string builtin_spec_text(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (name == b.name) return b.text;
  }
  throw ValidationError("unknown builtin spec '" + std::string(name) + "'");
}

FractalSpec load_spec(std::string_view ref) {
  constexpr std::string_view prefix = "builtin:";
  if (ref.substr(0, prefix.size()) == prefix) {
    return parse_spec(builtin_spec_text(ref.substr(prefix.size())));
  }
  std::ifstream in{std::string(ref)};
  if (!in) throw ValidationError("cannot open spec file '" + std::string(ref) + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace nestfold
