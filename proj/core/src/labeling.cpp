#include "nestfold/labeling.hpp"

#include <algorithm>
#include <deque>

#include "nestfold/error.hpp"
#include "nestfold/geometry.hpp"

namespace nestfold {

namespace {

int mod(long a, int k) {
  long r = a % k;
  return static_cast<int>(r < 0 ? r + k : r);
}

std::vector<int> inverse_seed(const std::vector<int>& seed) {
  std::vector<int> inv(seed.size(), -1);
  for (std::size_t j = 0; j < seed.size(); ++j) {
    if (seed[j] < 0 || seed[j] >= static_cast<int>(seed.size()) || inv[seed[j]] != -1) {
      throw DomainError("seed is not a bijection onto the alphabet");
    }
    inv[seed[j]] = static_cast<int>(j);
  }
  return inv;
}

std::vector<ComplexAddress> chain_of(const Window& w, const std::vector<int>& parent, int c) {
  std::vector<ComplexAddress> chain;
  for (; c >= 0; c = parent[c]) chain.push_back(w.address(c).normalized());
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace

std::vector<int> identity_seed(int k) {
  std::vector<int> s(k);
  for (int j = 0; j < k; ++j) s[j] = j;
  return s;
}

PropagationResult propagate_labels(std::shared_ptr<const Window> window, const std::vector<int>& seed) {
  const Window& w = *window;
  const int k = w.spec().k;
  if (static_cast<int>(seed.size()) != k) throw DomainError("seed must have k entries");
  const auto inv = inverse_seed(seed);

  Labeling lab;
  lab.order = w.level();
  lab.seed = seed;
  lab.window = window;
  lab.labels.assign(w.vertex_count(), -1);
  lab.rotations.assign(w.complex_count(), -1);
  lab.parent.assign(w.complex_count(), -1);
  std::vector<int> owner(w.vertex_count(), -1);

  auto assign = [&](int c, int r) -> std::optional<Conflict> {
    lab.rotations[c] = r;
    const auto ids = w.complex_vertex_ids(c);
    for (int j = 0; j < k; ++j) {
      const int v = ids[j];
      const int want = seed[(j + r) % k];
      if (lab.labels[v] < 0) {
        lab.labels[v] = want;
        owner[v] = c;
      } else if (lab.labels[v] != want) {
        Conflict cf;
        cf.vertex = w.vertex(v);
        cf.label_a = lab.labels[v];
        cf.label_b = want;
        cf.chain_a = chain_of(w, lab.parent, owner[v]);
        cf.chain_b = chain_of(w, lab.parent, c);
        return cf;
      }
    }
    return std::nullopt;
  };

  PropagationResult result;
  if (auto cf = assign(0, 0)) {
    result.conflict = std::move(cf);
    return result;
  }
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    const auto cids = w.complex_vertex_ids(c);
    for (int d : w.adjacent(c)) {
      if (lab.rotations[d] >= 0) continue;
      lab.parent[d] = c;
      const auto dids = w.complex_vertex_ids(d);
      int r = -1;
      for (int j = 0; j < k && r < 0; ++j) {
        if (std::find(cids.begin(), cids.end(), dids[j]) != cids.end()) {
          r = mod(static_cast<long>(inv[lab.labels[dids[j]]]) - j, k);
        }
      }
      if (auto cf = assign(d, r)) {
        result.conflict = std::move(cf);
        return result;
      }
      queue.push_back(d);
    }
  }
  for (int c = 0; c < w.complex_count(); ++c) {
    if (lab.rotations[c] < 0) {
      throw ValidationError("complex adjacency graph is disconnected at " + w.address(c).to_string());
    }
  }
  result.labeling = std::move(lab);
  return result;
}

PropagationResult check_glp(const FractalSpec& spec, const std::vector<int>& seed) {
  return propagate_labels(std::make_shared<const Window>(spec, 0, 1), seed);
}

int rotation_for_complex(const Labeling& labeling, const ComplexAddress& addr) {
  const Window& w = *labeling.window;
  const int c = w.index_of(addr);
  if (c < 0) throw DomainError("complex " + addr.to_string() + " is not in the labelled window");
  const int k = w.spec().k;
  const auto ids = w.complex_vertex_ids(c);
  for (int r = 0; r < k; ++r) {
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) ok = labeling.labels[ids[j]] == labeling.seed[(j + r) % k];
    if (ok) return r;
  }
  throw IntegrityError("no rotation reproduces the labels of " + addr.to_string());
}

int replay_chain(const FractalSpec& spec, const std::vector<int>& seed,
                 const std::vector<ComplexAddress>& chain, const FieldElement& vertex) {
  if (chain.empty()) return -1;
  const int k = spec.k;
  const auto inv = inverse_seed(seed);
  std::vector<FieldElement> prev = complex_vertices(spec, chain.front());
  int r = 0;
  for (std::size_t t = 1; t < chain.size(); ++t) {
    const auto cur = complex_vertices(spec, chain[t]);
    int next_r = -1;
    for (int j = 0; j < k && next_r < 0; ++j) {
      for (int i = 0; i < k; ++i) {
        if (prev[i] == cur[j]) {
          next_r = mod(static_cast<long>(inv[seed[(i + r) % k]]) - j, k);
          break;
        }
      }
    }
    if (next_r < 0) return -1;
    r = next_r;
    prev = cur;
  }
  for (int j = 0; j < k; ++j) {
    if (prev[j] == vertex) return seed[(j + r) % k];
  }
  return -1;
}

int triangle_closed_form(const FractalSpec& spec, long n1, long n2) {
  if (spec.k != 3) throw DomainError("triangle closed form needs k = 3");
  constexpr int p1[3] = {1, 2, 0};  // (a b c)
  constexpr int p2[3] = {2, 0, 1};  // (a c b)
  int x = 0;
  for (int t = 0; t < mod(n2, 3); ++t) x = p2[x];
  for (int t = 0; t < mod(n1, 3); ++t) x = p1[x];
  return x;
}

TwoClassResult two_class_partition(const FractalSpec& spec) {
  if (spec.k % 2 != 0) throw DomainError("two-class partition needs even k");
  const Window w(spec, 0, 1);
  const int n = w.complex_count();
  TwoClassResult res;
  std::vector<int> color(n, -1), parent(n, -1), depth(n, 0);
  color[0] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    for (int d : w.adjacent(c)) {
      if (color[d] < 0) {
        color[d] = 1 - color[c];
        parent[d] = c;
        depth[d] = depth[c] + 1;
        queue.push_back(d);
      } else if (color[d] == color[c]) {
        std::vector<int> left, right;
        int a = c, b = d;
        while (depth[a] > depth[b]) { left.push_back(a); a = parent[a]; }
        while (depth[b] > depth[a]) { right.push_back(b); b = parent[b]; }
        while (a != b) {
          left.push_back(a);
          right.push_back(b);
          a = parent[a];
          b = parent[b];
        }
        left.push_back(a);
        std::reverse(right.begin(), right.end());
        left.insert(left.end(), right.begin(), right.end());
        res.bipartite = false;
        res.odd_cycle = left;
        return res;
      }
    }
  }
  res.bipartite = true;
  res.color = color;
  return res;
}

// ---------------------------------------------------------------------------

GoodLabeling::GoodLabeling(const FractalSpec& spec, std::vector<int> seed)
    : spec_(spec), seed_(std::move(seed)) {
  auto res = check_glp(spec_, seed_);
  if (!res.ok()) throw DomainError(spec_.name + " does not have the good labelling property");
  base_ = res.labeling->rotations;
  perm_.assign(spec_.k, std::vector<int>(spec_.N, -1));
  for (int r = 0; r < spec_.k; ++r) {
    for (int i = 0; i < spec_.N; ++i) {
      const FieldElement y = rotate_about(spec_.fixed_points[i], spec_.barycenter, r);
      for (int j = 0; j < spec_.N; ++j) {
        if (spec_.fixed_points[j] == y) perm_[r][i] = j;
      }
      if (perm_[r][i] < 0) {
        throw IntegrityError("rotation about the barycenter does not permute the similitudes");
      }
    }
  }
}

int GoodLabeling::permute_digit(int r, int digit) const { return perm_[mod(r, spec_.k)][digit]; }

int GoodLabeling::rotation(const ComplexAddress& addr) const {
  int s = 0;
  for (int d : addr.word) {
    const int e = perm_[s][d];
    s = (s + base_[e]) % spec_.k;
  }
  return s;
}

int GoodLabeling::label_of(const ComplexAddress& addr, int j) const {
  return seed_[(j + rotation(addr)) % spec_.k];
}

int GoodLabeling::label_vertex(const FieldElement& v, int M) const {
  const Point p{v, M};
  int top;
  try {
    top = enclosing_level(spec_, p, M);
  } catch (const ResourceError&) {
    throw DomainError(v.to_string() + " is not a level-" + std::to_string(M) + " vertex");
  }
  FieldElement cur = v;
  for (int t = top; t > M; --t) {
    const auto found = containing_complexes_in(spec_, Point{cur, M}, t - 1, ComplexAddress{t, {}});
    if (found.empty()) throw IntegrityError("label recursion lost the point " + cur.to_string());
    const int d = found.front().word.empty() ? 0 : found.front().word.front();
    const FieldElement b = spec_.barycenter * spec_.scale(t - 1);
    cur = rotate_about(cur - spec_.nu[d] * spec_.scale(t), b, base_[d]);
  }
  const int j = spec_.corner_index(cur * spec_.scale(-M));
  if (j < 0) throw IntegrityError("label recursion did not end on a corner");
  return seed_[j];
}

}  // namespace nestfold
