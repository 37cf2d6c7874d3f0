#include "nestfold/complexes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nestfold/error.hpp"

namespace nestfold {

ComplexAddress ComplexAddress::normalized() const {
  ComplexAddress out{level, {}};
  auto it = std::find_if(word.begin(), word.end(), [](int d) { return d != 0; });
  out.word.assign(it, word.end());
  return out;
}

ComplexAddress ComplexAddress::ancestor(int M) const {
  if (M < level) throw DomainError("ancestor level below the complex level");
  const long keep = static_cast<long>(word.size()) - (M - level);
  ComplexAddress out{M, {}};
  if (keep > 0) out.word.assign(word.begin(), word.begin() + keep);
  return out.normalized();
}

std::vector<int> ComplexAddress::padded_word(int top) const {
  const ComplexAddress n = normalized();
  const int len = top - level;
  if (len < static_cast<int>(n.word.size())) {
    throw DomainError("complex " + to_string() + " lies outside K^<" + std::to_string(top) + ">");
  }
  std::vector<int> out(len - n.word.size(), 0);
  out.insert(out.end(), n.word.begin(), n.word.end());
  return out;
}

bool ComplexAddress::contains(const ComplexAddress& finer) const {
  if (finer.level > level) return false;
  return finer.ancestor(level) == *this;
}

std::string ComplexAddress::to_string() const {
  std::string s = std::to_string(level) + ":(";
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(word[i] + 1);
  }
  return s + ")";
}

ComplexAddress ComplexAddress::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  const auto colon = s.find(':');
  if (colon == std::string::npos || s.size() < colon + 3 || s[colon + 1] != '(' || s.back() != ')') {
    throw ValidationError("address must look like M:(d1,d2,...): '" + std::string(text) + "'");
  }
  ComplexAddress a;
  try {
    a.level = std::stoi(s.substr(0, colon));
  } catch (const std::exception&) {
    throw ValidationError("bad address level in '" + std::string(text) + "'");
  }
  std::string body = s.substr(colon + 2, s.size() - colon - 3);
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw ValidationError("empty digit in address '" + std::string(text) + "'");
    int d = 0;
    try {
      d = std::stoi(tok);
    } catch (const std::exception&) {
      throw ValidationError("bad digit in address '" + std::string(text) + "'");
    }
    if (d < 1) throw ValidationError("address digits are 1-based");
    a.word.push_back(d - 1);
  }
  return a;
}

bool operator==(const ComplexAddress& a, const ComplexAddress& b) {
  if (a.level != b.level) return false;
  return a.normalized().word == b.normalized().word;
}

std::size_t ComplexAddressHash::operator()(const ComplexAddress& a) const {
  const auto n = a.normalized();
  std::size_t h = std::hash<int>()(n.level);
  for (int d : n.word) h = h * 1000003u + static_cast<std::size_t>(d) + 1;
  return h;
}

FieldElement complex_anchor(const FractalSpec& spec, const ComplexAddress& addr) {
  FieldElement a = spec.zero();
  const int m = static_cast<int>(addr.word.size());
  for (int t = 0; t < m; ++t) {
    const int d = addr.word[t];
    if (d < 0 || d >= spec.N) throw DomainError("address digit out of range");
    if (d == 0) continue;
    // word[t] sits at level M + m - t.
    a += spec.nu[d] * spec.scale(addr.level + m - t);
  }
  return a;
}

std::vector<FieldElement> complex_vertices(const FractalSpec& spec, const ComplexAddress& addr) {
  const FieldElement a = complex_anchor(spec, addr);
  const Rational s = spec.scale(addr.level);
  std::vector<FieldElement> out;
  out.reserve(spec.k);
  for (const auto& v : spec.v0) out.push_back(v * s + a);
  return out;
}

FieldElement complex_barycenter(const FractalSpec& spec, const ComplexAddress& addr) {
  return spec.barycenter * spec.scale(addr.level) + complex_anchor(spec, addr);
}

double bounding_radius(const FractalSpec& spec) {
  const auto b = spec.barycenter.to_complex();
  double m = 0.0;
  for (int i = 0; i < spec.N; ++i) m = std::max(m, std::abs(spec.psi(i, spec.barycenter).to_complex() - b));
  const double rho = m * spec.L / (spec.L - 1.0);
  return rho * (1.0 + 1e-9) + 1e-12;
}

namespace {

class Descent {
 public:
  Descent(const FractalSpec& spec, const Point& x, int M)
      : s_(spec), x_(x.value), xs_(x.value.to_complex()), M_(M), g_(std::min(x.grid, M)),
        rho_(bounding_radius(spec)), b0_(spec.barycenter.to_complex()) {
    for (const auto& v : spec.nu) nu_.push_back(v.to_complex());
  }

  std::vector<ComplexAddress> run(int root_level, const FieldElement& root_anchor,
                                  const std::vector<int>& root_word) {
    out_.clear();
    word_ = root_word;
    const bool hit = visit(root_level, root_anchor, root_anchor.to_complex());
    if (hit && root_level == M_ && g_ < M_) out_.push_back(ComplexAddress{M_, word_}.normalized());
    return out_;
  }

 private:
  bool near(int level, std::complex<double> anchor) const {
    const double scale = std::pow(static_cast<double>(s_.L), level);
    const std::complex<double> c = scale * b0_ + anchor;
    return std::abs(xs_ - c) <= scale * rho_ + 1e-12 * (std::abs(xs_) + 1.0);
  }

  bool is_vertex(int level, const FieldElement& anchor) const {
    const FieldElement y = (x_ - anchor) * s_.scale(-level);
    return s_.corner_index(y) >= 0;
  }

  // Returns true when the point was found in this subtree below level M.
  bool visit(int level, const FieldElement& anchor, std::complex<double> anchor_sh) {
    if (!near(level, anchor_sh)) return false;
    if (level == M_ && g_ == M_) {
      if (is_vertex(level, anchor)) {
        out_.push_back(ComplexAddress{M_, word_}.normalized());
        return true;
      }
      return false;
    }
    if (level == g_) return is_vertex(level, anchor);
    const Rational sc = s_.scale(level);
    const double scd = std::pow(static_cast<double>(s_.L), level);
    for (int i = 0; i < s_.N; ++i) {
      const std::complex<double> child_sh = anchor_sh + scd * nu_[i];
      if (!near(level - 1, child_sh)) continue;
      const FieldElement child = i == 0 ? anchor : anchor + s_.nu[i] * sc;
      if (level > M_) {
        word_.push_back(i);
        const bool hit = visit(level - 1, child, child_sh);
        word_.pop_back();
        if (hit && level - 1 == M_ && g_ < M_) out_.push_back(ComplexAddress{M_, word_with(i)}.normalized());
      } else if (visit(level - 1, child, child_sh)) {
        return true;
      }
    }
    return false;
  }

  std::vector<int> word_with(int i) const {
    std::vector<int> w = word_;
    w.push_back(i);
    return w;
  }

  const FractalSpec& s_;
  const FieldElement& x_;
  std::complex<double> xs_;
  int M_;
  int g_;
  double rho_;
  std::complex<double> b0_;
  std::vector<std::complex<double>> nu_;
  std::vector<int> word_;
  std::vector<ComplexAddress> out_;
};

}  // namespace

int enclosing_level(const FractalSpec& spec, const Point& x, int floor) {
  Descent d(spec, x, floor);
  const int limit = floor + Budget::current().max_depth;
  // Every point of K^<oo> outside K^<t> is at least L^t * reach from the
  // origin, so a miss inside that radius is final.
  const auto b0 = spec.barycenter.to_complex();
  double reach = INFINITY;
  for (int i = 1; i < spec.N; ++i) {
    reach = std::min(reach, std::abs(b0 + static_cast<double>(spec.L) * spec.nu[i].to_complex()) -
                                bounding_radius(spec));
  }
  const double r = std::abs(x.value.to_complex());
  for (int t = floor; t <= limit; ++t) {
    if (!d.run(t, spec.zero(), {}).empty()) return t;
    if (reach > 0 && r * (1 + 1e-9) < std::pow(static_cast<double>(spec.L), t) * reach) {
      throw DomainError("point " + x.value.to_string() + " is not a level-" + std::to_string(x.grid) +
                        " vertex of the fractal");
    }
  }
  throw ResourceError("point " + x.value.to_string() + " not found in K^<" + std::to_string(limit) +
                      ">");
}

std::vector<ComplexAddress> containing_complexes(const FractalSpec& spec, const Point& x, int M) {
  const int top = enclosing_level(spec, x, M) + 1;
  Descent d(spec, x, M);
  return d.run(top, spec.zero(), {});
}

std::vector<ComplexAddress> containing_complexes_in(const FractalSpec& spec, const Point& x, int M,
                                                    const ComplexAddress& root) {
  if (root.level < M) throw DomainError("root complex finer than the target level");
  Descent d(spec, x, M);
  return d.run(root.level, complex_anchor(spec, root), root.word);
}

int rank(const FractalSpec& spec, const FieldElement& v, int M) {
  Point p{v, M};
  int top;
  try {
    top = enclosing_level(spec, p, M) + 1;
  } catch (const ResourceError&) {
    throw DomainError(v.to_string() + " is not a level-" + std::to_string(M) + " vertex");
  }
  Descent d(spec, p, M);
  return static_cast<int>(d.run(top, spec.zero(), {}).size());
}

Point locate_point(const FractalSpec& spec, const FieldElement& x, int coarsest, int finest) {
  for (int g = coarsest; g >= finest; --g) {
    Point p{x, g};
    Descent d(spec, p, g);
    const int limit = g + Budget::current().max_depth;
    for (int t = g; t <= limit; ++t) {
      if (!d.run(t, spec.zero(), {}).empty()) return p;
    }
  }
  throw DomainError(x.to_string() + " is not a grid vertex between levels " +
                    std::to_string(finest) + " and " + std::to_string(coarsest));
}

// ---------------------------------------------------------------------------

Window::Window(const FractalSpec& spec, int level, int depth)
    : spec_(spec), level_(level), depth_(depth) {
  if (depth < 0) throw DomainError("window depth must be non-negative");
  double count = 1.0;
  for (int i = 0; i < depth; ++i) count *= spec.N;
  if (count > static_cast<double>(Budget::current().max_complexes)) {
    throw ResourceError("window needs " + std::to_string(static_cast<long long>(count)) +
                        " complexes, budget is " +
                        std::to_string(Budget::current().max_complexes) +
                        " (NESTFOLD_MAX_COMPLEXES)");
  }
  anchors_.push_back(spec.zero());
  for (int t = 0; t < depth; ++t) {
    const Rational sc = spec.scale(level + depth - t);
    std::vector<FieldElement> shifts;
    for (int i = 0; i < spec.N; ++i) shifts.push_back(spec.nu[i] * sc);
    std::vector<FieldElement> next;
    next.reserve(anchors_.size() * spec.N);
    for (const auto& a : anchors_) {
      for (int i = 0; i < spec.N; ++i) next.push_back(a + shifts[i]);
    }
    anchors_ = std::move(next);
  }

  const Rational sc = spec.scale(level);
  std::vector<FieldElement> base;
  for (const auto& v : spec.v0) base.push_back(v * sc);
  cv_.reserve(anchors_.size() * spec.k);
  std::vector<std::vector<int>> inc;
  for (int c = 0; c < complex_count(); ++c) {
    for (int j = 0; j < spec.k; ++j) {
      FieldElement p = base[j] + anchors_[c];
      auto [it, inserted] = vertex_id_.emplace(p, vertex_count());
      if (inserted) {
        shadows_.push_back(p.to_complex());
        vertices_.push_back(std::move(p));
        inc.emplace_back();
      }
      cv_.push_back(it->second);
      inc[it->second].push_back(c);
    }
  }
  inc_offset_.push_back(0);
  for (const auto& l : inc) {
    inc_.insert(inc_.end(), l.begin(), l.end());
    inc_offset_.push_back(static_cast<int>(inc_.size()));
  }
  adj_offset_.push_back(0);
  for (int c = 0; c < complex_count(); ++c) {
    std::vector<int> nb;
    for (int v : complex_vertex_ids(c)) {
      for (int d : incident(v)) {
        if (d != c) nb.push_back(d);
      }
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    adj_.insert(adj_.end(), nb.begin(), nb.end());
    adj_offset_.push_back(static_cast<int>(adj_.size()));
  }
}

ComplexAddress Window::address(int c) const {
  ComplexAddress a{level_, std::vector<int>(depth_, 0)};
  for (int t = depth_ - 1; t >= 0; --t) {
    a.word[t] = c % spec_.N;
    c /= spec_.N;
  }
  return a;
}

int Window::index_of(const ComplexAddress& addr) const {
  if (addr.level != level_) return -1;
  const auto n = addr.normalized();
  if (static_cast<int>(n.word.size()) > depth_) return -1;
  int idx = 0;
  for (int d : addr.padded_word(top_level())) idx = idx * spec_.N + d;
  return idx;
}

std::span<const int> Window::complex_vertex_ids(int c) const {
  return {cv_.data() + static_cast<std::size_t>(c) * spec_.k, static_cast<std::size_t>(spec_.k)};
}

int Window::find_vertex(const FieldElement& x) const {
  auto it = vertex_id_.find(x);
  return it == vertex_id_.end() ? -1 : it->second;
}

std::span<const int> Window::incident(int v) const {
  return {inc_.data() + inc_offset_[v], static_cast<std::size_t>(inc_offset_[v + 1] - inc_offset_[v])};
}

std::span<const int> Window::adjacent(int c) const {
  return {adj_.data() + adj_offset_[c], static_cast<std::size_t>(adj_offset_[c + 1] - adj_offset_[c])};
}

std::vector<int> Window::corner_ids() const {
  std::vector<int> out;
  const Rational sc = spec_.scale(top_level());
  for (const auto& v : spec_.v0) out.push_back(find_vertex(v * sc));
  return out;
}

std::vector<int> Window::containing(const Point& x) const {
  const auto found = containing_complexes_in(spec_, x, level_, ComplexAddress{top_level(), {}});
  if (found.empty()) {
    throw DomainError("point " + x.value.to_string() + " lies outside the window");
  }
  std::vector<int> out;
  for (const auto& a : found) out.push_back(index_of(a));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nestfold
