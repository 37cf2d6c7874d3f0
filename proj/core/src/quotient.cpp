#include "nestfold/error.hpp"
#include "nestfold/geometry.hpp"
#include "nestfold/walk.hpp"

namespace nestfold {

FoldIndex::FoldIndex(const Folding& folding, const GridGraph& grid, int M)
    : target_(folding.spec(), grid.level(), M - grid.level()) {
  const Window& w = grid.window();
  const FractalSpec& spec = folding.spec();
  if (M < w.level() || M > w.top_level()) throw DomainError("order outside the grid window");
  const Window coarse(spec, M, w.top_level() - M);
  long long block = 1;
  for (int i = 0; i < M - w.level(); ++i) block *= spec.N;
  const FieldElement b = spec.barycenter * spec.scale(M);
  std::vector<int> rot(coarse.complex_count());
  for (int c = 0; c < coarse.complex_count(); ++c) rot[c] = folding.labeling().rotation(coarse.address(c));

  fold_.assign(grid.vertex_count(), -1);
  for (int c = 0; c < w.complex_count(); ++c) {
    const int parent = static_cast<int>(c / block);
    for (int v : w.complex_vertex_ids(c)) {
      const FieldElement image = rotate_about(w.vertex(v) - coarse.anchor(parent), b, rot[parent]);
      const int id = target_.find_vertex(image);
      if (id < 0) throw IntegrityError("fold leaves K^<M> at " + w.vertex(v).to_string());
      if (fold_[v] >= 0 && fold_[v] != id) {
        throw IntegrityError("fold is ambiguous at " + w.vertex(v).to_string());
      }
      fold_[v] = id;
    }
  }
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  const std::size_t p = b.empty() ? 0 : b[0].size();
  Matrix out(n, std::vector<Rational>(p, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < b.size(); ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < p; ++j) {
        if (b[t][j] != 0) out[i][j] += a[i][t] * b[t][j];
      }
    }
  }
  return out;
}

QuotientWalk::QuotientWalk(std::shared_ptr<const GoodLabeling> labeling, int M, int m, int guard)
    : M_(M), m_(m) {
  if (m >= M) throw DomainError("quotient walk needs m < M");
  if (guard < 1) throw DomainError("guard must be at least one level");
  const FractalSpec& spec = labeling->spec();
  const Folding folding(labeling);
  const GridGraph inner(spec, m, M - m);
  const GridGraph grid(spec, m, M - m + guard);
  const FoldIndex fold(folding, grid, M);
  target_ = std::make_shared<const Window>(fold.target());
  const int n = fold.size();

  q_.assign(n, std::vector<Rational>(n, 0));
  reps_.assign(n, 0);
  rep_ranks_.assign(n, {});
  qdeg_.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    const int id = inner.window().find_vertex(target_->vertex(v));
    qdeg_[v] = inner.degree(id);
  }
  for (int v = 0; v < grid.vertex_count(); ++v) {
    if (grid.is_frontier(v)) continue;
    std::vector<Rational> row(n, 0);
    const Rational p(1, grid.degree(v));
    for (int w : grid.neighbors(v)) row[fold.folded(w)] += p;
    const int x = fold.folded(v);
    if (reps_[x] == 0) {
      q_[x] = std::move(row);
    } else if (row != q_[x]) {
      throw IntegrityError("folded kernel depends on the representative at " +
                           target_->vertex(x).to_string() + " (representative " +
                           grid.window().vertex(v).to_string() + ")");
    }
    ++reps_[x];
    rep_ranks_[x].push_back(grid.rank(v));
  }
  for (int x = 0; x < n; ++x) {
    if (reps_[x] == 0) throw IntegrityError("quotient vertex without a representative");
  }
}

std::vector<std::vector<Rational>> QuotientWalk::power(int n) const {
  if (n < 0) throw DomainError("negative power");
  const int s = size();
  Matrix result(s, std::vector<Rational>(s, 0));
  for (int i = 0; i < s; ++i) result[i][i] = 1;
  for (int t = 0; t < n; ++t) result = multiply(result, q_);
  return result;
}

std::vector<std::vector<Rational>> QuotientWalk::rank_weighted(int n) const {
  auto g = power(n);
  const Rational inv(1, target_->spec().k - 1);
  for (auto& row : g) {
    for (auto& x : row) x *= inv;
  }
  return g;
}

FoldedLaw folded_law(const GridGraph& grid, const FoldIndex& fold, int start, int n) {
  const KernelTable t = kernel(grid, start, n, KernelMode::exact);
  FoldedLaw out;
  out.mass.assign(fold.size(), 0);
  for (int v = 0; v < grid.vertex_count(); ++v) {
    if (t.num[n][v] != 0) out.mass[fold.folded(v)] += t.probability(n, v);
  }
  out.escape = t.escape(n);
  return out;
}

std::vector<std::vector<Rational>> prehit_folded_law(const GridGraph& grid, const FoldIndex& fold,
                                                     const std::vector<char>& absorbing, int start,
                                                     int horizon) {
  const int V = grid.vertex_count();
  std::vector<std::vector<Rational>> out;
  std::vector<Rational> cur(V, 0);
  cur[start] = 1;
  for (int t = 0;; ++t) {
    std::vector<Rational> folded(fold.size(), 0);
    for (int v = 0; v < V; ++v) {
      if (cur[v] != 0) folded[fold.folded(v)] += cur[v];
    }
    out.push_back(std::move(folded));
    if (t == horizon) break;
    std::vector<Rational> next(V, 0);
    for (int v = 0; v < V; ++v) {
      if (cur[v] == 0) continue;
      const Rational o = cur[v] / grid.degree(v);
      for (int w : grid.neighbors(v)) next[w] += o;
    }
    for (int v = 0; v < V; ++v) {
      if ((absorbing[v] && v != start) || grid.is_frontier(v)) next[v] = 0;
    }
    cur = std::move(next);
  }
  return out;
}

}  // namespace nestfold
