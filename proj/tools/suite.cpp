#include "suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "nestfold/error.hpp"
#include "nestfold/labeling.hpp"
#include "nestfold/metric.hpp"
#include "nestfold/projection.hpp"
#include "nestfold/walk.hpp"

namespace nestfold::suite {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool has_glp(const FractalSpec& s) { return check_glp(s).ok(); }

std::vector<FractalSpec> glp_only(const std::vector<FractalSpec>& specs) {
  std::vector<FractalSpec> out;
  for (const auto& s : specs) {
    if (has_glp(s)) out.push_back(s);
  }
  return out;
}

Criterion make(int id, std::string title) {
  Criterion c;
  c.id = id;
  c.title = std::move(title);
  c.pass = true;
  return c;
}

void note(Criterion& c, const std::string& text) {
  if (!c.detail.empty()) c.detail += "; ";
  c.detail += text;
}

void fail(Criterion& c, const std::string& text) {
  c.pass = false;
  note(c, text);
}

Criterion not_applicable(Criterion c) {
  c.applicable = false;
  c.pass = true;
  note(c, "no applicable spec");
  return c;
}

// Runs body and turns library errors into a failed criterion.
template <typename Body>
Criterion guarded(Criterion c, Body body) {
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    fail(c, std::string("error: ") + e.what());
  }
  c.seconds = since(t0);
  return c;
}

Point rank_two_representative(const Folding& fold, const Point& y, int M) {
  const FractalSpec& s = fold.spec();
  const Window w(s, M, 2);
  for (const Point& p : fold.fiber(y, w)) {
    if (rank(s, p.value, M) == 2) return p;
  }
  throw IntegrityError("no rank-2 representative of " + y.value.to_string());
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

int expected_glp(const FractalSpec& spec) {
  static const std::map<std::string, int> known = {
      {"gasket", 1}, {"vicsek", 1}, {"hexagon", 1}, {"snowflake", 0}};
  auto it = known.find(spec.name);
  return it == known.end() ? -1 : it->second;
}

Criterion glp_verdicts(const std::vector<FractalSpec>& specs) {
  return guarded(make(1, "GLP verdicts"), [&](Criterion& c) {
    const auto t0 = Clock::now();
    for (const auto& s : specs) {
      const auto res = check_glp(s);
      const int want = expected_glp(s);
      note(c, s.name + (res.ok() ? " glp" : " no-glp"));
      if (want >= 0 && res.ok() != (want == 1)) fail(c, s.name + " verdict differs from the expected one");
      if (!res.ok()) {
        const Conflict& k = *res.conflict;
        const auto seed = identity_seed(s.k);
        const int a = replay_chain(s, seed, k.chain_a, k.vertex);
        const int b = replay_chain(s, seed, k.chain_b, k.vertex);
        if (a != k.label_a || b != k.label_b || a == b) fail(c, s.name + " conflict does not replay");
      }
    }
    if (since(t0) >= 5.0) fail(c, "runtime " + fmt(since(t0)) + " s");
  });
}

Criterion labelling_uniqueness(const std::vector<FractalSpec>& specs) {
  const auto glp = glp_only(specs);
  if (glp.empty()) return not_applicable(make(2, "labelling uniqueness"));
  return guarded(make(2, "labelling uniqueness"), [&](Criterion& c) {
    for (const auto& s : glp) {
      auto w = std::make_shared<const Window>(s, 0, 2);
      std::vector<int> other = identity_seed(s.k);
      std::reverse(other.begin(), other.end());
      std::rotate(other.begin(), other.begin() + 1, other.end());
      const auto a = propagate_labels(w, identity_seed(s.k));
      const auto b = propagate_labels(w, other);
      if (!a.ok() || !b.ok()) {
        fail(c, s.name + " propagation failed");
        continue;
      }
      int bad = 0;
      for (int v = 0; v < w->vertex_count(); ++v) {
        if (b.labeling->labels[v] != other[a.labeling->labels[v]]) ++bad;
      }
      note(c, s.name + " " + std::to_string(w->vertex_count()) + " vertices, " + std::to_string(bad) +
                  " exceptions");
      if (bad) c.pass = false;
    }
  });
}

Criterion triangle_oracle(const std::vector<FractalSpec>& specs) {
  std::vector<FractalSpec> tri;
  for (const auto& s : specs) {
    if (s.k == 3 && has_glp(s)) tri.push_back(s);
  }
  if (tri.empty()) return not_applicable(make(3, "triangle closed form"));
  return guarded(make(3, "triangle closed form"), [&](Criterion& c) {
    for (const auto& s : tri) {
      const GoodLabeling lab(s);
      for (int depth : {3, 4}) {
        const Window w(s, 0, depth);
        int checked = 0, bad = 0;
        for (const auto& v : w.vertices()) {
          const auto co = v.coefficients();
          if (co[0].get_den() != 1 || co[1].get_den() != 1) continue;
          const long n2 = co[1].get_num().get_si();
          const long n1 = co[0].get_num().get_si() - n2;
          ++checked;
          if (lab.label_vertex(v, 0) != triangle_closed_form(s, n1, n2)) ++bad;
        }
        note(c, s.name + " depth " + std::to_string(depth) + ": " + std::to_string(checked) +
                    " vertices, " + std::to_string(bad) + " mismatches");
        if (bad) c.pass = false;
        if (depth == 4 && checked < 100) fail(c, "fewer than 100 lattice vertices");
      }
    }
  });
}

Criterion even_k_characterization(const std::vector<FractalSpec>& specs) {
  std::vector<FractalSpec> even;
  for (const auto& s : specs) {
    if (s.k % 2 == 0) even.push_back(s);
  }
  if (even.empty()) return not_applicable(make(4, "even-k characterization"));
  return guarded(make(4, "even-k characterization"), [&](Criterion& c) {
    int agree = 0;
    for (const auto& s : even) {
      const bool g = check_glp(s).ok();
      const bool bip = two_class_partition(s).bipartite;
      if (g == bip) {
        ++agree;
      } else {
        fail(c, s.name + " disagrees");
      }
    }
    note(c, std::to_string(agree) + "/" + std::to_string(even.size()) + " agreements");
  });
}

Criterion projection_composition(const std::vector<FractalSpec>& specs, std::uint64_t seed) {
  const auto glp = glp_only(specs);
  if (glp.empty()) return not_applicable(make(5, "projection composition"));
  return guarded(make(5, "projection composition"), [&](Criterion& c) {
    constexpr int kTop = 4;
    constexpr int kSamples = 1000;
    for (const auto& s : glp) {
      std::mt19937_64 rng(seed);
      const Folding fold(std::make_shared<const GoodLabeling>(s));
      const Window w(s, 0, 3);
      std::uniform_int_distribution<int> vertex(0, w.vertex_count() - 1);
      std::uniform_int_distribution<int> digit(0, s.N - 1);
      int bad = 0;
      for (int i = 0; i < kSamples; ++i) {
        const Point x{w.vertex(vertex(rng)), 0};
        const int coarse = std::uniform_int_distribution<int>(1, kTop)(rng);
        const int fine = std::uniform_int_distribution<int>(0, coarse - 1)(rng);
        ComplexAddress big{coarse, {}};
        for (int t = coarse; t < kTop; ++t) big.word.push_back(digit(rng));
        ComplexAddress small{fine, big.word};
        for (int t = fine; t < coarse; ++t) small.word.push_back(digit(rng));
        const Point direct = fold.project_to(x, small);
        const Point via_big = fold.project_to(fold.project_to(x, big), small);
        const Point via_small = fold.project_to(direct, big);
        if (!(direct.value == via_big.value) || !(direct.value == via_small.value)) ++bad;
      }
      note(c, s.name + " " + std::to_string(kSamples) + " instances, " + std::to_string(bad) + " failures");
      if (bad) c.pass = false;
    }
  });
}

Criterion metric_bounds(const std::vector<FractalSpec>& specs, std::uint64_t seed) {
  return guarded(make(6, "metric constants"), [&](Criterion& c) {
    const auto t0 = Clock::now();
    for (const auto& s : specs) {
      const auto c2 = min_gap_C5(s, 2, 1e-6);
      const auto c3 = min_gap_C5(s, 3, 1e-6);
      const bool overlap = std::max(c2.lo, c3.lo) <= std::min(c2.hi, c3.hi);
      if (!overlap) fail(c, s.name + " C5 brackets disjoint");
      const auto diam = diameter_bracket(s, 1e-6);
      auto constants = metric_constants(s, 0, c2, diam);
      constants.C8 = fit_C8(s, 0, 2, 6).C8;
      const auto rep = verify_comparison(s, 0, 10000, seed, constants);
      note(c, s.name + " C5=[" + fmt(c2.lo.get_d()) + "," + fmt(c2.hi.get_d()) + "] violations " +
                  std::to_string(rep.violations.size()));
      if (!rep.violations.empty()) c.pass = false;
    }
    if (since(t0) >= 60.0) fail(c, "runtime " + fmt(since(t0)) + " s");
  });
}

Criterion hitting_invariance(const std::vector<FractalSpec>& specs) {
  const auto glp = glp_only(specs);
  if (glp.empty()) return not_applicable(make(7, "hitting law invariance"));
  return guarded(make(7, "hitting law invariance"), [&](Criterion& c) {
    constexpr int M = 1, m = 0, horizon = 200;
    const Rational bound(1, 100000000);
    for (const auto& s : glp) {
      auto lab = std::make_shared<const GoodLabeling>(s);
      const Folding fold(lab);
      const Point y{s.zero(), M};
      const Point other = rank_two_representative(fold, y, M);
      const auto a = hitting_law(*lab, y, M, m, horizon, 2);
      const auto b = hitting_law(*lab, other, M, m, horizon, 2);
      if (a.law != b.law) fail(c, s.name + " laws differ");
      for (int j = 1; j <= 2; ++j) {
        const Rational r = std::max(a.residual[j - 1], b.residual[j - 1]);
        note(c, s.name + " j=" + std::to_string(j) + " residual " + fmt(r.get_d()));
        if (!(r < bound)) fail(c, s.name + " j=" + std::to_string(j) + " residual above 1e-8");
      }
    }
  });
}

Criterion fiber_invariance(const std::vector<FractalSpec>& specs) {
  const auto glp = glp_only(specs);
  if (glp.empty()) return not_applicable(make(8, "folded law invariance"));
  return guarded(make(8, "folded law invariance"), [&](Criterion& c) {
    constexpr int M = 1, m = 0, n = 20;
    for (const auto& s : glp) {
      const Folding fold(std::make_shared<const GoodLabeling>(s));
      const Window target(s, m, M - m);
      const Window cover(s, M, 2);
      int compared = 0;
      for (int q : {0, target.vertex_count() / 2}) {
        const auto reps = fold.fiber(Point{target.vertex(q), m}, cover);
        std::vector<FoldedLaw> exact, tight;
        for (std::size_t r = 0; r < reps.size() && r < 4; ++r) {
          const auto big = grid_around(s, m, reps[r], n);
          const FoldIndex fi(fold, *big, M);
          exact.push_back(folded_law(*big, fi, big->window().find_vertex(reps[r].value), n));
          const GridGraph small(s, m, enclosing_level(s, reps[r], m) + 1 - m);
          const FoldIndex fs(fold, small, M);
          tight.push_back(folded_law(small, fs, small.window().find_vertex(reps[r].value), n));
        }
        for (std::size_t r = 1; r < exact.size(); ++r) {
          ++compared;
          if (exact[r].escape != 0 || exact[0].escape != 0) fail(c, s.name + " guard window leaks");
          if (exact[r].mass != exact[0].mass) fail(c, s.name + " folded laws differ");
          Rational tv = 0;
          for (std::size_t v = 0; v < tight[r].mass.size(); ++v) tv += abs(tight[r].mass[v] - tight[0].mass[v]);
          tv /= 2;
          if (tv > tight[r].escape + tight[0].escape) fail(c, s.name + " TV exceeds escape mass");
        }
      }
      note(c, s.name + " " + std::to_string(compared) + " representative pairs");
    }
  });
}

Criterion chapman_kolmogorov(const std::vector<FractalSpec>& specs) {
  const auto glp = glp_only(specs);
  if (glp.empty()) return not_applicable(make(9, "Chapman-Kolmogorov"));
  return guarded(make(9, "Chapman-Kolmogorov"), [&](Criterion& c) {
    for (const auto& s : glp) {
      const QuotientWalk q(std::make_shared<const GoodLabeling>(s), 1, 0);
      std::vector<Matrix> pw{q.power(0)};
      for (int i = 1; i <= 20; ++i) pw.push_back(multiply(pw.back(), q.matrix()));
      int bad = 0;
      for (int a = 0; a <= 10; ++a) {
        for (int b = 0; b <= 10; ++b) {
          if (multiply(pw[a], pw[b]) != pw[a + b]) ++bad;
        }
      }
      note(c, s.name + " " + std::to_string(bad) + " failures");
      if (bad) c.pass = false;
    }
  });
}

Criterion detailed_balance(const std::vector<FractalSpec>& specs) {
  const auto glp = glp_only(specs);
  if (glp.empty()) return not_applicable(make(10, "quotient detailed balance"));
  return guarded(make(10, "quotient detailed balance"), [&](Criterion& c) {
    for (const auto& s : glp) {
      const QuotientWalk q(std::make_shared<const GoodLabeling>(s), 1, 0);
      Matrix p = q.power(0);
      int bad = 0;
      for (int n = 0; n <= 20; ++n) {
        if (n > 0) p = multiply(p, q.matrix());
        for (int x = 0; x < q.size(); ++x) {
          for (int y = x + 1; y < q.size(); ++y) {
            if (q.quotient_degree(x) * p[x][y] != q.quotient_degree(y) * p[y][x]) ++bad;
          }
        }
      }
      note(c, s.name + " " + std::to_string(bad) + " failures");
      if (bad) c.pass = false;
    }
  });
}

Criterion time_scale(const std::vector<FractalSpec>& specs) {
  return guarded(make(11, "time scale"), [&](Criterion& c) {
    for (const auto& s : specs) {
      const Rational g0 = estimate_gamma(s, 0);
      const Rational g1 = estimate_gamma(s, 1);
      note(c, s.name + " gamma " + to_string(g0));
      if (g0 != g1) fail(c, s.name + " gamma depends on the level");
      if (s.name == "gasket") {
        if (g0 != 5) fail(c, "gasket gamma is not 5");
        if (estimate_gamma(s, 2) != g0) fail(c, "gasket gamma differs at level 2");
      }
    }
  });
}

Criterion monte_carlo(const std::vector<FractalSpec>& specs, std::uint64_t seed) {
  const auto glp = glp_only(specs);
  if (glp.empty()) return not_applicable(make(12, "Monte Carlo consistency"));
  return guarded(make(12, "Monte Carlo consistency"), [&](Criterion& c) {
    constexpr int M = 1, m = 0, n = 10, horizon = 200;
    constexpr long long count = 1000000;
    const auto t0 = Clock::now();
    for (const auto& s : glp) {
      auto lab = std::make_shared<const GoodLabeling>(s);
      const Folding fold(lab);
      const Point x{s.zero(), M};
      const auto grid = grid_around(s, m, x, n);
      const FoldIndex fi(fold, *grid, M);
      const int start = grid->window().find_vertex(x.value);

      SimulationConfig cfg;
      cfg.M = M;
      cfg.m = m;
      cfg.seed = seed;
      cfg.count = count;
      cfg.steps = n;
      const auto sim = simulate_paths(*grid, fi, start, cfg);
      const auto exact = folded_law(*grid, fi, start, n);
      double tv = 0.0;
      for (int v = 0; v < fi.size(); ++v) {
        tv += std::abs(static_cast<double>(sim.folded_histogram[v]) / count - exact.mass[v].get_d());
      }
      tv = 0.5 * tv + static_cast<double>(sim.escaped) / count;
      note(c, s.name + " TV " + fmt(tv));
      if (tv > 4e-3) fail(c, s.name + " folded law TV above 4e-3");

      const auto labels = grid_labels(*lab, *grid, M);
      const auto hits = simulate_first_hits(*grid, labels, start, cfg, horizon);
      const auto law = hitting_law(*lab, x, M, m, horizon, 1);
      double worst = 0.0;
      for (int a = 0; a < s.k; ++a) {
        const double p = law.label_marginal(1, a).get_d();
        const double f = static_cast<double>(hits.label_counts[a]) / count;
        const double se = std::sqrt(std::max(p * (1 - p), 1e-300) / count);
        worst = std::max(worst, std::abs(f - p) / se);
        if (p == 0.0 && hits.label_counts[a] != 0) worst = INFINITY;
      }
      note(c, s.name + " label z " + fmt(worst));
      if (!(worst <= 3.0)) fail(c, s.name + " hitting labels off by more than 3 standard errors");
    }
    if (since(t0) >= 300.0) fail(c, "runtime " + fmt(since(t0)) + " s");
  });
}

std::vector<Criterion> run_all(const Options& options) {
  std::vector<FractalSpec> all = options.specs;
  const bool defaults = all.empty();
  if (defaults) {
    for (const auto& n : builtin_spec_names()) all.push_back(load_spec("builtin:" + n));
  }
  auto pick = [&](std::initializer_list<const char*> names) {
    if (!defaults) return all;
    std::vector<FractalSpec> out;
    for (const auto& s : all) {
      for (const char* n : names) {
        if (s.name == n) out.push_back(s);
      }
    }
    return out;
  };

  std::vector<Criterion> out;
  out.push_back(glp_verdicts(all));
  out.push_back(labelling_uniqueness(all));
  out.push_back(triangle_oracle(all));
  out.push_back(even_k_characterization(all));
  out.push_back(projection_composition(all, options.seed));
  out.push_back(metric_bounds(all, options.seed));
  out.push_back(hitting_invariance(pick({"gasket", "vicsek"})));
  out.push_back(fiber_invariance(all));
  out.push_back(chapman_kolmogorov(pick({"gasket", "vicsek"})));
  out.push_back(detailed_balance(all));
  out.push_back(time_scale(pick({"gasket"})));
  if (options.monte_carlo) {
    out.push_back(monte_carlo(pick({"gasket"}), options.seed));
  } else {
    Criterion c = make(12, "Monte Carlo consistency");
    c.applicable = false;
    note(c, "skipped (quick tier)");
    out.push_back(c);
  }
  return out;
}

}  // namespace nestfold::suite
