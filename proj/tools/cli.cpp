#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nestfold/error.hpp"
#include "nestfold/geometry.hpp"
#include "nestfold/labeling.hpp"
#include "nestfold/metric.hpp"
#include "nestfold/projection.hpp"
#include "nestfold/svg.hpp"
#include "nestfold/walk.hpp"
#include "suite.hpp"

namespace nestfold::cli {

using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string spec;
  std::vector<std::string> specs;
  int order = 0;
  int m = 0;
  int depth = 1;
  int grid = -1000;  // sentinel: locate automatically
  int steps = 10;
  int horizon = 200;
  int J = 2;
  int n_max = 6;
  int power = 1;
  int check = 5;
  int samples = 10000;
  int threads = 0;
  int window_depth = 0;
  long long count = 1000;
  long long archive = 0;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string point;
  std::vector<std::string> others;
  std::string mode = "auto";
  std::string svg;
  std::string archive_out;
  bool raw = false;
  bool quick = false;
  SvgStyle style;
};

// Shadows rounded to 12 decimals; -0 and rounding noise print as 0.
double clean(double v) {
  const double r = std::round(v * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", clean(v));
  return buf;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

json point_json(const FieldElement& x) {
  const auto z = x.to_complex();
  return json{{"exact", x.to_string()}, {"x", clean(z.real())}, {"y", clean(z.imag())}};
}

json rational_json(const Rational& q) { return to_string(q); }

FractalSpec load(const Options& o) { return load_spec(o.spec); }

FieldElement parse_value(const FractalSpec& spec, const std::string& text) {
  if (text.find_first_of(".eE") != std::string::npos) {
    throw DomainError("floating input rejected; give exact coefficients like [1/2,0,1]");
  }
  if (!text.empty() && text.front() == '[') return FieldElement::parse(spec.field(), text);
  return FieldElement(spec.field(), parse_rational(text));
}

Point parse_point(const FractalSpec& spec, const Options& o, const std::string& text, int coarsest, int finest) {
  const FieldElement x = parse_value(spec, text);
  if (o.grid != -1000) return Point{x, o.grid};
  return locate_point(spec, x, std::max(coarsest, finest), finest);
}

std::string label_of(int l) { return label_name(l); }

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot write " + path);
  f << body;
}

// ---------------------------------------------------------------------------

void cmd_spec_validate(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const auto rep = validate_spec(s, o.depth);
  auto axiom = [](const AxiomVerdict& a) { return json{{"pass", a.pass}, {"witness", a.witness}}; };
  json essential = json::array();
  for (const auto& e : rep.essential) essential.push_back(point_json(e));
  r.report = json{{"name", s.name},
                  {"regular_polygon", axiom(rep.regular_polygon)},
                  {"symmetry", axiom(rep.symmetry)},
                  {"nesting", axiom(rep.nesting)},
                  {"connectivity", axiom(rep.connectivity)},
                  {"koch_uniqueness", axiom(rep.koch_uniqueness)},
                  {"nesting_depth", rep.nesting_depth},
                  {"essential", essential},
                  {"warnings", rep.warnings}};
  r.verdicts = json{{"valid", rep.all_pass()}};
  if (!rep.all_pass()) r.exit_code = kFinding;
}

void cmd_spec_info(const Options& o, CommandResult& r) {
  const auto s = load(o);
  json v0 = json::array();
  for (const auto& v : s.v0) v0.push_back(point_json(v));
  json essential = json::array();
  for (int i : s.essential_index) essential.push_back(i + 1);
  r.report = json{{"name", s.name},
                  {"k", s.k},
                  {"L", s.L},
                  {"N", s.N},
                  {"d_f", s.dimension},
                  {"d_f_formula", "log " + std::to_string(s.N) + " / log " + std::to_string(s.L)},
                  {"v0", v0},
                  {"essential_similitudes", essential},
                  {"barycenter", point_json(s.barycenter)},
                  {"metadata", s.metadata},
                  {"spec", json::parse(serialize_spec(s))}};
}

json conflict_json(const Conflict& c) {
  json chains = json::array();
  for (const auto* chain : {&c.chain_a, &c.chain_b}) {
    json list = json::array();
    for (const auto& a : *chain) list.push_back(a.to_string());
    chains.push_back(list);
  }
  return json{{"vertex", point_json(c.vertex)},
              {"labels", {label_of(c.label_a), label_of(c.label_b)}},
              {"chains", chains}};
}

void cmd_glp(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const auto res = check_glp(s);
  r.verdicts = json{{"glp", res.ok()}};
  r.report = json{{"name", s.name}, {"glp", res.ok()}};
  if (res.ok()) {
    const Labeling& lab = *res.labeling;
    json rot = json::object();
    for (int c = 0; c < lab.window->complex_count(); ++c) {
      rot[lab.window->address(c).to_string()] = lab.rotations[c];
    }
    r.report["rotations"] = rot;
    json labels = json::array();
    for (int v = 0; v < lab.window->vertex_count(); ++v) {
      labels.push_back(json{{"vertex", point_json(lab.window->vertex(v))}, {"label", label_of(lab.labels[v])}});
    }
    r.report["labels"] = labels;
  } else {
    r.report["conflict"] = conflict_json(*res.conflict);
  }
  if (!o.svg.empty()) {
    const Window w(s, 0, 1);
    const auto body = res.ok() ? render_labeling_svg(w, res.labeling->labels, nullptr, o.style)
                               : render_labeling_svg(w, {}, &*res.conflict, o.style);
    write_file(o.svg, body);
    r.artifacts.push_back(o.svg);
  }
}

void cmd_label_render(const Options& o, CommandResult& r) {
  const auto s = load(o);
  auto w = std::make_shared<const Window>(s, o.order, o.depth);
  const auto res = propagate_labels(w, identity_seed(s.k));
  r.verdicts = json{{"glp", res.ok()}};
  r.payload_kind = "svg";
  r.payload = res.ok() ? render_labeling_svg(*w, res.labeling->labels, nullptr, o.style)
                       : render_labeling_svg(*w, {}, &*res.conflict, o.style);
}

void cmd_project(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const Folding fold(std::make_shared<const GoodLabeling>(s));
  const Point x = parse_point(s, o, o.point, o.order, 0);
  const Point y = fold.project(x, o.order);
  r.report = json{{"order", o.order}, {"point", point_json(x.value)}, {"grid", x.grid}, {"image", point_json(y.value)}};
}

void cmd_fiber(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const Folding fold(std::make_shared<const GoodLabeling>(s));
  const Point y = parse_point(s, o, o.point, o.order, 0);
  const Window w(s, o.order, o.depth);
  std::ostringstream csv;
  csv << "index,exact,x,y,rank\n";
  int i = 0;
  for (const Point& p : fold.fiber(y, w)) {
    const auto z = p.value.to_complex();
    const auto rk = containing_complexes(s, p, o.order).size();
    csv << i++ << "," << quoted(p.value.to_string()) << "," << num(z.real()) << "," << num(z.imag()) << ","
        << rk << "\n";
  }
  r.payload_kind = "csv";
  r.payload = csv.str();
}

void cmd_dist(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const Point x = parse_point(s, o, o.point, o.order, 0);
  std::ostringstream csv;
  csv << "x,y,euclidean,d_M\n";
  for (const auto& t : o.others) {
    const Point y = parse_point(s, o, t, o.order, 0);
    csv << quoted(x.value.to_string()) << "," << quoted(y.value.to_string()) << ","
        << num((x.value - y.value).abs()) << "," << graph_distance(s, x, y, o.order) << "\n";
  }
  r.payload_kind = "csv";
  r.payload = csv.str();
}

void cmd_shells(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const Point x = parse_point(s, o, o.point, o.order, 0);
  const auto t = shells(s, x, o.order, o.n_max);
  std::ostringstream csv;
  csv << "n,count,complexes\n";
  for (std::size_t n = 0; n < t.shells.size(); ++n) {
    std::string list;
    for (const auto& a : t.shells[n]) list += (list.empty() ? "" : " ") + a.to_string();
    csv << n + 1 << "," << t.shells[n].size() << "," << quoted(list) << "\n";
  }
  r.payload_kind = "csv";
  r.payload = csv.str();
}

void cmd_constants(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const auto c5 = min_gap_C5(s, 2, o.tol);
  const auto diam = diameter_bracket(s, o.tol);
  auto constants = metric_constants(s, o.order, c5, diam);
  const auto fit = fit_C8(s, o.order, 2, o.n_max);
  constants.C8 = fit.C8;
  const auto rep = verify_comparison(s, o.order, o.samples, o.seed, constants, o.n_max);
  r.report = json{{"name", s.name},
                  {"order", o.order},
                  {"C5", {c5.lo.get_d(), c5.hi.get_d()}},
                  {"C5_exact", {rational_json(c5.lo), rational_json(c5.hi)}},
                  {"diam", {diam.lo.get_d(), diam.hi.get_d()}},
                  {"C6", constants.C6},
                  {"C7", constants.C7},
                  {"C8", constants.C8},
                  {"n_uniform", constants.n_uniform},
                  {"pairs", rep.pairs},
                  {"bases", rep.bases},
                  {"max_lower_ratio", rep.max_lower_ratio},
                  {"max_upper_ratio", rep.max_upper_ratio},
                  {"max_shell_ratio", rep.max_shell_ratio},
                  {"violations", rep.violations}};
  r.verdicts = json{{"bounds_hold", rep.violations.empty()}};
  if (!rep.violations.empty()) r.exit_code = kFinding;
}

KernelMode parse_mode(const std::string& m, const GridGraph& g, int n) {
  if (m == "exact") return KernelMode::exact;
  if (m == "float") return KernelMode::floating;
  return default_kernel_mode(g, n);
}

std::shared_ptr<const GridGraph> walk_grid(const FractalSpec& s, const Options& o, const Point& x, int steps) {
  std::shared_ptr<const GridGraph> g = o.window_depth > 0 ? std::make_shared<const GridGraph>(s, o.m, o.window_depth)
                                                          : grid_around(s, o.m, x, steps);
  if (g->window().top_level() < o.order) g = std::make_shared<const GridGraph>(s, o.m, o.order - o.m);
  return g;
}

void cmd_walk_kernel(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const Point x = parse_point(s, o, o.point, o.order, o.m);
  const auto g = walk_grid(s, o, x, o.steps);
  const int start = g->window().find_vertex(x.value);
  if (start < 0) throw DomainError("start vertex outside the grid window");
  const KernelMode mode = parse_mode(o.mode, *g, o.steps);
  const auto t = kernel(*g, start, o.steps, mode);
  const bool exact = mode == KernelMode::exact;

  std::optional<FoldIndex> fi;
  std::unique_ptr<Folding> fold;
  if (!o.raw) {
    fold = std::make_unique<Folding>(std::make_shared<const GoodLabeling>(s));
    fi.emplace(*fold, *g, o.order);
  }
  const Window& w = o.raw ? g->window() : fi->target();
  std::ostringstream csv;
  csv << "step,vertex,exact,x,y,probability\n";
  for (int n = 0; n <= o.steps; ++n) {
    std::vector<Rational> q(exact ? w.vertex_count() : 0);
    std::vector<double> d(exact ? 0 : w.vertex_count(), 0.0);
    for (int v = 0; v < g->vertex_count(); ++v) {
      const int id = o.raw ? v : fi->folded(v);
      if (exact) {
        if (t.num[n][v] != 0) q[id] += t.probability(n, v);
      } else {
        d[id] += t.probability_d(n, v);
      }
    }
    for (int v = 0; v < w.vertex_count(); ++v) {
      const bool nz = exact ? q[v] != 0 : d[v] != 0.0;
      if (!nz) continue;
      csv << n << "," << v << "," << quoted(w.vertex(v).to_string()) << "," << num(w.shadows()[v].real()) << ","
          << num(w.shadows()[v].imag()) << "," << (exact ? to_string(q[v]) : num(d[v])) << "\n";
    }
    csv << n << ",escape,,,," << (exact ? to_string(t.escape(n)) : num(t.escape_d(n))) << "\n";
  }
  r.payload_kind = "csv";
  r.payload = csv.str();
}

void cmd_walk_hitting(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const GoodLabeling lab(s);
  const Point x = parse_point(s, o, o.point, o.order, o.m);
  const auto h = hitting_law(lab, x, o.order, o.m, o.horizon, o.J);
  json law = json::array();
  json marginals = json::array();
  json residual = json::array();
  for (int j = 1; j <= o.J; ++j) {
    json marg = json::object();
    for (int a = 0; a < s.k; ++a) marg[label_of(a)] = rational_json(h.label_marginal(j, a));
    marginals.push_back(marg);
    residual.push_back(rational_json(h.residual[j - 1]));
    for (int t = 0; t <= o.horizon; ++t) {
      for (int a = 0; a < s.k; ++a) {
        if (h.probability(j, t, a) != 0) {
          law.push_back(json{{"j", j}, {"step", t}, {"label", label_of(a)}, {"p", rational_json(h.probability(j, t, a))}});
        }
      }
    }
  }
  r.report = json{{"start", point_json(x.value)}, {"M", o.order}, {"m", o.m}, {"horizon", o.horizon},
                  {"residual", residual}, {"residual_float", json::array()}, {"marginals", marginals},
                  {"law", law}};
  for (const auto& q : h.residual) r.report["residual_float"].push_back(q.get_d());
}

void cmd_walk_gamma(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const Rational g = estimate_gamma(s, o.m);
  r.report = json{{"name", s.name}, {"m", o.m}, {"gamma", rational_json(g)}, {"gamma_float", g.get_d()}};
  r.report["reference"] = s.name == "gasket" ? json("5") : json(nullptr);
  if (s.name == "gasket") {
    r.verdicts = json{{"matches_reference", g == 5}};
    if (g != 5) r.exit_code = kFinding;
  }
}

void cmd_walk_quotient(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const QuotientWalk q(std::make_shared<const GoodLabeling>(s), o.order, o.m);
  std::vector<Matrix> pw{q.power(0)};
  const int top = std::max(o.power, 2 * o.check);
  for (int i = 1; i <= top; ++i) pw.push_back(multiply(pw.back(), q.matrix()));

  bool stochastic = true;
  for (const auto& row : q.matrix()) {
    Rational sum = 0;
    for (const auto& x : row) sum += x;
    stochastic = stochastic && sum == 1;
  }
  bool ck = true;
  for (int a = 0; a <= o.check; ++a) {
    for (int b = 0; b <= o.check; ++b) ck = ck && multiply(pw[a], pw[b]) == pw[a + b];
  }
  bool balance = true;
  int asymmetric = 0;
  for (int n = 0; n <= 2 * o.check; ++n) {
    for (int x = 0; x < q.size(); ++x) {
      for (int y = x + 1; y < q.size(); ++y) {
        balance = balance && q.quotient_degree(x) * pw[n][x][y] == q.quotient_degree(y) * pw[n][y][x];
        if (pw[n][x][y] != pw[n][y][x]) ++asymmetric;
      }
    }
  }
  json vertices = json::array();
  for (int v = 0; v < q.size(); ++v) {
    json p = point_json(q.vertices().vertex(v));
    p["quotient_degree"] = q.quotient_degree(v);
    p["representatives"] = q.representatives(v);
    vertices.push_back(p);
  }
  json matrix = json::array();
  for (const auto& row : pw[o.power]) {
    json jr = json::array();
    for (const auto& x : row) jr.push_back(rational_json(x));
    matrix.push_back(jr);
  }
  r.report = json{{"name", s.name}, {"M", o.order}, {"m", o.m}, {"power", o.power},
                  {"vertices", vertices}, {"matrix", matrix},
                  {"unweighted_asymmetric_entries", asymmetric}};
  r.verdicts = json{{"rows_stochastic", stochastic}, {"chapman_kolmogorov", ck}, {"detailed_balance", balance}};
  if (!(stochastic && ck && balance)) r.exit_code = kFinding;
}

void cmd_walk_simulate(const Options& o, CommandResult& r) {
  const auto s = load(o);
  const Folding fold(std::make_shared<const GoodLabeling>(s));
  const Point x = parse_point(s, o, o.point, o.order, o.m);
  const auto g = walk_grid(s, o, x, o.steps);
  const FoldIndex fi(fold, *g, o.order);
  const int start = g->window().find_vertex(x.value);
  if (start < 0) throw DomainError("start vertex outside the grid window");
  SimulationConfig cfg;
  cfg.M = o.order;
  cfg.m = o.m;
  cfg.seed = o.seed;
  cfg.count = o.count;
  cfg.steps = o.steps;
  cfg.threads = o.threads;
  cfg.archive_paths = o.archive;
  const auto sim = simulate_paths(*g, fi, start, cfg);

  json hist = json::array();
  std::optional<FoldedLaw> exact;
  if (default_kernel_mode(*g, o.steps) == KernelMode::exact) exact = folded_law(*g, fi, start, o.steps);
  double tv = 0.0;
  for (int v = 0; v < fi.size(); ++v) {
    const double f = o.count ? static_cast<double>(sim.folded_histogram[v]) / o.count : 0.0;
    json e = point_json(fi.target().vertex(v));
    e["count"] = sim.folded_histogram[v];
    if (exact) {
      e["exact"] = rational_json(exact->mass[v]);
      tv += std::abs(f - exact->mass[v].get_d());
    }
    hist.push_back(e);
  }
  r.report = json{{"name", s.name}, {"M", o.order}, {"m", o.m}, {"start", point_json(x.value)},
                  {"seed", o.seed}, {"count", o.count}, {"steps", o.steps},
                  {"escaped", sim.escaped}, {"histogram", hist}};
  if (exact) r.report["total_variation"] = 0.5 * tv;

  if (!o.archive_out.empty()) {
    std::string lines;
    for (const auto& p : sim.archive) {
      lines += json{{"path_id", p.path_id}, {"step", p.step}, {"raw_vertex", p.raw_vertex},
                    {"folded_vertex", p.folded_vertex}}.dump() + "\n";
    }
    write_file(o.archive_out, lines);
    r.artifacts.push_back(o.archive_out);
  }
  if (!o.svg.empty()) {
    write_file(o.svg, render_paths_svg(*g, fi, sim.archive, true, o.style));
    r.artifacts.push_back(o.svg);
  }
}

void cmd_verify(const Options& o, CommandResult& r) {
  suite::Options so;
  so.seed = o.seed;
  so.monte_carlo = !o.quick;
  for (const auto& ref : o.specs) so.specs.push_back(load_spec(ref));
  const auto results = suite::run_all(so);
  json list = json::array();
  bool all = true;
  for (const auto& c : results) {
    list.push_back(json{{"id", c.id}, {"title", c.title}, {"applicable", c.applicable}, {"pass", c.pass},
                        {"detail", c.detail}});
    all = all && c.pass;
  }
  r.report = json{{"criteria", list}};
  r.verdicts = json{{"all_pass", all}};
  if (!all) r.exit_code = kFinding;
}

// ---------------------------------------------------------------------------

struct Command {
  CLI::App* app;
  std::string name;
  void (*fn)(const Options&, CommandResult&);
  Options* options;
};

void add_style(CLI::App* a, Options& o) {
  a->add_option("--scale", o.style.scale, "SVG pixels per unit length");
  a->add_option("--precision", o.style.precision, "SVG coordinate decimals");
}

}  // namespace

json to_json(const CommandResult& r, bool with_timing) {
  json j{{"command", r.command}, {"parameters", r.parameters}, {"verdicts", r.verdicts}};
  if (r.payload_kind == "json") {
    j["report"] = r.report;
  } else {
    j["payload_kind"] = r.payload_kind;
    j["payload"] = r.payload;
  }
  j["artifacts"] = r.artifacts;
  if (with_timing) j["wall_clock"] = r.wall_clock;
  j["exit_code"] = r.exit_code;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

CommandResult from_json(const json& j) {
  CommandResult r;
  r.command = j.at("command").get<std::string>();
  r.parameters = j.at("parameters");
  r.verdicts = j.at("verdicts");
  if (j.contains("report")) {
    r.report = j.at("report");
  } else {
    r.payload_kind = j.at("payload_kind").get<std::string>();
    r.payload = j.at("payload").get<std::string>();
  }
  r.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  if (j.contains("wall_clock")) r.wall_clock = j.at("wall_clock").get<double>();
  r.exit_code = j.at("exit_code").get<int>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  return r;
}

CommandResult parse_result(std::string_view text) { return from_json(json::parse(text)); }

std::string render(const CommandResult& r) {
  if (r.payload_kind == "json" || !r.error.empty()) return to_json(r, r.with_timing).dump(2) + "\n";
  return r.payload;
}

CommandResult run(const std::vector<std::string>& argv) {
  std::string out;
  bool timing = false;
  CLI::App app{"Nested fractals: labelling, folding and reflected walks", "nestfold"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", out, "Write the primary output to a file");
  app.add_flag("--timing", timing, "Include wall-clock seconds in reports");

  // One Options per subcommand, so per-command defaults do not collide.
  std::vector<std::unique_ptr<Options>> store;
  std::vector<Command> cmds;
  auto add = [&](CLI::App* parent, const char* name, const char* help, const std::string& full,
                 void (*fn)(const Options&, CommandResult&)) -> std::pair<CLI::App*, Options*> {
    store.push_back(std::make_unique<Options>());
    CLI::App* a = parent->add_subcommand(name, help);
    cmds.push_back({a, full, fn, store.back().get()});
    return {a, store.back().get()};
  };
  auto spec_opt = [](CLI::App* a, Options& o) {
    a->add_option("--spec", o.spec, "builtin:<name> or a spec file")->required();
  };
  auto point_opts = [](CLI::App* a, Options& o) {
    a->add_option("--point,--start", o.point, "Exact point, e.g. [1/2,0,0] or 4")->required();
    a->add_option("--grid", o.grid, "Grid level of the point (default: located)");
  };
  auto walk_opts = [&](CLI::App* a, Options& o) {
    spec_opt(a, o);
    o.order = 1;
    a->add_option("--M,--order", o.order, "Order M")->capture_default_str();
    a->add_option("--m", o.m, "Grid level m")->capture_default_str();
  };

  auto* spec = app.add_subcommand("spec", "Spec management");
  spec->require_subcommand(1);
  {
    auto [a, o] = add(spec, "validate", "Check the nested-fractal axioms", "spec validate", cmd_spec_validate);
    spec_opt(a, *o);
    o->depth = 3;
    a->add_option("--depth", o->depth, "Nesting check depth")->capture_default_str();
  }
  {
    auto [a, o] = add(spec, "info", "Derived quantities of a spec", "spec info", cmd_spec_info);
    spec_opt(a, *o);
  }
  {
    auto [a, o] = add(&app, "glp", "Decide the good labelling property", "glp", cmd_glp);
    spec_opt(a, *o);
    a->add_option("--svg", o->svg, "Render the labelled window or the conflict");
    add_style(a, *o);
  }
  auto* label = app.add_subcommand("label", "Labelled windows");
  label->require_subcommand(1);
  {
    auto [a, o] = add(label, "render", "SVG of a labelled window", "label render", cmd_label_render);
    spec_opt(a, *o);
    a->add_option("--order", o->order, "Order M")->capture_default_str();
    a->add_option("--depth", o->depth, "Window depth")->capture_default_str();
    add_style(a, *o);
  }
  {
    auto [a, o] = add(&app, "project", "Fold a point into K^<M>", "project", cmd_project);
    spec_opt(a, *o);
    a->add_option("--order,--M", o->order, "Order M")->required();
    point_opts(a, *o);
  }
  {
    auto [a, o] = add(&app, "fiber", "Preimages of a point of K^<M>", "fiber", cmd_fiber);
    spec_opt(a, *o);
    a->add_option("--order,--M", o->order, "Order M")->required();
    o->depth = 2;
    a->add_option("--depth", o->depth, "Window depth above M")->capture_default_str();
    point_opts(a, *o);
  }
  {
    auto [a, o] = add(&app, "dist", "Graph distance d_M", "dist", cmd_dist);
    spec_opt(a, *o);
    a->add_option("--order,--M", o->order, "Order M")->required();
    a->add_option("--x", o->point, "First point")->required();
    a->add_option("--y", o->others, "Second point(s)")->required();
    a->add_option("--grid", o->grid, "Grid level of the points");
  }
  {
    auto [a, o] = add(&app, "shells", "Shells L_{M,n,x}", "shells", cmd_shells);
    spec_opt(a, *o);
    a->add_option("--order,--M", o->order, "Order M")->required();
    a->add_option("--n-max", o->n_max, "Largest shell index")->capture_default_str();
    point_opts(a, *o);
  }
  {
    auto [a, o] = add(&app, "constants", "Metric comparison constants", "constants", cmd_constants);
    spec_opt(a, *o);
    a->add_option("--order,--M", o->order, "Order M")->capture_default_str();
    a->add_option("--seed", o->seed, "Sampling seed")->required();
    a->add_option("--samples", o->samples, "Sampled pairs and bases")->capture_default_str();
    a->add_option("--n-max", o->n_max, "Largest shell index")->capture_default_str();
    a->add_option("--tol", o->tol, "Bracket width")->capture_default_str();
  }
  auto* walk = app.add_subcommand("walk", "Random walks on grids and quotients");
  walk->require_subcommand(1);
  {
    auto [a, o] = add(walk, "kernel", "n-step laws, folded unless --raw", "walk kernel", cmd_walk_kernel);
    walk_opts(a, *o);
    point_opts(a, *o);
    a->add_option("--steps", o->steps, "Horizon")->capture_default_str();
    a->add_option("--mode", o->mode, "exact | float | auto")->check(CLI::IsMember({"exact", "float", "auto"}));
    a->add_option("--window-depth", o->window_depth, "Fixed grid depth (default: no escape within the horizon)");
    a->add_flag("--raw", o->raw, "Distributions on the raw grid");
  }
  {
    auto [a, o] = add(walk, "hitting", "Joint law of hitting step and label", "walk hitting", cmd_walk_hitting);
    walk_opts(a, *o);
    point_opts(a, *o);
    a->add_option("--horizon", o->horizon, "Largest step")->capture_default_str();
    a->add_option("--J", o->J, "Number of consecutive hits")->capture_default_str();
  }
  {
    auto [a, o] = add(walk, "gamma", "Decimation time scale", "walk gamma", cmd_walk_gamma);
    spec_opt(a, *o);
    a->add_option("--m", o->m, "Grid level m")->capture_default_str();
  }
  {
    auto [a, o] = add(walk, "quotient", "Quotient kernel and its invariants", "walk quotient", cmd_walk_quotient);
    walk_opts(a, *o);
    a->add_option("--power", o->power, "Emit Q^n")->capture_default_str();
    a->add_option("--check", o->check, "Check Q^(a+b) = Q^a Q^b for a, b up to this")->capture_default_str();
  }
  {
    auto [a, o] = add(walk, "simulate", "Monte Carlo folded paths", "walk simulate", cmd_walk_simulate);
    walk_opts(a, *o);
    point_opts(a, *o);
    a->add_option("--seed", o->seed, "Seed")->required();
    a->add_option("--count", o->count, "Paths")->capture_default_str();
    a->add_option("--steps", o->steps, "Steps per path")->capture_default_str();
    a->add_option("--threads", o->threads, "Workers (0: all cores)");
    a->add_option("--window-depth", o->window_depth, "Fixed grid depth");
    a->add_option("--archive", o->archive, "Paths kept in the archive")->capture_default_str();
    a->add_option("--archive-out", o->archive_out, "Line-delimited path records");
    a->add_option("--svg", o->svg, "Render archived folded paths");
    add_style(a, *o);
  }
  {
    auto [a, o] = add(&app, "verify", "Acceptance suite", "verify", cmd_verify);
    a->add_option("--spec", o->specs, "Restrict to these specs (repeatable)");
    a->add_option("--seed", o->seed, "Seed")->required();
    a->add_flag("--quick", o->quick, "Exact suites only");
  }

  CommandResult r;
  std::vector<const char*> args{"nestfold"};
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    r.command = "usage";
    r.payload_kind = "text";
    r.payload = out.str();
    if (code != 0) {
      r.exit_code = kUsage;
      r.error = err.str().empty() ? e.what() : err.str();
    }
    return r;
  }

  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : cmds) {
    if (!c.app->parsed()) continue;
    r.command = c.name;
    json params = json::object();
    for (const CLI::Option* opt : c.app->get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      const auto res = opt->results();
      const std::string key = opt->get_name();
      params[key.substr(key.find_first_not_of('-'))] =
          res.size() == 1 ? json(res.front()) : json(res);
    }
    r.parameters = params;
    try {
      c.fn(*c.options, r);
    } catch (const Error& e) {
      r.exit_code = kFinding;
      r.error = e.what();
    } catch (const std::exception& e) {
      r.exit_code = kFinding;
      r.error = e.what();
    }
    break;
  }
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.with_timing = timing;
  if (!out.empty() && r.error.empty()) {
    write_file(out, r.payload_kind == "json" ? to_json(r, timing).dump(2) + "\n" : r.payload);
    r.artifacts.push_back(out);
    r.payload_kind = "json";
    r.payload.clear();
  }
  return r;
}

}  // namespace nestfold::cli
