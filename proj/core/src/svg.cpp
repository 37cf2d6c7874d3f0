#include "nestfold/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>

namespace nestfold {

namespace {

using cplx = std::complex<double>;

class Canvas {
 public:
  Canvas(const std::vector<cplx>& extent, const SvgStyle& style) : st_(style) {
    lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    hi_ = {-lo_.real(), -lo_.imag()};
    for (auto p : extent) {
      lo_ = {std::min(lo_.real(), p.real()), std::min(lo_.imag(), p.imag())};
      hi_ = {std::max(hi_.real(), p.real()), std::max(hi_.imag(), p.imag())};
    }
    if (extent.empty()) lo_ = hi_ = {0, 0};
    width_ = (hi_.real() - lo_.real()) * st_.scale + 2 * st_.margin;
    height_ = (hi_.imag() - lo_.imag()) * st_.scale + 2 * st_.margin;
  }

  std::string num(double v) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", st_.precision, v);
    std::string s = buf;
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) s = s[0] == '-' ? s.substr(1) : s;
    return s;
  }
  std::string x(cplx p) const { return num((p.real() - lo_.real()) * st_.scale + st_.margin); }
  std::string y(cplx p) const { return num((hi_.imag() - p.imag()) * st_.scale + st_.margin); }

  std::string open() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
           num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n";
  }

  std::string polygon(const std::vector<cplx>& pts) const {
    std::string s = "  <polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += x(pts[i]) + "," + y(pts[i]);
    }
    return s + "\" fill=\"" + st_.fill + "\" stroke=\"" + st_.stroke + "\" stroke-width=\"1\"/>\n";
  }

  std::string text(cplx p, const std::string& t, const std::string& color) const {
    return "  <text x=\"" + x(p) + "\" y=\"" + y(p) + "\" font-size=\"" + num(st_.font_size) +
           "\" font-family=\"sans-serif\" text-anchor=\"middle\" fill=\"" + color + "\">" + t +
           "</text>\n";
  }

  const SvgStyle& style() const { return st_; }

 private:
  SvgStyle st_;
  cplx lo_, hi_;
  double width_ = 0, height_ = 0;
};

std::vector<cplx> complex_shadow(const Window& w, int c) {
  std::vector<cplx> pts;
  for (int v : w.complex_vertex_ids(c)) pts.push_back(w.shadows()[v]);
  return pts;
}

std::string polygons(const Canvas& cv, const Window& w) {
  std::string s;
  for (int c = 0; c < w.complex_count(); ++c) s += cv.polygon(complex_shadow(w, c));
  return s;
}

// Label position: pulled from the vertex toward the window centroid.
cplx label_anchor(const Window& w, int v, cplx centroid, double pull) {
  const cplx p = w.shadows()[v];
  const cplx d = centroid - p;
  const double n = std::abs(d);
  return n > 0 ? p + d / n * pull : p;
}

cplx centroid_of(const Window& w) {
  cplx c = 0;
  for (auto p : w.shadows()) c += p;
  return w.vertex_count() ? c / static_cast<double>(w.vertex_count()) : c;
}

}  // namespace

std::string label_name(int label) {
  if (label >= 0 && label < 26) return std::string(1, static_cast<char>('a' + label));
  return std::to_string(label);
}

std::string render_window_svg(const Window& window, const SvgStyle& style) {
  const Canvas cv(window.shadows(), style);
  return cv.open() + polygons(cv, window) + "</svg>\n";
}

std::string render_labeling_svg(const Window& window, const std::vector<int>& labels,
                                const Conflict* conflict, const SvgStyle& style) {
  const Canvas cv(window.shadows(), style);
  std::string s = cv.open() + polygons(cv, window);
  const cplx mid = centroid_of(window);
  const double pull = 0.6 * style.font_size / style.scale;
  for (int v = 0; v < static_cast<int>(labels.size()); ++v) {
    if (labels[v] < 0) continue;
    s += cv.text(label_anchor(window, v, mid, pull), label_name(labels[v]), style.label_color);
  }
  if (conflict) {
    const cplx p = conflict->vertex.to_complex();
    s += "  <circle cx=\"" + cv.x(p) + "\" cy=\"" + cv.y(p) + "\" r=\"" + cv.num(style.font_size * 0.6) +
         "\" fill=\"none\" stroke=\"" + style.highlight + "\" stroke-width=\"2\"/>\n";
    const cplx q = p + cplx(0, 1.6 * style.font_size / style.scale);
    s += cv.text(q, label_name(conflict->label_a) + "/" + label_name(conflict->label_b), style.highlight);
  }
  return s + "</svg>\n";
}

std::string render_paths_svg(const GridGraph& grid, const FoldIndex& fold,
                             const std::vector<PathRecord>& archive, bool folded,
                             const SvgStyle& style) {
  const Window& bg = folded ? fold.target() : grid.window();
  const Canvas cv(bg.shadows(), style);
  std::string s = cv.open() + polygons(cv, bg);
  std::map<long long, std::vector<cplx>> paths;
  for (const auto& r : archive) {
    paths[r.path_id].push_back(folded ? fold.target().shadows()[r.folded_vertex]
                                      : grid.window().shadows()[r.raw_vertex]);
  }
  for (const auto& [id, pts] : paths) {
    s += "  <polyline fill=\"none\" stroke=\"" + style.path_color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += cv.x(pts[i]) + "," + cv.y(pts[i]);
    }
    s += "\"/>\n";
  }
  return s + "</svg>\n";
}

}  // namespace nestfold
