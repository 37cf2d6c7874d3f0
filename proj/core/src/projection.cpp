#include "nestfold/projection.hpp"

#include <unordered_set>

#include "nestfold/error.hpp"
#include "nestfold/geometry.hpp"

namespace nestfold {

Folding::Folding(std::shared_ptr<const GoodLabeling> labeling) : lab_(std::move(labeling)) {}

FieldElement Folding::fold_through(const FieldElement& x, const ComplexAddress& addr) const {
  const FractalSpec& s = spec();
  const FieldElement b = s.barycenter * s.scale(addr.level);
  return rotate_about(x - complex_anchor(s, addr), b, lab_->rotation(addr));
}

Point Folding::project(const Point& x, int M) const {
  const auto cells = containing_complexes(spec(), x, M);
  if (cells.empty()) throw DomainError(x.value.to_string() + " is not a point of the fractal");
  FieldElement image = fold_through(x.value, cells.front());
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (fold_through(x.value, cells[i]) != image) {
      throw IntegrityError("folding of " + x.value.to_string() + " depends on the complex (" +
                           cells.front().to_string() + " vs " + cells[i].to_string() + ")");
    }
  }
  return Point{std::move(image), x.grid};
}

Point Folding::unfold(const Point& y, const ComplexAddress& addr) const {
  const FractalSpec& s = spec();
  const int M = addr.level;
  if (containing_complexes_in(s, y, M, ComplexAddress{M, {}}).empty()) {
    throw DomainError(y.value.to_string() + " is not in K^<" + std::to_string(M) + ">");
  }
  const FieldElement b = s.barycenter * s.scale(M);
  return Point{rotate_about(y.value, b, -lab_->rotation(addr)) + complex_anchor(s, addr), y.grid};
}

Point Folding::project_to(const Point& x, const ComplexAddress& addr) const {
  return unfold(project(x, addr.level), addr);
}

std::vector<Point> Folding::fiber(const Point& y, const Window& window) const {
  const FractalSpec& s = spec();
  const int M = window.level();
  if (containing_complexes_in(s, y, M, ComplexAddress{M, {}}).empty()) {
    throw DomainError(y.value.to_string() + " is not in K^<" + std::to_string(M) + ">");
  }
  const FieldElement b = s.barycenter * s.scale(M);
  std::vector<Point> out;
  std::unordered_set<FieldElement, FieldElementHash> seen;
  for (int c = 0; c < window.complex_count(); ++c) {
    const ComplexAddress addr = window.address(c);
    FieldElement p = rotate_about(y.value, b, -lab_->rotation(addr)) + window.anchor(c);
    if (seen.insert(p).second) out.push_back(Point{std::move(p), y.grid});
  }
  return out;
}

}  // namespace nestfold
