#pragma once

#include <memory>
#include <vector>

#include "nestfold/complexes.hpp"
#include "nestfold/labeling.hpp"

namespace nestfold {

// The folding projection pi_M and its per-complex inverses, at any order.
class Folding {
 public:
  explicit Folding(std::shared_ptr<const GoodLabeling> labeling);

  const GoodLabeling& labeling() const { return *lab_; }
  const FractalSpec& spec() const { return lab_->spec(); }

  // b_M + zeta^r (x - nu_Delta - b_M) for the given M-complex, without
  // checking that x lies in it.
  FieldElement fold_through(const FieldElement& x, const ComplexAddress& addr) const;

  // pi_M(x). At vertices every incident complex is used and the images must
  // coincide (IntegrityError otherwise). DomainError if x is not a point of
  // the fractal at its declared grid.
  Point project(const Point& x, int M) const;

  // Preimage of y in the complex addr. DomainError if y is not in K^<M>.
  Point unfold(const Point& y, const ComplexAddress& addr) const;

  Point project_to(const Point& x, const ComplexAddress& addr) const;

  // {unfold(y, addr) : addr in window}, deduplicated, in window order.
  std::vector<Point> fiber(const Point& y, const Window& window) const;

 private:
  std::shared_ptr<const GoodLabeling> lab_;
};

}  // namespace nestfold
