#include "skewmor/skewgrad.hpp"

namespace skewmor {

namespace {

void require_dim(const SkewGradientSystem& sys, const ColumnVector& y,
                 const char* who) {
  if (y.size() != sys.n) {
    throw ShapeError(std::string(who) + ": state has " + std::to_string(y.size()) +
                     " entries, system dimension is " + std::to_string(sys.n));
  }
}

}  // namespace

ColumnVector rhs(const SkewGradientSystem& sys, const ColumnVector& y) {
  require_dim(sys, y, "rhs");
  return sys.s_matrix(y) * sys.grad_h(y);
}

double energy_of(const SkewGradientSystem& sys, const ColumnVector& y) {
  require_dim(sys, y, "energy_of");
  return sys.energy(y);
}

double check_skew(const SkewGradientSystem& sys, const ColumnVector& y) {
  require_dim(sys, y, "check_skew");
  const DenseMatrix s = sys.s_matrix(y);
  return (s + s.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace skewmor
