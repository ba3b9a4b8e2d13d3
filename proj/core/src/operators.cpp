#include "decoh/operators.hpp"

#include <cmath>

namespace decoh::ops {

ComplexMatrix sigma_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix sigma_y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix sigma_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix identity(std::size_t n) { return ComplexMatrix::identity(n); }

ComplexVector basis_vector(std::size_t n, std::size_t k) {
  ComplexVector v(n);
  v.at(k) = 1.0;
  return v;
}

ComplexMatrix annihilation(std::size_t levels) {
  ComplexMatrix a(levels, levels);
  for (std::size_t n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix number(std::size_t levels) {
  ComplexMatrix m(levels, levels);
  for (std::size_t n = 0; n < levels; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

}  // namespace decoh::ops
