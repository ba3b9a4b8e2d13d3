#pragma once

#include <cstddef>

#include "decoh/matrix.hpp"

namespace decoh::ops {

ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix identity(std::size_t n);

/// |k> in an n-dimensional space.
ComplexVector basis_vector(std::size_t n, std::size_t k);

/// Truncated annihilation operator on Fock levels 0..levels-1.
ComplexMatrix annihilation(std::size_t levels);
/// a^dagger a on Fock levels 0..levels-1.
ComplexMatrix number(std::size_t levels);

}  // namespace decoh::ops
