#pragma once

#include <span>

#include "decoh/matrix.hpp"
#include "decoh/tolerance.hpp"

namespace decoh {

/// Kronecker product a (x) b. Row index of the result is i_a * b.rows() + i_b,
/// which matches the (i_a, i_b) row-major layout of BipartiteState.
/// Throws DimensionError if either result dimension exceeds tol.max_dimension.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const ToleranceConfig& tol = default_tolerances());

struct EigenDecomposition {
  RealVector values;         // descending
  ComplexMatrix vectors;     // column k belongs to values[k]
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
/// Throws InvalidArgument for non-Hermitian input (tol.hermitian scaled by
/// max(1, ||M||)) and ConvergenceError when the sweep budget runs out.
EigenDecomposition hermitian_eigh(const ComplexMatrix& m,
                                  const ToleranceConfig& tol = default_tolerances());

/// Eigenvalues only, descending.
RealVector hermitian_eigenvalues(const ComplexMatrix& m,
                                 const ToleranceConfig& tol = default_tolerances());

struct SvdResult {
  ComplexMatrix u;           // rows x rows, unitary
  RealVector s;              // min(rows, cols) entries, descending, >= 0
  ComplexMatrix v;           // cols x cols, unitary; M = U diag(s) V^dagger
};

/// One-sided (Hestenes) Jacobi SVD. Zero singular values get an arbitrary
/// orthonormal completion in U and V.
SvdResult svd(const ComplexMatrix& m, const ToleranceConfig& tol = default_tolerances());

/// U diag(s) V^dagger using the leading min(rows, cols) columns.
ComplexMatrix svd_reconstruct(const SvdResult& r);

/// Extends the orthonormal columns of `partial` (n x k) to an n x n unitary
/// by Gram-Schmidt over canonical basis vectors. The first k columns are kept.
/// Throws InvalidArgument if the input columns are not orthonormal.
ComplexMatrix complete_basis(const ComplexMatrix& partial,
                             const ToleranceConfig& tol = default_tolerances());

/// A = sum_n |n> a_n <n| for the columns |n> of `basis`.
ComplexMatrix build_observable(const ComplexMatrix& basis, std::span<const double> scale,
                               const ToleranceConfig& tol = default_tolerances());

/// <alpha|A|alpha> for a normalized vector.
double expectation_value(std::span<const Complex> state, const ComplexMatrix& obs,
                         const ToleranceConfig& tol = default_tolerances());

}  // namespace decoh
