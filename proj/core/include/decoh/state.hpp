#pragma once

#include <cstddef>
#include <span>

#include "decoh/matrix.hpp"
#include "decoh/tolerance.hpp"

namespace decoh {

enum class Subsystem { A, B };

struct BipartiteDims {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t total() const noexcept { return a * b; }
  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

/// Normalized pure state on H_A (x) H_B. Amplitude (i_a, i_b) is stored at
/// index i_a * dim_b + i_b, the same flattening tensor_product uses.
class BipartiteState {
 public:
  /// Throws DimensionError on a length mismatch and InvalidArgument when
  /// | ||psi||^2 - 1 | exceeds tol.state_norm.
  BipartiteState(std::size_t dim_a, std::size_t dim_b, ComplexVector amplitudes,
                 const ToleranceConfig& tol = default_tolerances());

  /// Rescales to unit norm; throws InvalidArgument for a zero vector.
  static BipartiteState normalized(std::size_t dim_a, std::size_t dim_b, ComplexVector amplitudes);
  /// phi (x) Phi. Both factors must be normalized.
  static BipartiteState product(std::span<const Complex> phi, std::span<const Complex> Phi,
                                const ToleranceConfig& tol = default_tolerances());

  std::size_t dim_a() const noexcept { return dims_.a; }
  std::size_t dim_b() const noexcept { return dims_.b; }
  BipartiteDims dims() const noexcept { return dims_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  Complex amplitude(std::size_t ia, std::size_t ib) const { return amps_[ia * dims_.b + ib]; }

  /// dim_a x dim_b matrix C with psi = sum C_ab |a>|b>.
  ComplexMatrix amplitude_matrix() const;
  /// The same state with the roles of A and B exchanged.
  BipartiteState swapped() const;

 private:
  BipartiteDims dims_;
  ComplexVector amps_;
};

/// Hermitian, unit-trace operator. The constructor checks shape, Hermiticity
/// and trace; positivity is checked on demand by check_spectrum (it costs an
/// eigendecomposition).
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m, const ToleranceConfig& tol = default_tolerances());

  /// |psi><psi|
  static DensityOperator pure(std::span<const Complex> psi,
                              const ToleranceConfig& tol = default_tolerances());
  static DensityOperator maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  /// Throws InvariantViolation if an eigenvalue is below -tol.negative_eigenvalue.
  void check_spectrum(const ToleranceConfig& tol = default_tolerances()) const;
  double purity() const;

 private:
  ComplexMatrix m_;
};

/// Reduced density operator on the `keep` factor.
DensityOperator partial_trace(const BipartiteState& psi, Subsystem keep);
/// Throws DimensionError if dims do not match rho.
DensityOperator partial_trace(const DensityOperator& rho, BipartiteDims dims, Subsystem keep);

/// tr(rho A), imaginary part checked and dropped.
double expectation_value(const DensityOperator& rho, const ComplexMatrix& obs,
                         const ToleranceConfig& tol = default_tolerances());

}  // namespace decoh
