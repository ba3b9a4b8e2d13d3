#pragma once

#include <cstddef>

namespace decoh {

/// Every numerical threshold used by the library, in one place.
struct ToleranceConfig {
  double hermitian = 1e-12;           // max|M - M^dagger| for Hermitian-flagged matrices
  double density_hermitian = 1e-10;   // density operators
  double state_norm = 1e-10;          // | ||psi||^2 - 1 |
  double trace = 1e-10;               // | tr rho - 1 |
  double negative_eigenvalue = 1e-10; // eigenvalues of rho may dip to -this
  double orthonormal = 1e-10;         // max|Q^dagger Q - I|
  double eig_residual = 1e-9;         // relative to ||M||
  double svd_reconstruction = 1e-9;   // relative to ||M||
  double degeneracy = 1e-9;           // |p_i - p_j| below this counts as degenerate
  double phase_pivot = 1e-8;          // modulus for the phase-fixing component
  double entropy_cutoff = 1e-15;      // p_i below this dropped from -sum p ln p
  double norm_drift = 1e-9;           // allowed drift of ||psi|| during evolution
  double interchange_overlap = 0.5;   // aligned overlap below this flags an identity interchange
  double truncation_leakage = 1e-6;   // Fock-space truncation budget
  std::size_t max_dimension = 4096;   // cap on dense matrix dimension
  int jacobi_max_sweeps = 100;
};

/// Library-wide defaults.
inline const ToleranceConfig& default_tolerances() {
  static const ToleranceConfig cfg{};
  return cfg;
}

}  // namespace decoh
