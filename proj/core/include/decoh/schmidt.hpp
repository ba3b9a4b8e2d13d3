#pragma once

#include <cstddef>
#include <vector>

#include "decoh/matrix.hpp"
#include "decoh/state.hpp"
#include "decoh/tolerance.hpp"

namespace decoh {

/// psi = sum_i coeffs[i] * phi_i (x) Phi_i.
///
/// basis_a / basis_b are full unitaries (dim_a x dim_a, dim_b x dim_b); only
/// the first coeffs.size() = min(dim_a, dim_b) columns have partners, the rest
/// complete the bases. Phase convention: the first component of phi_i whose
/// modulus exceeds the phase-pivot threshold is real and positive; the
/// compensating phase sits in Phi_i.
struct SchmidtDecomposition {
  RealVector coeffs;               // sqrt(p_i), descending after schmidt_decompose
  ComplexMatrix basis_a;           // columns phi_i
  ComplexMatrix basis_b;           // columns Phi_i
  std::vector<bool> degeneracy_flags;  // [i] marks |p_i - p_{i+1}| < threshold

  std::size_t rank_bound() const noexcept { return coeffs.size(); }
  BipartiteDims dims() const noexcept { return {basis_a.rows(), basis_b.rows()}; }
  /// p_i = coeffs[i]^2
  RealVector weights() const;
  /// Smallest |p_i - p_{i+1}| over adjacent entries (infinity for a single coefficient).
  double min_adjacent_gap() const;
  bool any_degenerate() const;
  /// sum_i coeffs[i] phi_i (x) Phi_i as an amplitude vector.
  ComplexVector reconstruct() const;
};

SchmidtDecomposition schmidt_decompose(const BipartiteState& psi,
                                       const ToleranceConfig& tol = default_tolerances());

/// sum_i |phi_i> p_i <phi_i| (or the Phi analogue for Subsystem::B).
DensityOperator reduced_density(const SchmidtDecomposition& dec, Subsystem which);

/// -sum p_i ln p_i in nats, dropping p_i below tol.entropy_cutoff.
double entanglement_entropy(const SchmidtDecomposition& dec,
                            const ToleranceConfig& tol = default_tolerances());

/// Sum over i of |<phi_i^ref|phi_i>| for the partnered columns.
double alignment_score(const SchmidtDecomposition& dec, const SchmidtDecomposition& ref);

/// Reorders and rephases the Schmidt components of `dec` for continuity with
/// `ref`: components are permuted to maximise alignment_score, degenerate
/// blocks are rotated by the unitary polar factor of their overlap with the
/// reference block, and each phi_i is rephased so <phi_i^ref|phi_i> >= 0.
/// Every change is mirrored on Phi_i so the represented state is unchanged.
SchmidtDecomposition align_to_reference(const SchmidtDecomposition& dec,
                                        const SchmidtDecomposition& ref,
                                        const ToleranceConfig& tol = default_tolerances());

}  // namespace decoh
