#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "decoh/matrix.hpp"
#include "decoh/schmidt.hpp"
#include "decoh/state.hpp"
#include "decoh/tolerance.hpp"

namespace decoh {

/// Autonomous evolution on H_A (x) H_B with hbar = 1.
struct EvolutionConfig {
  ComplexMatrix hamiltonian;
  double t_max = 1.0;
  double dt = 1e-2;
  ToleranceConfig tolerances{};

  /// Number of steps n with n * dt <= t_max (up to a 1e-9 relative slack).
  std::size_t steps() const;
  double time_at(std::size_t k) const { return static_cast<double>(k) * dt; }
  /// Throws InvalidArgument for dt <= 0, t_max < dt or a non-Hermitian H,
  /// DimensionError if H does not act on `dims`.
  void validate(BipartiteDims dims) const;
};

/// exp(-i H dt) through the eigendecomposition of H.
ComplexMatrix propagator(const ComplexMatrix& h, double dt,
                         const ToleranceConfig& tol = default_tolerances());

struct Evolution {
  RealVector times;
  std::vector<BipartiteState> states;
  std::size_t renormalizations = 0;
};

using StateVisitor = std::function<void(std::size_t step, double t, const BipartiteState& psi)>;

/// Steps psi0 with a single precomputed propagator and hands every sample
/// (including t = 0) to `visit`. Returns how many times the state had to be
/// renormalized because its norm drifted past tol.state_norm.
std::size_t evolve_each(const BipartiteState& psi0, const EvolutionConfig& cfg,
                        const StateVisitor& visit);

Evolution evolve(const BipartiteState& psi0, const EvolutionConfig& cfg);

struct InterchangeEvent {
  std::size_t step;
  std::size_t track;
  double overlap;  // |<phi_track(t_prev)|phi_track(t)>| after alignment
};

struct SchmidtTrajectory {
  RealVector times;
  std::vector<RealVector> coeff_tracks;   // [step][track], aligned to the previous step
  std::vector<RealVector> sorted_coeffs;  // [step][i], plain descending order
  RealVector entropies;                   // entanglement entropy per step (nats)
  RealVector gaps;                        // smallest adjacent |p_i - p_j| per step
  double min_gap = 0.0;                   // min over gaps
  std::vector<InterchangeEvent> interchanges;
  std::vector<SchmidtDecomposition> basis_snapshots;  // aligned; filled on request
};

struct TrackOptions {
  bool store_bases = false;
};

/// Exact evolution followed by a Schmidt decomposition per sample, each
/// aligned to the previous one.
SchmidtTrajectory track_schmidt(const BipartiteState& psi0, const EvolutionConfig& cfg,
                                TrackOptions opts = {});

/// Phase gauge for the basis rates. The Schmidt bases are defined only up to
/// a phase per component, so d(phi_i)/dt is gauge dependent.
enum class RateGauge {
  /// Keeps the phase-pivot convention of schmidt_decompose; this is what
  /// finite differences of successive decompositions reproduce.
  PivotPhase,
  /// <phi_i|d phi_i/dt> = 0; the whole phase rate is carried by Phi_i.
  PhaseOnEnvironment,
};

struct SchmidtRates {
  SchmidtDecomposition at;  // decomposition the rates refer to
  RealVector dsqrtp;        // d sqrt(p_i)/dt
  ComplexMatrix dphi;       // column i: d phi_i/dt (partnered columns only)
  ComplexMatrix dPhi;       // column i: d Phi_i/dt
};

/// Instantaneous rates of the Schmidt coefficients and bases under H.
/// Throws DegenerateSpectrum if two weights (or a weight and zero) are
/// closer than tol.degeneracy.
SchmidtRates schmidt_rates(const BipartiteState& psi, const ComplexMatrix& h,
                           RateGauge gauge = RateGauge::PivotPhase,
                           const ToleranceConfig& tol = default_tolerances());

/// i d(rho_B)/dt in the computational basis of B, assembled from the Schmidt
/// decomposition of psi and the matrix elements <phi_n Phi_m|H|psi>.
ComplexMatrix density_rate(const BipartiteState& psi, const ComplexMatrix& h,
                           const ToleranceConfig& tol = default_tolerances());

/// Matrix elements h_jm = <phi_j Phi_m|H|psi> in the product basis of `dec`.
ComplexMatrix product_basis_elements(const SchmidtDecomposition& dec, const ComplexMatrix& h,
                                     std::span<const Complex> psi);

}  // namespace decoh
