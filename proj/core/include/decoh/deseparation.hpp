#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "decoh/dynamics.hpp"
#include "decoh/matrix.hpp"
#include "decoh/state.hpp"
#include "decoh/tolerance.hpp"

namespace decoh {

/// Squared transition amplitudes out of |phi_0 Phi_0>, split by which factor moves.
struct DeseparationTerms {
  double both = 0.0;      // j != 0, m != 0  (this is A)
  double only_a = 0.0;    // j != 0, m == 0
  double only_b = 0.0;    // j == 0, m != 0
  double a() const { return both; }
  double b() const { return both + only_a + only_b; }
};

/// |<jm|H|00>|^2 summed by class, with |jm> = basis_a[:, j] (x) basis_b[:, m].
/// Column 0 of each basis must be phi0 / Phi0 (up to a phase) and the bases
/// must be orthonormal; InvalidArgument otherwise.
DeseparationTerms deseparation_terms(const ComplexMatrix& h, std::span<const Complex> phi0,
                                     std::span<const Complex> Phi0, const ComplexMatrix& basis_a,
                                     const ComplexMatrix& basis_b,
                                     const ToleranceConfig& tol = default_tolerances());

/// Deseparation parameter A = sum_{j != 0, m != 0} |<jm|H|00>|^2.
double deseparation_a(const ComplexMatrix& h, std::span<const Complex> phi0,
                      std::span<const Complex> Phi0, const ComplexMatrix& basis_a,
                      const ComplexMatrix& basis_b, const ToleranceConfig& tol = default_tolerances());

/// B = sum_{jm != 00} |<jm|H|00>|^2 >= A.
double deseparation_b(const ComplexMatrix& h, std::span<const Complex> phi0,
                      std::span<const Complex> Phi0, const ComplexMatrix& basis_a,
                      const ComplexMatrix& basis_b, const ToleranceConfig& tol = default_tolerances());

/// As above with the bases completed by Gram-Schmidt from phi0 and Phi0.
DeseparationTerms deseparation_terms(const ComplexMatrix& h, std::span<const Complex> phi0,
                                     std::span<const Complex> Phi0,
                                     const ToleranceConfig& tol = default_tolerances());

struct TimeWindow {
  double t_min = 0.0;
  double t_max = 0.1;
};

struct DeseparationReport {
  double a_param = 0.0;
  double b_param = 0.0;
  double fitted_a = 0.0;            // least squares of 1 - p0(t) = A t^2
  TimeWindow fit_window;
  double relative_error = 0.0;      // |fitted_a - a_param| / max(a_param, 1e-12)
  double linear_coefficient = 0.0;  // t^1 coefficient of a quartic diagnostic fit
  std::size_t samples = 0;
};

/// Evolves a separable psi0 over `window` with cfg's H and dt, tracks the
/// weight of the initially occupied Schmidt component, and fits the
/// small-time law. Throws InvalidArgument if psi0 is not separable or the
/// window holds fewer than 10 samples.
DeseparationReport fit_small_time(const BipartiteState& psi0, const EvolutionConfig& cfg,
                                  TimeWindow window);

/// Two truncated oscillators coupled by g (a^dagger b + a b^dagger).
struct OscillatorExchangeModel {
  std::size_t levels = 10;
  double coupling = 0.1;
  ComplexVector environment;  // empty means the vacuum
  double leakage_tolerance = 1e-6;

  ComplexMatrix hamiltonian() const;
  ComplexVector environment_state() const;
};

struct CandidateState {
  std::string label;
  ComplexVector amplitudes;   // normalized within the truncation
  double leakage = 0.0;       // norm lost to the truncation before renormalizing
};

/// Coherent state |alpha> from its displacement series on `levels` Fock levels.
CandidateState coherent_state(Complex alpha, std::size_t levels);
CandidateState fock_state(std::size_t n, std::size_t levels);

struct RobustnessEntry {
  std::string label;
  double a_param = 0.0;
  double b_param = 0.0;
  double mean_occupation = 0.0;
  double leakage = 0.0;
};

/// A and B for each candidate paired with the model's environment state,
/// sorted by increasing A (most robust first). Throws InvalidArgument when a
/// candidate's leakage exceeds model.leakage_tolerance or its dimension does
/// not match the truncation.
std::vector<RobustnessEntry> robustness_scan(const OscillatorExchangeModel& model,
                                             const std::vector<CandidateState>& states,
                                             const ToleranceConfig& tol = default_tolerances());

}  // namespace decoh
