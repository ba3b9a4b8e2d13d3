#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "decoh/dynamics.hpp"
#include "decoh/matrix.hpp"
#include "decoh/state.hpp"
#include "decoh/tolerance.hpp"

namespace decoh::models {

/// A ready-to-run scenario: initial state plus a recommended evolution.
struct ScenarioPreset {
  std::string name;
  BipartiteState psi0;
  EvolutionConfig config;
};

/// System qubit sum_i c_i |i> measured by n_env environment qubits that start
/// in |0...0>. H = coupling * sum_k |1><1| (x) sigma_x^(k): pointer states are
/// never disturbed (pure decoherence), and at t = pi / (2 coupling) the two
/// environment branches are orthogonal. Environment qubit 0 is the most
/// significant bit of the environment index.
///
/// The dense Hamiltonian needs 2^(n_env+1) <= tol.max_dimension; larger
/// environments are reachable through von_neumann_state_at only.
ScenarioPreset von_neumann_measurement(std::span<const Complex> c, std::size_t n_env, double coupling,
                                       const ToleranceConfig& tol = default_tolerances());

/// coupling * sum_k |1><1| (x) sigma_x^(k) on 2 x 2^n_env.
ComplexMatrix von_neumann_hamiltonian(std::size_t n_env, double coupling,
                                      const ToleranceConfig& tol = default_tolerances());

/// exp(-i H t) psi0 for the measurement model, built as a state vector by
/// applying the commuting controlled single-qubit propagators one
/// environment qubit at a time. No dense operator on the full space is formed.
BipartiteState von_neumann_state_at(std::span<const Complex> c, std::size_t n_env, double coupling,
                                    double t);

/// State of one environment qubit in the branch where the system is |branch>.
ComplexVector environment_qubit(int branch, double coupling, double t);

struct OverlapDecay {
  double product = 1.0;        // prod (1 - eps_i)
  double approximation = 1.0;  // exp(-sum eps_i)
  double gap = 0.0;            // |product - approximation|
};

/// Decoherence factor of a product of slightly disturbed environment
/// factors. Each eps must lie in [0, 1).
OverlapDecay overlap_product_decay(std::span<const double> epsilons);

/// Singlet (|01> - |10>)/sqrt(2) with a perturbing two-qubit Hamiltonian. An
/// empty `perturbation` selects a fixed generic coupling that lifts the
/// degeneracy.
ScenarioPreset bell_preset(const ComplexMatrix& perturbation = {});

/// The default perturbation used by bell_preset.
ComplexMatrix bell_default_perturbation();

/// Squared norm of the branches of n ideal measurements (outcome-1 weight p)
/// whose outcome frequency k/n deviates from p by more than delta.
/// Preconditions: 0 < p < 1, n >= 1, 0 < delta < max(p, 1 - p).
double maverick_norm_binomial(double p, std::size_t n, double delta);

/// Same quantity by splitting every branch at each of the n measurement
/// interactions and summing the branch norms. n <= 20.
double maverick_norm_enumerated(double p, std::size_t n, double delta);

/// Binomial value; for n <= 20 the enumeration is also run and the two must
/// agree to 1e-12 (InvariantViolation otherwise).
double maverick_norm(double p, std::size_t n, double delta);

}  // namespace decoh::models
