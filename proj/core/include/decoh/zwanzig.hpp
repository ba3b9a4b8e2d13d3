#pragma once

#include <tuple>
#include <variant>

#include "decoh/dynamics.hpp"
#include "decoh/state.hpp"
#include "decoh/tolerance.hpp"

namespace decoh {

/// Idempotent relevance projectors on bipartite density operators.
///
/// SubsystemTrace keeps one factor's reduced operator, returned on that factor
/// alone. Separating discards the correlations: rho -> rho_A (x) rho_B, which
/// stays on the full space and can be composed with the dynamics.
class ZwanzigProjector {
 public:
  struct SubsystemTrace {
    Subsystem keep;
  };
  struct Separating {};

  static ZwanzigProjector subsystem_trace(Subsystem keep) { return ZwanzigProjector(SubsystemTrace{keep}); }
  static ZwanzigProjector separating() { return ZwanzigProjector(Separating{}); }

  bool is_separating() const noexcept { return std::holds_alternative<Separating>(kind_); }
  const std::variant<SubsystemTrace, Separating>& kind() const noexcept { return kind_; }

  /// Dimensions of P(rho) seen as a bipartite operator: the traced factor
  /// becomes one-dimensional, so P can be applied to its own output.
  BipartiteDims output_dims(BipartiteDims in) const;

 private:
  explicit ZwanzigProjector(std::variant<SubsystemTrace, Separating> k) : kind_(k) {}
  std::variant<SubsystemTrace, Separating> kind_;
};

DensityOperator apply_projector(const ZwanzigProjector& p, const DensityOperator& rho,
                                BipartiteDims dims);

/// -tr(rho ln rho) in nats. Eigenvalues in [-tol.negative_eigenvalue, 0) are
/// clipped to zero; anything lower throws InvariantViolation.
double entropy(const DensityOperator& rho, const ToleranceConfig& tol = default_tolerances());

/// Entropy of P(rho). For the separating projector this is S(rho_A) + S(rho_B),
/// which avoids diagonalizing the full product.
double relevant_entropy(const ZwanzigProjector& p, const DensityOperator& rho, BipartiteDims dims,
                        const ToleranceConfig& tol = default_tolerances());
/// Same for the pure state |psi><psi|, using the reduced operators directly.
double relevant_entropy(const ZwanzigProjector& p, const BipartiteState& psi,
                        const ToleranceConfig& tol = default_tolerances());

/// Coarse-grained bookkeeping of an exact run against a projection-interrupted
/// one. Not a physical evolution law: the interrupted branch discards
/// information by fiat every dt_project.
struct ChannelRun {
  RealVector times;
  RealVector s_exact;      // S(P rho_exact(t))
  RealVector s_projected;  // S(P rho_chain(t)), rho_chain re-projected every dt_project
  double dt_project = 0.0;

  /// S(P rho_exact(t)) - s_projected(t); negative values mean the interrupted
  /// branch has lost information that the exact one can still return.
  RealVector doorway_gap() const;
};

/// dt_project must be a positive integer multiple of cfg.dt. The subsystem
/// trace projector leaves the full space, so it is only accepted when
/// dt_project >= cfg.t_max (no interruption before the end of the run).
ChannelRun channel_run(const BipartiteState& psi0, const EvolutionConfig& cfg,
                       const ZwanzigProjector& p, double dt_project);

struct SubadditivityResult {
  double s_global = 0.0;
  double s_a = 0.0;
  double s_b = 0.0;
};

/// S(rho), S(rho_A), S(rho_B); throws InvariantViolation if
/// S(rho_A) + S(rho_B) < S(rho) - 1e-9.
SubadditivityResult subadditivity_check(const DensityOperator& rho, BipartiteDims dims,
                                        const ToleranceConfig& tol = default_tolerances());

}  // namespace decoh
