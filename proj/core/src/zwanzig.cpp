#include "decoh/zwanzig.hpp"

#include <cmath>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"

namespace decoh {

BipartiteDims ZwanzigProjector::output_dims(BipartiteDims in) const {
  if (is_separating()) return in;
  return std::get<SubsystemTrace>(kind_).keep == Subsystem::A ? BipartiteDims{in.a, 1}
                                                              : BipartiteDims{1, in.b};
}

DensityOperator apply_projector(const ZwanzigProjector& p, const DensityOperator& rho,
                                BipartiteDims dims) {
  if (rho.dim() != dims.total())
    throw DimensionError("apply_projector: operator dimension " + std::to_string(rho.dim()) +
                         " does not match " + std::to_string(dims.a) + "x" + std::to_string(dims.b));
  if (!p.is_separating())
    return partial_trace(rho, dims, std::get<ZwanzigProjector::SubsystemTrace>(p.kind()).keep);
  const DensityOperator ra = partial_trace(rho, dims, Subsystem::A);
  const DensityOperator rb = partial_trace(rho, dims, Subsystem::B);
  return DensityOperator(tensor_product(ra.matrix(), rb.matrix()).hermitian_part());
}

double entropy(const DensityOperator& rho, const ToleranceConfig& tol) {
  const RealVector ev = hermitian_eigenvalues(rho.matrix(), tol);
  double s = 0.0;
  for (double lam : ev) {
    if (lam < -tol.negative_eigenvalue)
      throw InvariantViolation("density_positive", "eigenvalue " + std::to_string(lam));
    if (lam <= 0.0) continue;
    s -= lam * std::log(lam);
  }
  return s;
}

double relevant_entropy(const ZwanzigProjector& p, const DensityOperator& rho, BipartiteDims dims,
                        const ToleranceConfig& tol) {
  if (!p.is_separating())
    return entropy(partial_trace(rho, dims, std::get<ZwanzigProjector::SubsystemTrace>(p.kind()).keep),
                   tol);
  return entropy(partial_trace(rho, dims, Subsystem::A), tol) +
         entropy(partial_trace(rho, dims, Subsystem::B), tol);
}

double relevant_entropy(const ZwanzigProjector& p, const BipartiteState& psi,
                        const ToleranceConfig& tol) {
  if (!p.is_separating())
    return entropy(partial_trace(psi, std::get<ZwanzigProjector::SubsystemTrace>(p.kind()).keep), tol);
  return entropy(partial_trace(psi, Subsystem::A), tol) + entropy(partial_trace(psi, Subsystem::B), tol);
}

RealVector ChannelRun::doorway_gap() const {
  RealVector g(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) g[k] = s_exact[k] - s_projected[k];
  return g;
}

ChannelRun channel_run(const BipartiteState& psi0, const EvolutionConfig& cfg,
                       const ZwanzigProjector& p, double dt_project) {
  const auto& tol = cfg.tolerances;
  const BipartiteDims dims = psi0.dims();
  cfg.validate(dims);
  if (!(dt_project >= cfg.dt))
    throw InvalidArgument("channel_run: dt_project must be >= dt");

  const double ratio = dt_project / cfg.dt;
  const bool single_segment = dt_project >= cfg.t_max;
  std::size_t every = 0;  // steps between projections; 0 = never inside the run
  if (!single_segment) {
    const double r = std::round(ratio);
    if (std::abs(ratio - r) > 1e-9 * ratio)
      throw InvalidArgument("channel_run: dt_project must be an integer multiple of dt");
    every = static_cast<std::size_t>(r);
    if (!p.is_separating())
      throw InvalidArgument("channel_run: the subsystem-trace projector leaves the full space; "
                            "use the separating projector or dt_project >= t_max");
  }

  const ComplexMatrix u = propagator(cfg.hamiltonian, cfg.dt, tol);
  const ComplexMatrix ud = u.adjoint();
  ComplexMatrix chain = DensityOperator::pure(psi0.amplitudes(), tol).matrix();

  ChannelRun run;
  run.dt_project = dt_project;
  evolve_each(psi0, cfg, [&](std::size_t step, double t, const BipartiteState& psi) {
    if (step > 0) {
      chain = (u * chain * ud).hermitian_part();
      // Keep the trace pinned at 1 against accumulated round-off.
      chain *= 1.0 / chain.trace().real();
      if (every != 0 && step % every == 0)
        chain = apply_projector(p, DensityOperator(chain, tol), dims).matrix();
    }
    run.times.push_back(t);
    run.s_exact.push_back(relevant_entropy(p, psi, tol));
    run.s_projected.push_back(relevant_entropy(p, DensityOperator(chain, tol), dims, tol));
  });
  return run;
}

SubadditivityResult subadditivity_check(const DensityOperator& rho, BipartiteDims dims,
                                        const ToleranceConfig& tol) {
  SubadditivityResult r;
  r.s_global = entropy(rho, tol);
  r.s_a = entropy(partial_trace(rho, dims, Subsystem::A), tol);
  r.s_b = entropy(partial_trace(rho, dims, Subsystem::B), tol);
  if (r.s_a + r.s_b < r.s_global - 1e-9)
    throw InvariantViolation("subadditivity", "S_A + S_B = " + std::to_string(r.s_a + r.s_b) +
                                                  " < S = " + std::to_string(r.s_global));
  return r;
}

}  // namespace decoh
