#include "decoh/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"

namespace decoh {

std::size_t EvolutionConfig::steps() const {
  return static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-9)));
}

void EvolutionConfig::validate(BipartiteDims dims) const {
  if (!(dt > 0.0)) throw InvalidArgument("EvolutionConfig: dt must be positive");
  if (!(t_max >= dt)) throw InvalidArgument("EvolutionConfig: t_max must be >= dt");
  if (!hamiltonian.is_square() || hamiltonian.rows() != dims.total()) {
    throw DimensionError("EvolutionConfig: Hamiltonian is " + std::to_string(hamiltonian.rows()) +
                         "x" + std::to_string(hamiltonian.cols()) + ", state space has dimension " +
                         std::to_string(dims.total()));
  }
  if (hamiltonian.hermiticity_error() > tolerances.hermitian)
    throw InvalidArgument("EvolutionConfig: Hamiltonian is not Hermitian");
}

ComplexMatrix propagator(const ComplexMatrix& h, double dt, const ToleranceConfig& tol) {
  const EigenDecomposition eig = hermitian_eigh(h, tol);
  const std::size_t n = h.rows();
  ComplexMatrix u(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex phase = std::polar(1.0, -eig.values[k] * dt);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = eig.vectors(i, k) * phase;
      for (std::size_t j = 0; j < n; ++j) u(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return u;
}

std::size_t evolve_each(const BipartiteState& psi0, const EvolutionConfig& cfg,
                        const StateVisitor& visit) {
  cfg.validate(psi0.dims());
  const auto& tol = cfg.tolerances;
  const ComplexMatrix u = propagator(cfg.hamiltonian, cfg.dt, tol);
  const std::size_t n = cfg.steps();

  std::size_t renormalizations = 0;
  ComplexVector amps(psi0.amplitudes().begin(), psi0.amplitudes().end());
  visit(0, 0.0, psi0);
  for (std::size_t k = 1; k <= n; ++k) {
    amps = u * amps;
    const double nrm = norm(amps);
    if (std::abs(nrm * nrm - 1.0) > tol.state_norm) {
      if (std::abs(nrm - 1.0) > tol.norm_drift) {
        std::clog << "decoh: norm drift " << nrm - 1.0 << " at t=" << cfg.time_at(k)
                  << ", renormalizing\n";
      }
      for (auto& z : amps) z /= nrm;
      ++renormalizations;
    }
    visit(k, cfg.time_at(k), BipartiteState(psi0.dim_a(), psi0.dim_b(), amps, tol));
  }
  return renormalizations;
}

Evolution evolve(const BipartiteState& psi0, const EvolutionConfig& cfg) {
  Evolution out;
  out.times.reserve(cfg.steps() + 1);
  out.states.reserve(cfg.steps() + 1);
  out.renormalizations = evolve_each(psi0, cfg, [&](std::size_t, double t, const BipartiteState& s) {
    out.times.push_back(t);
    out.states.push_back(s);
  });
  return out;
}

SchmidtTrajectory track_schmidt(const BipartiteState& psi0, const EvolutionConfig& cfg,
                                TrackOptions opts) {
  const auto& tol = cfg.tolerances;
  SchmidtTrajectory tr;
  tr.min_gap = std::numeric_limits<double>::infinity();
  std::optional<SchmidtDecomposition> prev;

  evolve_each(psi0, cfg, [&](std::size_t step, double t, const BipartiteState& psi) {
    const SchmidtDecomposition raw = schmidt_decompose(psi, tol);
    SchmidtDecomposition aligned = prev ? align_to_reference(raw, *prev, tol) : raw;

    if (prev) {
      for (std::size_t i = 0; i < aligned.coeffs.size(); ++i) {
        Complex ov = 0.0;
        for (std::size_t r = 0; r < aligned.basis_a.rows(); ++r)
          ov += std::conj(prev->basis_a(r, i)) * aligned.basis_a(r, i);
        if (std::abs(ov) < tol.interchange_overlap) tr.interchanges.push_back({step, i, std::abs(ov)});
      }
    }

    const double gap = raw.min_adjacent_gap();
    tr.times.push_back(t);
    tr.sorted_coeffs.push_back(raw.coeffs);
    tr.coeff_tracks.push_back(aligned.coeffs);
    tr.entropies.push_back(entanglement_entropy(raw, tol));
    tr.gaps.push_back(gap);
    tr.min_gap = std::min(tr.min_gap, gap);

    double total = 0.0;
    for (double c : raw.coeffs) total += c * c;
    if (std::abs(total - 1.0) > tol.norm_drift)
      throw InvariantViolation("schmidt_normalization", "sum p_i = " + std::to_string(total));

    if (opts.store_bases) tr.basis_snapshots.push_back(aligned);
    prev = std::move(aligned);
  });
  return tr;
}

ComplexMatrix product_basis_elements(const SchmidtDecomposition& dec, const ComplexMatrix& h,
                                     std::span<const Complex> psi) {
  const auto [da, db] = dec.dims();
  if (h.rows() != da * db || !h.is_square())
    throw DimensionError("product_basis_elements: Hamiltonian does not match state");
  const ComplexVector hpsi = h * psi;
  const ComplexMatrix g(da, db, hpsi);
  // h_jm = sum_ab conj(phi_j[a]) conj(Phi_m[b]) (H psi)[a, b]
  return dec.basis_a.adjoint() * g * dec.basis_b.conj();
}

SchmidtRates schmidt_rates(const BipartiteState& psi, const ComplexMatrix& h, RateGauge gauge,
                           const ToleranceConfig& tol) {
  SchmidtRates out;
  out.at = schmidt_decompose(psi, tol);
  const auto& dec = out.at;
  const auto [da, db] = dec.dims();
  const std::size_t k = dec.coeffs.size();
  const RealVector p = dec.weights();

  // The basis rates carry 1/(p_i - p_j), including p_j = 0 for unpartnered
  // basis vectors and 1/sqrt(p_i) in the diagonal phase term.
  for (std::size_t i = 0; i < k; ++i) {
    if (p[i] < tol.degeneracy)
      throw DegenerateSpectrum("schmidt_rates: weight p_" + std::to_string(i) + " = " +
                               std::to_string(p[i]) + " is numerically zero");
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::abs(p[i] - p[j]) < tol.degeneracy)
        throw DegenerateSpectrum("schmidt_rates: |p_" + std::to_string(i) + " - p_" +
                                 std::to_string(j) + "| = " + std::to_string(std::abs(p[i] - p[j])));
  }

  const ComplexMatrix hm = product_basis_elements(dec, h, psi.amplitudes());
  auto s_of = [&](std::size_t j) { return j < k ? dec.coeffs[j] : 0.0; };
  auto p_of = [&](std::size_t j) { return j < k ? p[j] : 0.0; };
  // h_jm with indices outside the rectangle only ever multiply s = 0.
  auto hel = [&](std::size_t j, std::size_t m) { return (j < da && m < db) ? hm(j, m) : Complex{}; };
  const Complex I(0.0, 1.0);

  out.dsqrtp.resize(k);
  out.dphi = ComplexMatrix(da, da);
  out.dPhi = ComplexMatrix(db, db);
  ComplexMatrix x(da, k);  // <phi_j|d phi_i/dt>
  ComplexMatrix y(db, k);  // <Phi_j|d Phi_i/dt>

  for (std::size_t i = 0; i < k; ++i) {
    const double si = dec.coeffs[i];
    const Complex hii = hm(i, i);
    out.dsqrtp[i] = hii.imag();
    for (std::size_t j = 0; j < da; ++j) {
      if (j == i) continue;
      x(j, i) = -I * (si * hel(j, i) - s_of(j) * std::conj(hel(i, j))) / (p[i] - p_of(j));
    }
    for (std::size_t j = 0; j < db; ++j) {
      if (j == i) continue;
      y(j, i) = -I * (si * hel(i, j) - s_of(j) * std::conj(hel(j, i))) / (p[i] - p_of(j));
    }
    // Only X_ii + Y_ii is fixed by the dynamics: s_i (X_ii + Y_ii) = -i Re h_ii.
    const Complex phase_sum = -I * hii.real() / si;
    Complex xii = 0.0;
    if (gauge == RateGauge::PivotPhase) {
      std::size_t piv = 0;
      while (piv + 1 < da && std::abs(dec.basis_a(piv, i)) <= tol.phase_pivot) ++piv;
      Complex r = 0.0;
      for (std::size_t j = 0; j < da; ++j)
        if (j != i) r += dec.basis_a(piv, j) * x(j, i);
      xii = -I * r.imag() / dec.basis_a(piv, i).real();
    }
    x(i, i) = xii;
    y(i, i) = phase_sum - xii;
  }

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t r = 0; r < da; ++r) out.dphi(r, i) += dec.basis_a(r, j) * x(j, i);
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t r = 0; r < db; ++r) out.dPhi(r, i) += dec.basis_b(r, j) * y(j, i);
  }
  return out;
}

ComplexMatrix density_rate(const BipartiteState& psi, const ComplexMatrix& h,
                           const ToleranceConfig& tol) {
  const SchmidtDecomposition dec = schmidt_decompose(psi, tol);
  const auto [da, db] = dec.dims();
  const std::size_t k = dec.coeffs.size();
  const ComplexMatrix hm = product_basis_elements(dec, h, psi.amplitudes());
  auto s_of = [&](std::size_t j) { return j < k ? dec.coeffs[j] : 0.0; };

  // <Phi_m| i d(rho_B)/dt |Phi_n> = s_n h_nm - s_m conj(h_mn)
  ComplexMatrix m(db, db);
  for (std::size_t a = 0; a < db; ++a)
    for (std::size_t b = 0; b < db; ++b) {
      Complex v = 0.0;
      if (b < da && s_of(b) != 0.0) v += s_of(b) * hm(b, a);
      if (a < da && s_of(a) != 0.0) v -= s_of(a) * std::conj(hm(a, b));
      m(a, b) = v;
    }
  ComplexMatrix rate = dec.basis_b * m * dec.basis_b.adjoint();

  // rate = i d(rho)/dt must be anti-Hermitian.
  const ComplexMatrix herm = rate + rate.adjoint();
  const double scale = std::max(1.0, rate.frobenius_norm());
  if (herm.frobenius_norm() > tol.density_hermitian * scale)
    throw InvariantViolation("density_rate_hermitian",
                             "i drho/dt deviates from anti-Hermitian by " +
                                 std::to_string(herm.frobenius_norm()));
  return rate;
}

}  // namespace decoh
