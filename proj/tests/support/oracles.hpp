#pragma once

// Reference computations shared by the unit and acceptance suites. They use
// only matrix arithmetic and the SVD track, never the rate formulas.

#include <algorithm>
#include <cmath>
#include <span>

#include "decoh/dynamics.hpp"
#include "decoh/matrix.hpp"
#include "decoh/schmidt.hpp"
#include "decoh/state.hpp"

namespace decoh::testing {

/// Operator on H_B (x) H_A with the same action as `h` on H_A (x) H_B.
inline ComplexMatrix swap_factors(const ComplexMatrix& h, std::size_t da, std::size_t db) {
  ComplexMatrix out(da * db, da * db);
  for (std::size_t ia = 0; ia < da; ++ia)
    for (std::size_t ib = 0; ib < db; ++ib)
      for (std::size_t ja = 0; ja < da; ++ja)
        for (std::size_t jb = 0; jb < db; ++jb)
          out(ib * da + ia, jb * da + ja) = h(ia * db + ib, ja * db + jb);
  return out;
}

/// Tr_A of an arbitrary operator on H_A (x) H_B, by index summation.
inline ComplexMatrix trace_out_a(const ComplexMatrix& m, std::size_t da, std::size_t db) {
  ComplexMatrix out(db, db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j) out(i, j) += m(a * db + i, a * db + j);
  return out;
}

inline BipartiteState step(const BipartiteState& psi, const ComplexMatrix& h, double t) {
  return BipartiteState::normalized(psi.dim_a(), psi.dim_b(), propagator(h, t) * psi.amplitudes());
}

/// max_i |rates.dsqrtp[i] - central difference of the sorted SVD coefficients|.
inline double sqrtp_fd_residual(const BipartiteState& psi, const ComplexMatrix& h, const RealVector& dsqrtp,
                                double delta) {
  const auto plus = schmidt_decompose(step(psi, h, delta));
  const auto minus = schmidt_decompose(step(psi, h, -delta));
  double worst = 0.0;
  for (std::size_t i = 0; i < dsqrtp.size(); ++i)
    worst = std::max(worst, std::abs(dsqrtp[i] - (plus.coeffs[i] - minus.coeffs[i]) / (2.0 * delta)));
  return worst;
}

/// Largest entry of the difference between partnered basis rates and central
/// differences of the pivot-phased decompositions at t +/- delta.
inline double basis_fd_residual(const BipartiteState& psi, const ComplexMatrix& h, const SchmidtRates& r,
                                double delta) {
  const auto plus = schmidt_decompose(step(psi, h, delta));
  const auto minus = schmidt_decompose(step(psi, h, -delta));
  double worst = 0.0;
  for (std::size_t i = 0; i < r.at.rank_bound(); ++i) {
    for (std::size_t row = 0; row < psi.dim_a(); ++row) {
      const Complex fd = (plus.basis_a(row, i) - minus.basis_a(row, i)) / (2.0 * delta);
      worst = std::max(worst, std::abs(r.dphi(row, i) - fd));
    }
    for (std::size_t row = 0; row < psi.dim_b(); ++row) {
      const Complex fd = (plus.basis_b(row, i) - minus.basis_b(row, i)) / (2.0 * delta);
      worst = std::max(worst, std::abs(r.dPhi(row, i) - fd));
    }
  }
  return worst;
}

/// Largest entry of rate - i * (rho_B(t + delta) - rho_B(t - delta)) / (2 delta).
inline double density_fd_residual(const BipartiteState& psi, const ComplexMatrix& h, const ComplexMatrix& rate,
                                  double delta) {
  const auto plus = partial_trace(step(psi, h, delta), Subsystem::B).matrix();
  const auto minus = partial_trace(step(psi, h, -delta), Subsystem::B).matrix();
  ComplexMatrix fd = plus - minus;
  fd *= Complex(0.0, 1.0 / (2.0 * delta));
  return max_abs_diff(rate, fd);
}

}  // namespace decoh::testing
