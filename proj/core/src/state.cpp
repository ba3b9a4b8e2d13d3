#include "decoh/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"

namespace decoh {

BipartiteState::BipartiteState(std::size_t dim_a, std::size_t dim_b, ComplexVector amplitudes,
                               const ToleranceConfig& tol)
    : dims_{dim_a, dim_b}, amps_(std::move(amplitudes)) {
  if (dim_a == 0 || dim_b == 0) throw DimensionError("BipartiteState: zero dimension");
  if (amps_.size() != dim_a * dim_b) {
    throw DimensionError("BipartiteState: " + std::to_string(amps_.size()) + " amplitudes for " +
                         std::to_string(dim_a) + "x" + std::to_string(dim_b));
  }
  const double n = norm(amps_);
  if (std::abs(n * n - 1.0) > tol.state_norm)
    throw InvalidArgument("BipartiteState: squared norm " + std::to_string(n * n) + " != 1");
}

BipartiteState BipartiteState::normalized(std::size_t dim_a, std::size_t dim_b,
                                          ComplexVector amplitudes) {
  const double n = norm(amplitudes);
  if (n == 0.0) throw InvalidArgument("BipartiteState::normalized: zero vector");
  for (auto& z : amplitudes) z /= n;
  return {dim_a, dim_b, std::move(amplitudes)};
}

BipartiteState BipartiteState::product(std::span<const Complex> phi, std::span<const Complex> Phi,
                                       const ToleranceConfig& tol) {
  ComplexVector amps(phi.size() * Phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (std::size_t j = 0; j < Phi.size(); ++j) amps[i * Phi.size() + j] = phi[i] * Phi[j];
  return {phi.size(), Phi.size(), std::move(amps), tol};
}

ComplexMatrix BipartiteState::amplitude_matrix() const { return {dims_.a, dims_.b, amps_}; }

BipartiteState BipartiteState::swapped() const {
  ComplexVector amps(amps_.size());
  for (std::size_t i = 0; i < dims_.a; ++i)
    for (std::size_t j = 0; j < dims_.b; ++j) amps[j * dims_.a + i] = amps_[i * dims_.b + j];
  return {dims_.b, dims_.a, std::move(amps)};
}

DensityOperator::DensityOperator(ComplexMatrix m, const ToleranceConfig& tol) : m_(std::move(m)) {
  if (!m_.is_square() || m_.rows() == 0) throw DimensionError("DensityOperator: not square");
  if (m_.hermiticity_error() > tol.density_hermitian)
    throw InvalidArgument("DensityOperator: not Hermitian (error " +
                          std::to_string(m_.hermiticity_error()) + ")");
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > tol.trace)
    throw InvalidArgument("DensityOperator: trace " + std::to_string(tr.real()) + " != 1");
}

DensityOperator DensityOperator::pure(std::span<const Complex> psi, const ToleranceConfig& tol) {
  return DensityOperator(ComplexMatrix::outer(psi, psi), tol);
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
  return DensityOperator(std::move(m));
}

void DensityOperator::check_spectrum(const ToleranceConfig& tol) const {
  const RealVector ev = hermitian_eigenvalues(m_.hermitian_part(), tol);
  if (!ev.empty() && ev.back() < -tol.negative_eigenvalue)
    throw InvariantViolation("density_positive", "eigenvalue " + std::to_string(ev.back()));
}

double DensityOperator::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double s = 0.0;
  for (const auto& z : m_.data()) s += std::norm(z);
  return s;
}

DensityOperator partial_trace(const BipartiteState& psi, Subsystem keep) {
  const std::size_t da = psi.dim_a();
  const std::size_t db = psi.dim_b();
  const auto amps = psi.amplitudes();
  if (keep == Subsystem::A) {
    ComplexMatrix r(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = i; j < da; ++j) {
        Complex s = 0.0;
        for (std::size_t b = 0; b < db; ++b) s += amps[i * db + b] * std::conj(amps[j * db + b]);
        r(i, j) = s;
        r(j, i) = std::conj(s);
      }
    return DensityOperator(std::move(r));
  }
  ComplexMatrix r(db, db);
  for (std::size_t a = 0; a < da; ++a) {
    const Complex* row = amps.data() + a * db;
    for (std::size_t i = 0; i < db; ++i) {
      const Complex ri = row[i];
      if (ri == Complex{}) continue;
      for (std::size_t j = 0; j < db; ++j) r(i, j) += ri * std::conj(row[j]);
    }
  }
  return DensityOperator(r.hermitian_part());
}

DensityOperator partial_trace(const DensityOperator& rho, BipartiteDims dims, Subsystem keep) {
  if (rho.dim() != dims.total()) {
    throw DimensionError("partial_trace: operator dimension " + std::to_string(rho.dim()) +
                         " != " + std::to_string(dims.a) + "x" + std::to_string(dims.b));
  }
  const auto& m = rho.matrix();
  if (keep == Subsystem::A) {
    ComplexMatrix r(dims.a, dims.a);
    for (std::size_t i = 0; i < dims.a; ++i)
      for (std::size_t j = 0; j < dims.a; ++j) {
        Complex s = 0.0;
        for (std::size_t b = 0; b < dims.b; ++b) s += m(i * dims.b + b, j * dims.b + b);
        r(i, j) = s;
      }
    return DensityOperator(r.hermitian_part());
  }
  ComplexMatrix r(dims.b, dims.b);
  for (std::size_t i = 0; i < dims.b; ++i)
    for (std::size_t j = 0; j < dims.b; ++j) {
      Complex s = 0.0;
      for (std::size_t a = 0; a < dims.a; ++a) s += m(a * dims.b + i, a * dims.b + j);
      r(i, j) = s;
    }
  return DensityOperator(r.hermitian_part());
}

double expectation_value(const DensityOperator& rho, const ComplexMatrix& obs,
                         const ToleranceConfig& tol) {
  if (obs.rows() != rho.dim() || !obs.is_square())
    throw DimensionError("expectation_value: observable does not match operator dimension");
  if (obs.hermiticity_error() > tol.hermitian * std::max(1.0, obs.frobenius_norm()))
    throw InvalidArgument("expectation_value: observable is not Hermitian");
  const auto& r = rho.matrix();
  Complex s = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t k = 0; k < r.cols(); ++k) s += r(i, k) * obs(k, i);
  if (std::abs(s.imag()) > tol.density_hermitian * std::max(1.0, obs.frobenius_norm()))
    throw InvariantViolation("expectation_real", "imaginary part " + std::to_string(s.imag()));
  return s.real();
}

}  // namespace decoh
