#pragma once

// Seeded generators for property-style tests. Everything here is built from
// first principles (no library decompositions) so it can serve as an oracle.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>

#include "decoh/matrix.hpp"
#include "decoh/state.hpp"

namespace decoh::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<>(lo, hi)(gen_); }
  double gauss() { return std::normal_distribution<>(0.0, 1.0)(gen_); }
  Complex cgauss() { return {gauss(), gauss()}; }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }

  ComplexVector vector(std::size_t n) {
    ComplexVector v(n);
    for (auto& z : v) z = cgauss();
    return v;
  }

  ComplexVector unit_vector(std::size_t n) {
    ComplexVector v = vector(n);
    const double nv = norm(v);
    for (auto& z : v) z /= nv;
    return v;
  }

  BipartiteState state(std::size_t da, std::size_t db) {
    return BipartiteState::normalized(da, db, vector(da * db));
  }

  ComplexMatrix matrix(std::size_t r, std::size_t c) {
    ComplexMatrix m(r, c);
    for (auto& z : m.data()) z = cgauss();
    return m;
  }

  ComplexMatrix hermitian(std::size_t n) { return matrix(n, n).hermitian_part(); }

  /// Unitary from modified Gram-Schmidt on a Gaussian matrix.
  ComplexMatrix unitary(std::size_t n) {
    ComplexMatrix m = matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      ComplexVector v = m.column(c);
      for (std::size_t j = 0; j < c; ++j) {
        const ComplexVector q = m.column(j);
        const Complex ov = inner(q, v);
        for (std::size_t r = 0; r < n; ++r) v[r] -= ov * q[r];
      }
      const double nv = norm(v);
      for (auto& z : v) z /= nv;
      m.set_column(c, v);
    }
    return m;
  }

  /// Mixed state: G G^dagger / tr for a Gaussian G of the given rank.
  DensityOperator density(std::size_t n, std::size_t rank) {
    const ComplexMatrix g = matrix(n, rank);
    ComplexMatrix rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    return DensityOperator(rho.hermitian_part());
  }

  /// Two-qubit Hermitian with every entry of modulus in [lo, hi].
  ComplexMatrix fully_coupled_two_qubit(double lo, double hi) {
    ComplexMatrix h(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      h(i, i) = uniform(-hi, hi);
      if (std::abs(h(i, i).real()) < lo) h(i, i) = h(i, i).real() < 0 ? -lo : lo;
      for (std::size_t j = i + 1; j < 4; ++j) {
        h(i, j) = std::polar(uniform(lo, hi), uniform(0.0, 2.0 * std::numbers::pi));
        h(j, i) = std::conj(h(i, j));
      }
    }
    return h;
  }

 private:
  std::mt19937_64 gen_;
};

/// Dense matrix-vector state evolution by Taylor series of exp(-iHt), used as
/// an oracle independent of the eigendecomposition-based propagator.
inline ComplexVector taylor_evolve(const ComplexMatrix& h, std::span<const Complex> psi, double t,
                                   int substeps = 64, int order = 30) {
  ComplexVector v(psi.begin(), psi.end());
  const double dt = t / substeps;
  for (int s = 0; s < substeps; ++s) {
    ComplexVector term = v;
    ComplexVector acc = v;
    for (int k = 1; k <= order; ++k) {
      term = h * term;
      for (auto& z : term) z *= Complex(0.0, -dt / k);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
    }
    v = acc;
  }
  return v;
}

}  // namespace decoh::testing
