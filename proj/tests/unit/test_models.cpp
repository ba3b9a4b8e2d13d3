#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"
#include "decoh/models.hpp"
#include "decoh/operators.hpp"
#include "decoh/schmidt.hpp"
#include "support/random.hpp"

using namespace decoh;
using namespace decoh::models;
using decoh::testing::Rng;

namespace {

Complex rho01(const BipartiteState& psi) { return partial_trace(psi, Subsystem::A).matrix()(0, 1); }

}  // namespace

TEST_SUITE("von_neumann_measurement") {
  TEST_CASE("pointer eigenstate never entangles") {
    const auto preset = von_neumann_measurement(ComplexVector{1.0, 0.0}, 3, 1.0);
    const auto ev = evolve(preset.psi0, preset.config);
    for (const auto& s : ev.states) {
      const auto rho = partial_trace(s, Subsystem::A).matrix();
      CHECK(std::abs(rho(0, 0) - 1.0) <= 1e-12);
      CHECK(schmidt_decompose(s).coeffs[0] == doctest::Approx(1.0));
    }
  }

  TEST_CASE("one environment qubit at t = pi/2 realises an ideal record") {
    const Complex alpha(0.6, 0.0);
    const Complex beta(0.0, 0.8);
    const auto preset = von_neumann_measurement(ComplexVector{alpha, beta}, 1, 1.0);
    CHECK(preset.config.t_max == doctest::Approx(std::numbers::pi / 2.0));
    const auto end = evolve(preset.psi0, preset.config).states.back();
    const auto rho = partial_trace(end, Subsystem::A).matrix();
    CHECK(std::abs(rho(0, 1)) <= 1e-12);
    CHECK(std::abs(rho(0, 0) - 0.36) <= 1e-12);
    CHECK(std::abs(rho(1, 1) - 0.64) <= 1e-12);
  }

  TEST_CASE("intermediate t: |rho_01| = |alpha beta*| |<Phi_0|Phi_1>|") {
    const Complex alpha(0.6, 0.0);
    const Complex beta(0.0, 0.8);
    const double g = 1.3;
    for (double t : {0.1, 0.5, 0.9}) {
      const auto psi = von_neumann_state_at(ComplexVector{alpha, beta}, 1, g, t);
      const double ov = std::abs(inner(environment_qubit(0, g, t), environment_qubit(1, g, t)));
      CHECK(std::abs(std::abs(rho01(psi)) - std::abs(alpha * std::conj(beta)) * ov) <= 1e-12);
    }
  }

  TEST_CASE("structured state matches dense evolution") {
    const double r = 1.0 / std::numbers::sqrt2;
    const ComplexVector c{r, Complex(0.0, r)};
    for (std::size_t n_env : {1u, 2u, 5u}) {
      const auto preset = von_neumann_measurement(c, n_env, 0.7);
      const auto ev = evolve(preset.psi0, preset.config);
      for (std::size_t k = 0; k < ev.times.size(); k += 10) {
        const auto fast = von_neumann_state_at(c, n_env, 0.7, ev.times[k]);
        CHECK(max_abs_diff(fast.amplitudes(), ev.states[k].amplitudes()) <= 1e-10);
      }
    }
  }

  TEST_CASE("H commutes with pointer projectors; pointer populations are constant") {
    const auto h = von_neumann_hamiltonian(3, 0.9);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto proj = tensor_product(ComplexMatrix::outer(ops::basis_vector(2, i), ops::basis_vector(2, i)),
                                       ops::identity(8));
      CHECK(max_abs_diff(h * proj, proj * h) == 0.0);
    }
    const auto preset = von_neumann_measurement(ComplexVector{0.6, 0.8}, 3, 0.9);
    for (const auto& s : evolve(preset.psi0, preset.config).states) {
      const auto rho = partial_trace(s, Subsystem::A).matrix();
      CHECK(std::abs(rho(0, 0) - 0.36) <= 1e-10);
      CHECK(std::abs(rho(1, 1) - 0.64) <= 1e-10);
    }
  }

  TEST_CASE("invalid input") {
    CHECK_THROWS_AS(von_neumann_measurement(ComplexVector{1.0, 1.0}, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(von_neumann_measurement(ComplexVector{1.0}, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(von_neumann_measurement(ComplexVector{1.0, 0.0}, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(von_neumann_measurement(ComplexVector{1.0, 0.0}, 20, 1.0), DimensionError);
  }
}

TEST_SUITE("overlap_product_decay") {
  TEST_CASE("all zero") {
    const double e[] = {0.0, 0.0, 0.0};
    const auto d = overlap_product_decay(e);
    CHECK(d.product == 1.0);
    CHECK(d.gap == 0.0);
  }

  TEST_CASE("N = 100, eps = 0.01") {
    const std::vector<double> e(100, 0.01);
    const auto d = overlap_product_decay(e);
    CHECK(std::abs(d.product - 0.366032341273229) <= 1e-13);
    CHECK(std::abs(d.approximation - 0.367879441171442) <= 1e-13);
  }

  TEST_CASE("single eps = 0.5") {
    const double e[] = {0.5};
    const auto d = overlap_product_decay(e);
    CHECK(d.product == 0.5);
    CHECK(std::abs(d.approximation - 0.606530659712633) <= 1e-14);
  }

  TEST_CASE("gap is bounded by sum eps^2 for eps <= 0.5") {
    Rng rng(1);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> e(rng.index(1, 50));
      double sq = 0.0;
      for (auto& x : e) {
        x = rng.uniform(0.0, trial % 2 == 0 ? 0.5 : 0.05);
        sq += x * x;
      }
      CHECK(overlap_product_decay(e).gap <= sq);
    }
  }

  TEST_CASE("out of range") {
    const double e[] = {0.2, 1.0};
    CHECK_THROWS_AS(overlap_product_decay(e), InvalidArgument);
    const double f[] = {-0.1};
    CHECK_THROWS_AS(overlap_product_decay(f), InvalidArgument);
  }
}

TEST_SUITE("bell_preset") {
  TEST_CASE("degenerate singlet") {
    const auto preset = bell_preset();
    const auto dec = schmidt_decompose(preset.psi0);
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(dec.coeffs[0] - r) <= 1e-12);
    CHECK(std::abs(dec.coeffs[1] - r) <= 1e-12);
    CHECK(dec.degeneracy_flags[0]);
    CHECK(std::abs(entanglement_entropy(dec) - std::numbers::ln2) <= 1e-12);
    CHECK(std::abs(preset.psi0.amplitude(0, 1) - r) == 0.0);
    CHECK(std::abs(preset.psi0.amplitude(1, 0) + r) == 0.0);
  }

  TEST_CASE("the default perturbation lifts the degeneracy and tracking still runs") {
    const auto preset = bell_preset();
    const auto tr = track_schmidt(preset.psi0, preset.config);
    for (std::size_t k = 1; k < tr.times.size(); ++k) CHECK(tr.gaps[k] > 0.0);
    double widest = 0.0;
    for (double g : tr.gaps) widest = std::max(widest, g);
    CHECK(widest > 1e-2);
  }
}

TEST_SUITE("maverick_norm") {
  TEST_CASE("n = 1, p = 0.5, delta = 0.4: both outcomes deviate") {
    CHECK(maverick_norm(0.5, 1, 0.4) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("p = 0.5, n = 20, delta = 0.25") {
    CHECK(std::abs(maverick_norm(0.5, 20, 0.25) - 1.181793212890625e-02) <= 1e-14);
    CHECK(std::abs(maverick_norm_enumerated(0.5, 20, 0.25) - maverick_norm_binomial(0.5, 20, 0.25)) <= 1e-12);
  }

  TEST_CASE("decreasing in n") {
    const double expect[] = {0.109375, 1.181793212890625e-02, 6.795e-4, 2.732e-6};
    const std::size_t ns[] = {10, 20, 40, 80};
    double prev = 1.0;
    for (int i = 0; i < 4; ++i) {
      const double v = maverick_norm(0.5, ns[i], 0.25);
      CHECK(v == doctest::Approx(expect[i]).epsilon(1e-3));
      CHECK(v < prev);
      prev = v;
    }
  }

  TEST_CASE("enumeration agrees with summation for n <= 12") {
    for (double p : {0.1, 0.3, 0.5, 0.8})
      for (std::size_t n = 1; n <= 12; ++n)
        CHECK(std::abs(maverick_norm_enumerated(p, n, 0.05) - maverick_norm_binomial(p, n, 0.05)) <= 1e-12);
  }

  TEST_CASE("parameter ranges") {
    CHECK_THROWS_AS(maverick_norm(0.0, 5, 0.1), InvalidArgument);
    CHECK_THROWS_AS(maverick_norm(0.5, 0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(maverick_norm(0.5, 5, 0.5), InvalidArgument);
    CHECK_THROWS_AS(maverick_norm_enumerated(0.5, 21, 0.1), InvalidArgument);
  }
}
