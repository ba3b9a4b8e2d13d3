#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decoh/deseparation.hpp"
#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"
#include "decoh/operators.hpp"
#include "support/random.hpp"

using namespace decoh;
using decoh::testing::Rng;

namespace {

const ComplexVector k0{1.0, 0.0};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return tensor_product(a, b); }

EvolutionConfig config(ComplexMatrix h, double dt) {
  EvolutionConfig cfg;
  cfg.hamiltonian = std::move(h);
  cfg.t_max = 1.0;
  cfg.dt = dt;
  return cfg;
}

/// ||(1 - P_phi) (x) (1 - P_Phi) H |phi Phi>||^2 from explicit projectors.
double a_by_projectors(const ComplexMatrix& h, const ComplexVector& phi, const ComplexVector& Phi) {
  const auto qa = ops::identity(phi.size()) - ComplexMatrix::outer(phi, phi);
  const auto qb = ops::identity(Phi.size()) - ComplexMatrix::outer(Phi, Phi);
  const auto v = kron(qa, qb) * (h * BipartiteState::product(phi, Phi).amplitudes());
  return norm(v) * norm(v);
}

/// Keeps column 0 and mixes the others with a random unitary.
ComplexMatrix random_completion(Rng& rng, const ComplexVector& v0) {
  const auto base = complete_basis(ComplexMatrix::column_vector(v0));
  const std::size_t n = v0.size();
  ComplexMatrix mix = ComplexMatrix::identity(n);
  if (n > 1) {
    const auto u = rng.unitary(n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j) mix(i, j) = u(i - 1, j - 1);
  }
  return base * mix;
}

/// g^2 (||a phi||^2 - |<phi|a phi>|^2) for the exchange coupling with the environment in vacuum.
double exchange_a_oracle(const ComplexVector& phi, double g, std::size_t levels) {
  const auto aphi = ops::annihilation(levels) * phi;
  return g * g * (norm(aphi) * norm(aphi) - std::norm(inner(phi, aphi)));
}

}  // namespace

TEST_SUITE("deseparation parameters") {
  TEST_CASE("g sigma_x sigma_x from |00>: A = B = g^2") {
    const double g = 0.5;
    const auto h = g * kron(ops::sigma_x(), ops::sigma_x());
    const auto t = deseparation_terms(h, k0, k0);
    CHECK(std::abs(t.a() - g * g) <= 1e-15);
    CHECK(std::abs(t.b() - g * g) <= 1e-15);
    CHECK(deseparation_a(h, k0, k0, ops::identity(2), ops::identity(2)) == doctest::Approx(g * g));
  }

  TEST_CASE("g sigma_z sigma_x from |00>: A = 0, B = g^2") {
    const double g = 0.5;
    const auto h = g * kron(ops::sigma_z(), ops::sigma_x());
    CHECK(deseparation_a(h, k0, k0, ops::identity(2), ops::identity(2)) == 0.0);
    CHECK(std::abs(deseparation_b(h, k0, k0, ops::identity(2), ops::identity(2)) - g * g) <= 1e-15);
  }

  TEST_CASE("uncoupled H never entangles") {
    Rng rng(1);
    const auto h = kron(rng.hermitian(3), ops::identity(2)) + kron(ops::identity(3), rng.hermitian(2));
    for (int trial = 0; trial < 10; ++trial)
      CHECK(deseparation_terms(h, rng.unit_vector(3), rng.unit_vector(2)).a() <= 1e-12);
  }

  TEST_CASE("H diagonal in the product basis: B = 0 from a product eigenstate") {
    Rng rng(2);
    RealVector d(6);
    for (auto& x : d) x = rng.uniform(-1.0, 1.0);
    const auto h = ComplexMatrix::diagonal(std::span<const double>(d));
    CHECK(deseparation_terms(h, ops::basis_vector(2, 1), ops::basis_vector(3, 2)).b() == 0.0);
  }

  TEST_CASE("completion independence and term-wise B - A") {
    Rng rng(3);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t da = rng.index(2, 4);
      const std::size_t db = rng.index(2, 4);
      const auto h = rng.hermitian(da * db);
      const auto phi = rng.unit_vector(da);
      const auto Phi = rng.unit_vector(db);
      const double oracle = a_by_projectors(h, phi, Phi);
      const auto ba = random_completion(rng, phi);
      const auto bb = random_completion(rng, Phi);
      const auto t = deseparation_terms(h, phi, Phi, ba, bb);
      CHECK(std::abs(t.a() - oracle) <= 1e-9);
      CHECK(std::abs(deseparation_terms(h, phi, Phi).a() - oracle) <= 1e-9);

      // B - A split into the two single-factor classes, each from its own projector.
      const auto pa = ComplexMatrix::outer(phi, phi);
      const auto pb = ComplexMatrix::outer(Phi, Phi);
      const auto hv = h * BipartiteState::product(phi, Phi).amplitudes();
      const auto only_a = kron(ops::identity(da) - pa, pb) * hv;
      const auto only_b = kron(pa, ops::identity(db) - pb) * hv;
      CHECK(std::abs(t.only_a - norm(only_a) * norm(only_a)) <= 1e-9);
      CHECK(std::abs(t.only_b - norm(only_b) * norm(only_b)) <= 1e-9);
      CHECK(t.only_a >= 0.0);
      CHECK(t.only_b >= 0.0);
      CHECK(t.b() >= t.a());
    }
  }

  TEST_CASE("bad bases are rejected") {
    const auto h = kron(ops::sigma_x(), ops::sigma_x());
    CHECK_THROWS_AS(deseparation_a(h, k0, k0, ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}, ops::identity(2)),
                    InvalidArgument);
    CHECK_THROWS_AS(deseparation_a(h, k0, k0, ops::sigma_x(), ops::identity(2)), InvalidArgument);
  }
}

TEST_SUITE("fit_small_time") {
  const BipartiteState ket00(2, 2, {1.0, 0.0, 0.0, 0.0});

  TEST_CASE("g sigma_x sigma_x, g = 0.5, window [0, 0.1]") {
    const auto rep = fit_small_time(ket00, config(0.5 * kron(ops::sigma_x(), ops::sigma_x()), 1e-3), {0.0, 0.1});
    CHECK(rep.a_param == doctest::Approx(0.25));
    CHECK(rep.relative_error <= 0.01);
    CHECK(std::abs(rep.linear_coefficient) <= 1e-6);
    CHECK(rep.samples == 101);
  }

  TEST_CASE("H = 0") {
    const auto rep = fit_small_time(ket00, config(ComplexMatrix::zeros(4, 4), 1e-2), {0.0, 0.5});
    CHECK(rep.fitted_a == 0.0);
    CHECK(rep.a_param == 0.0);
  }

  TEST_CASE("g sigma_z sigma_x: fitted A vanishes while B > 0") {
    const double g = 0.5;
    const auto rep = fit_small_time(ket00, config(g * kron(ops::sigma_z(), ops::sigma_x()), 1e-3), {0.0, 0.1});
    CHECK(rep.fitted_a <= 1e-10);
    CHECK(rep.b_param == doctest::Approx(g * g));
  }

  TEST_CASE("halving the window moves the fit toward A") {
    Rng rng(4);
    for (int trial = 0; trial < 5; ++trial) {
      const auto psi = BipartiteState::product(rng.unit_vector(2), rng.unit_vector(3));
      const auto cfg = config(rng.hermitian(6), 1e-3);
      const auto wide = fit_small_time(psi, cfg, {0.0, 0.2});
      const auto narrow = fit_small_time(psi, cfg, {0.0, 0.1});
      CHECK(narrow.relative_error <= wide.relative_error * (1.0 + 1e-3));
      const auto tiny = fit_small_time(psi, cfg, {0.0, 0.01});
      CHECK(tiny.relative_error <= narrow.relative_error * (1.0 + 1e-3));
      CHECK(tiny.relative_error <= 0.05);
    }
  }

  TEST_CASE("errors") {
    Rng rng(5);
    const auto cfg = config(kron(ops::sigma_x(), ops::sigma_x()), 1e-2);
    CHECK_THROWS_AS(fit_small_time(rng.state(2, 2), cfg, {0.0, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(fit_small_time(ket00, cfg, {0.0, 0.05}), InvalidArgument);
  }
}

TEST_SUITE("robustness_scan") {
  TEST_CASE("identical states give equal A") {
    const OscillatorExchangeModel model;
    const auto r = robustness_scan(model, {fock_state(0, 10), fock_state(0, 10)});
    CHECK(r[0].a_param == r[1].a_param);
  }

  TEST_CASE("coherent beats Fock at equal mean occupation") {
    OscillatorExchangeModel model;
    model.levels = 20;
    const auto coh = coherent_state(std::sqrt(2.0), 20);
    const auto fock = fock_state(2, 20);
    CHECK(coh.leakage <= 1e-6);
    const auto r = robustness_scan(model, {fock, coh});
    REQUIRE(r.size() == 2);
    CHECK(r[0].label == coh.label);
    CHECK(std::abs(r[0].a_param - exchange_a_oracle(coh.amplitudes, 0.1, 20)) <= 1e-12);
    CHECK(std::abs(r[1].a_param - exchange_a_oracle(fock.amplitudes, 0.1, 20)) <= 1e-12);
    CHECK(r[1].a_param == doctest::Approx(0.02));
    CHECK(r[0].mean_occupation == doctest::Approx(2.0).epsilon(1e-5));
  }

  TEST_CASE("g = 0 gives A = 0 for every candidate") {
    OscillatorExchangeModel model;
    model.coupling = 0.0;
    model.leakage_tolerance = 1e-3;
    for (const auto& e : robustness_scan(model, {fock_state(3, 10), coherent_state({1.0, 0.5}, 10)}))
      CHECK(e.a_param == 0.0);
  }

  TEST_CASE("truncation leakage beyond tolerance is refused") {
    const OscillatorExchangeModel model;
    const auto coh = coherent_state(std::sqrt(2.0), 10);
    CHECK(coh.leakage == doctest::Approx(4.6498e-5).epsilon(1e-3));
    CHECK_THROWS_AS(robustness_scan(model, {coh}), InvalidArgument);
    CHECK_THROWS_AS(robustness_scan(model, {fock_state(1, 5)}), InvalidArgument);
  }
}
