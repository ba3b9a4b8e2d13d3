#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"
#include "decoh/models.hpp"
#include "decoh/operators.hpp"
#include "decoh/zwanzig.hpp"
#include "support/random.hpp"

using namespace decoh;
using decoh::testing::Rng;

namespace {

const ZwanzigProjector kSep = ZwanzigProjector::separating();

DensityOperator bell_projector() {
  const double r = 1.0 / std::numbers::sqrt2;
  return DensityOperator::pure(ComplexVector{r, 0.0, 0.0, r});
}

/// Entropy from the eigenvalues of an explicitly diagonal matrix.
double diagonal_entropy(std::initializer_list<double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

EvolutionConfig config(ComplexMatrix h, double t_max, double dt) {
  EvolutionConfig cfg;
  cfg.hamiltonian = std::move(h);
  cfg.t_max = t_max;
  cfg.dt = dt;
  return cfg;
}

}  // namespace

TEST_SUITE("apply_projector") {
  TEST_CASE("product operators are fixed points of the separating projector") {
    Rng rng(1);
    const auto ra = rng.density(2, 2);
    const auto rb = rng.density(3, 3);
    const DensityOperator rho(tensor_product(ra.matrix(), rb.matrix()).hermitian_part());
    CHECK(max_abs_diff(apply_projector(kSep, rho, {2, 3}).matrix(), rho.matrix()) <= 1e-14);
  }

  TEST_CASE("Bell projector separates to I/4") {
    CHECK(max_abs_diff(apply_projector(kSep, bell_projector(), {2, 2}).matrix(), 0.25 * ops::identity(4)) <= 1e-15);
  }

  TEST_CASE("subsystem trace returns the kept factor") {
    const auto out = apply_projector(ZwanzigProjector::subsystem_trace(Subsystem::B), bell_projector(), {2, 2});
    CHECK(out.dim() == 2);
    CHECK(max_abs_diff(out.matrix(), 0.5 * ops::identity(2)) <= 1e-15);
    CHECK(ZwanzigProjector::subsystem_trace(Subsystem::B).output_dims({2, 3}).a == 1);
  }

  TEST_CASE("idempotence and trace preservation on 100 random states") {
    Rng rng(2);
    const ZwanzigProjector kinds[] = {kSep, ZwanzigProjector::subsystem_trace(Subsystem::A),
                                      ZwanzigProjector::subsystem_trace(Subsystem::B)};
    for (int trial = 0; trial < 100; ++trial) {
      const BipartiteDims dims{rng.index(1, 4), rng.index(1, 4)};
      const auto rho = rng.density(dims.total(), rng.index(1, dims.total()));
      for (const auto& p : kinds) {
        const auto once = apply_projector(p, rho, dims);
        const auto twice = apply_projector(p, once, p.output_dims(dims));
        CHECK(max_abs_diff(once.matrix(), twice.matrix()) <= 1e-10);
        CHECK(std::abs(once.matrix().trace() - 1.0) <= 1e-10);
      }
    }
  }

  TEST_CASE("dimension mismatch") {
    CHECK_THROWS_AS(apply_projector(kSep, bell_projector(), {2, 3}), DimensionError);
  }
}

TEST_SUITE("entropy") {
  TEST_CASE("pure state") {
    Rng rng(3);
    CHECK(std::abs(entropy(DensityOperator::pure(rng.unit_vector(5)))) <= 1e-12);
  }

  TEST_CASE("I/4") { CHECK(std::abs(entropy(DensityOperator::maximally_mixed(4)) - std::log(4.0)) <= 1e-14); }

  TEST_CASE("diag(0.9, 0.1)") {
    const double d[] = {0.9, 0.1};
    const DensityOperator rho(ComplexMatrix::diagonal(std::span<const double>(d)));
    CHECK(std::abs(entropy(rho) - 0.325082973391448) <= 1e-14);
  }

  TEST_CASE("small negative eigenvalues are clipped, large ones refused") {
    const double ok[] = {1.0 + 5e-11, -5e-11};
    CHECK(entropy(DensityOperator(ComplexMatrix::diagonal(std::span<const double>(ok)))) == doctest::Approx(0.0));
    const double bad[] = {1.0 + 1e-6, -1e-6};
    CHECK_THROWS_AS(entropy(DensityOperator(ComplexMatrix::diagonal(std::span<const double>(bad)))),
                    InvariantViolation);
  }

  TEST_CASE("S(P_sep rho) = S(rho_A) + S(rho_B) >= S(rho)") {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
      const BipartiteDims dims{rng.index(2, 3), rng.index(2, 3)};
      const auto rho = rng.density(dims.total(), rng.index(1, dims.total()));
      const double s_sep = entropy(apply_projector(kSep, rho, dims));
      const auto r = subadditivity_check(rho, dims);
      CHECK(std::abs(s_sep - (r.s_a + r.s_b)) <= 1e-9);
      CHECK(std::abs(relevant_entropy(kSep, rho, dims) - s_sep) <= 1e-9);
      CHECK(s_sep >= r.s_global - 1e-9);
    }
  }
}

TEST_SUITE("subadditivity_check") {
  TEST_CASE("product pure state") {
    Rng rng(5);
    const auto r = subadditivity_check(
        DensityOperator::pure(BipartiteState::product(rng.unit_vector(2), rng.unit_vector(2)).amplitudes()), {2, 2});
    CHECK(std::abs(r.s_global) <= 1e-12);
    CHECK(std::abs(r.s_a) <= 1e-12);
    CHECK(std::abs(r.s_b) <= 1e-12);
  }

  TEST_CASE("Bell state") {
    const auto r = subadditivity_check(bell_projector(), {2, 2});
    CHECK(std::abs(r.s_global) <= 1e-12);
    CHECK(std::abs(r.s_a - std::numbers::ln2) <= 1e-12);
    CHECK(std::abs(r.s_b - std::numbers::ln2) <= 1e-12);
  }

  TEST_CASE("classically correlated mixture") {
    // 0.7 |00><00| + 0.3 |11><11|: S = S_A = S_B = H(0.7).
    const double d[] = {0.7, 0.0, 0.0, 0.3};
    const auto r = subadditivity_check(DensityOperator(ComplexMatrix::diagonal(std::span<const double>(d))), {2, 2});
    CHECK(std::abs(r.s_global - diagonal_entropy({0.7, 0.3})) <= 1e-12);
    CHECK(std::abs(r.s_a - r.s_global) <= 1e-12);
  }
}

TEST_SUITE("channel_run") {
  TEST_CASE("H = 0 keeps both curves constant") {
    Rng rng(6);
    const auto psi = rng.state(2, 2);
    const auto run = channel_run(psi, config(ComplexMatrix::zeros(4, 4), 1.0, 0.1), kSep, 0.1);
    const double s0 = relevant_entropy(kSep, psi);
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      CHECK(std::abs(run.s_exact[k] - s0) <= 1e-10);
    }
    // The first projection discards the initial correlations, then nothing moves.
    for (std::size_t k = 1; k < run.times.size(); ++k) CHECK(std::abs(run.s_projected[k] - run.s_projected[1]) <= 1e-10);
  }

  TEST_CASE("pure decoherence: projected entropy never decreases") {
    const double r = 1.0 / std::numbers::sqrt2;
    for (std::size_t n_env : {1u, 2u, 3u}) {
      const auto preset = models::von_neumann_measurement(ComplexVector{r, Complex(0.0, r)}, n_env, 1.0);
      const auto run = channel_run(preset.psi0, preset.config, kSep, preset.config.dt);
      for (std::size_t k = 1; k < run.times.size(); ++k) CHECK(run.s_projected[k] >= run.s_projected[k - 1] - 1e-9);
      for (double s : run.s_exact) CHECK(s >= -1e-10);
    }
  }

  TEST_CASE("single segment reproduces S(P rho_exact)") {
    Rng rng(7);
    const auto psi = rng.state(2, 3);
    const auto cfg = config(rng.hermitian(6), 1.0, 0.05);
    for (const auto& p : {kSep, ZwanzigProjector::subsystem_trace(Subsystem::A)}) {
      const auto run = channel_run(psi, cfg, p, 10.0);
      for (std::size_t k = 0; k < run.times.size(); ++k) CHECK(std::abs(run.s_projected[k] - run.s_exact[k]) <= 1e-9);
      for (double g : run.doorway_gap()) CHECK(std::abs(g) <= 1e-9);
    }
  }

  TEST_CASE("argument checks") {
    Rng rng(8);
    const auto psi = rng.state(2, 2);
    const auto cfg = config(rng.hermitian(4), 1.0, 0.1);
    CHECK_THROWS_AS(channel_run(psi, cfg, kSep, 0.05), InvalidArgument);
    CHECK_THROWS_AS(channel_run(psi, cfg, kSep, 0.15), InvalidArgument);
    CHECK_THROWS_AS(channel_run(psi, cfg, ZwanzigProjector::subsystem_trace(Subsystem::A), 0.2), InvalidArgument);
  }
}
