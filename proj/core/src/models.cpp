#include "decoh/models.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"
#include "decoh/operators.hpp"

namespace decoh::models {

namespace {

void check_system_amplitudes(std::span<const Complex> c) {
  if (c.size() != 2) throw InvalidArgument("von_neumann_measurement: c must have two amplitudes");
  if (std::abs(norm(c) - 1.0) > 1e-10) throw InvalidArgument("von_neumann_measurement: ||c|| != 1");
}

bool deviates(std::size_t k, std::size_t n, double p, double delta) {
  return std::abs(static_cast<double>(k) / static_cast<double>(n) - p) > delta;
}

void check_maverick_args(double p, std::size_t n, double delta) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("maverick_norm: p must lie in (0, 1)");
  if (n < 1) throw InvalidArgument("maverick_norm: n must be >= 1");
  if (!(delta > 0.0 && delta < std::max(p, 1.0 - p)))
    throw InvalidArgument("maverick_norm: delta must lie in (0, max(p, 1 - p))");
}

}  // namespace

ComplexMatrix von_neumann_hamiltonian(std::size_t n_env, double coupling, const ToleranceConfig& tol) {
  if (n_env < 1) throw InvalidArgument("von_neumann_measurement: n_env must be >= 1");
  if ((std::size_t{2} << n_env) > tol.max_dimension)
    throw DimensionError("von_neumann_measurement: 2^" + std::to_string(n_env + 1) +
                         " exceeds the dense dimension cap");
  ComplexMatrix env_sum(std::size_t{1} << n_env, std::size_t{1} << n_env);
  for (std::size_t k = 0; k < n_env; ++k) {
    ComplexMatrix term = ComplexMatrix::identity(1);
    for (std::size_t q = 0; q < n_env; ++q)
      term = tensor_product(term, q == k ? ops::sigma_x() : ops::identity(2), tol);
    env_sum += term;
  }
  const ComplexMatrix pointer_one{{0.0, 0.0}, {0.0, 1.0}};
  return Complex(coupling) * tensor_product(pointer_one, env_sum, tol);
}

ScenarioPreset von_neumann_measurement(std::span<const Complex> c, std::size_t n_env, double coupling,
                                       const ToleranceConfig& tol) {
  check_system_amplitudes(c);
  if (!(coupling > 0.0)) throw InvalidArgument("von_neumann_measurement: coupling must be positive");
  ComplexVector env(std::size_t{1} << n_env);
  env[0] = 1.0;
  EvolutionConfig cfg;
  cfg.hamiltonian = von_neumann_hamiltonian(n_env, coupling, tol);
  cfg.t_max = std::numbers::pi / (2.0 * coupling);
  cfg.dt = cfg.t_max / 100.0;
  cfg.tolerances = tol;
  return {"von_neumann_measurement", BipartiteState::product(c, env, tol), std::move(cfg)};
}

BipartiteState von_neumann_state_at(std::span<const Complex> c, std::size_t n_env, double coupling,
                                    double t) {
  check_system_amplitudes(c);
  if (n_env < 1 || n_env > 26) throw InvalidArgument("von_neumann_state_at: n_env out of range");
  const std::size_t env_dim = std::size_t{1} << n_env;
  ComplexVector amps(2 * env_dim);
  amps[0] = c[0];
  amps[env_dim] = c[1];

  // The terms of H commute, so exp(-iHt) is the product of the controlled
  // single-qubit propagators; only the system-|1> half is touched.
  const ComplexMatrix u = propagator(Complex(coupling) * ops::sigma_x(), t);
  Complex* block = amps.data() + env_dim;
  for (std::size_t k = 0; k < n_env; ++k) {
    const std::size_t bit = std::size_t{1} << (n_env - 1 - k);
    for (std::size_t e = 0; e < env_dim; ++e) {
      if (e & bit) continue;
      const Complex a0 = block[e];
      const Complex a1 = block[e | bit];
      block[e] = u(0, 0) * a0 + u(0, 1) * a1;
      block[e | bit] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
  return BipartiteState::normalized(2, env_dim, std::move(amps));
}

ComplexVector environment_qubit(int branch, double coupling, double t) {
  if (branch == 0) return {1.0, 0.0};
  return {std::cos(coupling * t), Complex(0.0, -std::sin(coupling * t))};
}

OverlapDecay overlap_product_decay(std::span<const double> epsilons) {
  OverlapDecay d;
  double sum = 0.0;
  for (double e : epsilons) {
    if (!(e >= 0.0 && e < 1.0))
      throw InvalidArgument("overlap_product_decay: epsilon " + std::to_string(e) + " outside [0, 1)");
    d.product *= 1.0 - e;
    sum += e;
  }
  d.approximation = std::exp(-sum);
  d.gap = std::abs(d.product - d.approximation);
  return d;
}

ComplexMatrix bell_default_perturbation() {
  using namespace ops;
  return 0.5 * tensor_product(sigma_z(), identity(2)) + 0.3 * tensor_product(identity(2), sigma_x()) +
         0.4 * tensor_product(sigma_x(), sigma_z()) + 0.2 * tensor_product(sigma_z(), sigma_y());
}

ScenarioPreset bell_preset(const ComplexMatrix& perturbation) {
  const double r = 1.0 / std::numbers::sqrt2;
  BipartiteState singlet(2, 2, {0.0, r, -r, 0.0});
  EvolutionConfig cfg;
  cfg.hamiltonian = perturbation.size() == 0 ? bell_default_perturbation() : perturbation;
  cfg.t_max = 5.0;
  cfg.dt = 1e-2;
  cfg.validate(singlet.dims());
  return {"bell", std::move(singlet), std::move(cfg)};
}

double maverick_norm_binomial(double p, std::size_t n, double delta) {
  check_maverick_args(p, n, delta);
  const double nn = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (!deviates(k, n, p, delta)) continue;
    const double kk = static_cast<double>(k);
    const double log_term = std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0) +
                            kk * std::log(p) + (nn - kk) * std::log1p(-p);
    total += std::exp(log_term);
  }
  return total;
}

double maverick_norm_enumerated(double p, std::size_t n, double delta) {
  check_maverick_args(p, n, delta);
  if (n > 20) throw InvalidArgument("maverick_norm_enumerated: n must be <= 20");
  // Measured qubit sqrt(1-p)|0> + sqrt(p) e^{i pi/3} |1>; each interaction
  // c_i phi_i Phi_0 -> c_i phi_i Phi_i splits every branch in two.
  const Complex c0 = std::sqrt(1.0 - p);
  const Complex c1 = std::polar(std::sqrt(p), std::numbers::pi / 3.0);
  struct Branch {
    Complex amplitude;
    std::size_t ones;
  };
  std::vector<Branch> branches{{1.0, 0}};
  branches.reserve(std::size_t{1} << n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t count = branches.size();
    for (std::size_t b = 0; b < count; ++b) {
      branches.push_back({branches[b].amplitude * c1, branches[b].ones + 1});
      branches[b].amplitude *= c0;
    }
  }
  double total = 0.0;
  for (const auto& b : branches)
    if (deviates(b.ones, n, p, delta)) total += std::norm(b.amplitude);
  return total;
}

double maverick_norm(double p, std::size_t n, double delta) {
  const double binomial = maverick_norm_binomial(p, n, delta);
  if (n <= 20) {
    const double enumerated = maverick_norm_enumerated(p, n, delta);
    if (std::abs(enumerated - binomial) > 1e-12)
      throw InvariantViolation("maverick_norm_agreement",
                               "enumerated " + std::to_string(enumerated) + " vs binomial " +
                                   std::to_string(binomial));
  }
  return binomial;
}

}  // namespace decoh::models
