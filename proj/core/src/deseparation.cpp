#include "decoh/deseparation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"
#include "decoh/operators.hpp"
#include "decoh/schmidt.hpp"

namespace decoh {

namespace {

void check_basis(const ComplexMatrix& basis, std::span<const Complex> v0, const ToleranceConfig& tol,
                 const char* which) {
  if (basis.rows() != v0.size() || !basis.is_square())
    throw InvalidArgument(std::string("deseparation: basis ") + which + " does not match its state");
  if (orthonormality_error(basis) > tol.orthonormal)
    throw InvalidArgument(std::string("deseparation: basis ") + which + " is not orthonormal");
  if (std::abs(std::abs(inner(basis.column(0), v0)) - 1.0) > tol.orthonormal)
    throw InvalidArgument(std::string("deseparation: column 0 of basis ") + which +
                          " is not the initial factor");
}

ComplexMatrix complete_from(std::span<const Complex> v, const ToleranceConfig& tol) {
  return complete_basis(ComplexMatrix::column_vector(v), tol);
}

// Solves the dense system g x = r in place (partial pivoting).
template <std::size_t N>
std::array<double, N> solve(std::array<std::array<double, N>, N> g, std::array<double, N> r) {
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < N; ++i)
      if (std::abs(g[i][c]) > std::abs(g[piv][c])) piv = i;
    std::swap(g[c], g[piv]);
    std::swap(r[c], r[piv]);
    for (std::size_t i = c + 1; i < N; ++i) {
      const double f = g[i][c] / g[c][c];
      for (std::size_t j = c; j < N; ++j) g[i][j] -= f * g[c][j];
      r[i] -= f * r[c];
    }
  }
  std::array<double, N> x{};
  for (std::size_t c = N; c-- > 0;) {
    double s = r[c];
    for (std::size_t j = c + 1; j < N; ++j) s -= g[c][j] * x[j];
    x[c] = s / g[c][c];
  }
  return x;
}

}  // namespace

DeseparationTerms deseparation_terms(const ComplexMatrix& h, std::span<const Complex> phi0,
                                     std::span<const Complex> Phi0, const ComplexMatrix& basis_a,
                                     const ComplexMatrix& basis_b, const ToleranceConfig& tol) {
  check_basis(basis_a, phi0, tol, "A");
  check_basis(basis_b, Phi0, tol, "B");
  const std::size_t da = phi0.size();
  const std::size_t db = Phi0.size();
  if (!h.is_square() || h.rows() != da * db)
    throw DimensionError("deseparation: Hamiltonian does not act on the product space");

  // Use the basis' own column 0 so that the |00> of the sum is exactly basis-consistent.
  ComplexVector start(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) start[i * db + j] = basis_a(i, 0) * basis_b(j, 0);
  const ComplexVector hv = h * start;
  // c_jm = <jm|H|00> = (basis_a^dagger G conj(basis_b))_jm with G the reshaped H|00>.
  const ComplexMatrix c = basis_a.adjoint() * ComplexMatrix(da, db, hv) * basis_b.conj();

  DeseparationTerms t;
  for (std::size_t j = 0; j < da; ++j)
    for (std::size_t m = 0; m < db; ++m) {
      if (j == 0 && m == 0) continue;
      const double w = std::norm(c(j, m));
      if (j != 0 && m != 0) t.both += w;
      else if (j != 0) t.only_a += w;
      else t.only_b += w;
    }
  return t;
}

double deseparation_a(const ComplexMatrix& h, std::span<const Complex> phi0,
                      std::span<const Complex> Phi0, const ComplexMatrix& basis_a,
                      const ComplexMatrix& basis_b, const ToleranceConfig& tol) {
  return deseparation_terms(h, phi0, Phi0, basis_a, basis_b, tol).a();
}

double deseparation_b(const ComplexMatrix& h, std::span<const Complex> phi0,
                      std::span<const Complex> Phi0, const ComplexMatrix& basis_a,
                      const ComplexMatrix& basis_b, const ToleranceConfig& tol) {
  return deseparation_terms(h, phi0, Phi0, basis_a, basis_b, tol).b();
}

DeseparationTerms deseparation_terms(const ComplexMatrix& h, std::span<const Complex> phi0,
                                     std::span<const Complex> Phi0, const ToleranceConfig& tol) {
  return deseparation_terms(h, phi0, Phi0, complete_from(phi0, tol), complete_from(Phi0, tol), tol);
}

DeseparationReport fit_small_time(const BipartiteState& psi0, const EvolutionConfig& cfg,
                                  TimeWindow window) {
  const auto& tol = cfg.tolerances;
  const SchmidtDecomposition dec0 = schmidt_decompose(psi0, tol);
  if (dec0.coeffs.empty() || dec0.coeffs[0] < 1.0 - 1e-10)
    throw InvalidArgument("fit_small_time: initial state is not separable (largest coefficient " +
                          std::to_string(dec0.coeffs.empty() ? 0.0 : dec0.coeffs[0]) + ")");
  if (!(window.t_max > window.t_min) || window.t_min < 0.0)
    throw InvalidArgument("fit_small_time: empty or negative time window");

  const ComplexVector phi0 = dec0.basis_a.column(0);
  const ComplexVector Phi0 = dec0.basis_b.column(0);
  const DeseparationTerms terms = deseparation_terms(cfg.hamiltonian, phi0, Phi0, tol);

  EvolutionConfig run = cfg;
  run.t_max = window.t_max;
  const SchmidtTrajectory tr = track_schmidt(psi0, run);

  std::vector<double> ts;
  std::vector<double> ys;  // 1 - p0, summed from the other weights for accuracy
  const double slack = 1e-9 * run.dt;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    if (t < window.t_min - slack || t > window.t_max + slack) continue;
    double y = 0.0;
    for (std::size_t i = 1; i < tr.coeff_tracks[k].size(); ++i)
      y += tr.coeff_tracks[k][i] * tr.coeff_tracks[k][i];
    ts.push_back(t);
    ys.push_back(y);
  }
  if (ts.size() < 10)
    throw InvalidArgument("fit_small_time: window holds " + std::to_string(ts.size()) +
                          " samples, need at least 10");

  DeseparationReport rep;
  rep.a_param = terms.a();
  rep.b_param = terms.b();
  rep.fit_window = window;
  rep.samples = ts.size();

  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t2 = ts[k] * ts[k];
    num += t2 * ys[k];
    den += t2 * t2;
  }
  rep.fitted_a = den > 0.0 ? num / den : 0.0;
  rep.relative_error = std::abs(rep.fitted_a - rep.a_param) / std::max(rep.a_param, 1e-12);

  // Diagnostic: y = c1 t + c2 t^2 + c3 t^3 + c4 t^4, solved in tau = t / T.
  const double scale = window.t_max;
  std::array<std::array<double, 4>, 4> g{};
  std::array<double, 4> r{};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double tau = ts[k] / scale;
    const std::array<double, 4> basis{tau, tau * tau, tau * tau * tau, tau * tau * tau * tau};
    for (std::size_t i = 0; i < 4; ++i) {
      r[i] += basis[i] * ys[k];
      for (std::size_t j = 0; j < 4; ++j) g[i][j] += basis[i] * basis[j];
    }
  }
  rep.linear_coefficient = solve(g, r)[0] / scale;
  return rep;
}

ComplexMatrix OscillatorExchangeModel::hamiltonian() const {
  const ComplexMatrix a = ops::annihilation(levels);
  const ComplexMatrix ad = a.adjoint();
  return coupling * (tensor_product(ad, a) + tensor_product(a, ad));
}

ComplexVector OscillatorExchangeModel::environment_state() const {
  if (environment.empty()) return ops::basis_vector(levels, 0);
  if (environment.size() != levels)
    throw DimensionError("OscillatorExchangeModel: environment state has wrong dimension");
  return environment;
}

CandidateState coherent_state(Complex alpha, std::size_t levels) {
  if (levels == 0) throw InvalidArgument("coherent_state: zero levels");
  CandidateState s;
  s.amplitudes.resize(levels);
  // c_n = exp(-|alpha|^2 / 2) alpha^n / sqrt(n!), built recursively.
  Complex c = std::exp(-0.5 * std::norm(alpha));
  double kept = 0.0;
  for (std::size_t n = 0; n < levels; ++n) {
    if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
    s.amplitudes[n] = c;
    kept += std::norm(c);
  }
  s.leakage = std::max(0.0, 1.0 - kept);
  const double nrm = std::sqrt(kept);
  for (auto& z : s.amplitudes) z /= nrm;
  s.label = "coherent(|alpha|^2=" + std::to_string(std::norm(alpha)) + ")";
  return s;
}

CandidateState fock_state(std::size_t n, std::size_t levels) {
  if (n >= levels) throw InvalidArgument("fock_state: level outside the truncation");
  return {"fock(n=" + std::to_string(n) + ")", ops::basis_vector(levels, n), 0.0};
}

std::vector<RobustnessEntry> robustness_scan(const OscillatorExchangeModel& model,
                                             const std::vector<CandidateState>& states,
                                             const ToleranceConfig& tol) {
  const ComplexMatrix h = model.hamiltonian();
  const ComplexVector env = model.environment_state();
  const ComplexMatrix n_op = ops::number(model.levels);
  std::vector<RobustnessEntry> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    if (s.amplitudes.size() != model.levels)
      throw InvalidArgument("robustness_scan: " + s.label + " does not match the truncation");
    if (s.leakage > model.leakage_tolerance)
      throw InvalidArgument("robustness_scan: truncation leakage " + std::to_string(s.leakage) +
                            " of " + s.label + " exceeds " +
                            std::to_string(model.leakage_tolerance));
    const DeseparationTerms t = deseparation_terms(h, s.amplitudes, env, tol);
    out.push_back({s.label, t.a(), t.b(), expectation_value(s.amplitudes, n_op, tol), s.leakage});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RobustnessEntry& x, const RobustnessEntry& y) { return x.a_param < y.a_param; });
  return out;
}

}  // namespace decoh
