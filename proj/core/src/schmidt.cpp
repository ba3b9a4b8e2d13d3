#include "decoh/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"

namespace decoh {

namespace {

// Minimum-cost perfect assignment on a square cost matrix (Hungarian method
// with potentials). Returns assignment[row] = column.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

std::vector<bool> adjacent_degeneracy(const RealVector& coeffs, double threshold) {
  std::vector<bool> flags(coeffs.empty() ? 0 : coeffs.size() - 1);
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i)
    flags[i] = std::abs(coeffs[i] * coeffs[i] - coeffs[i + 1] * coeffs[i + 1]) < threshold;
  return flags;
}

// Multiplies column c of `m` by `phase`.
void scale_column(ComplexMatrix& m, std::size_t c, Complex phase) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= phase;
}

Complex column_overlap(const ComplexMatrix& a, std::size_t ca, const ComplexMatrix& b,
                       std::size_t cb) {
  Complex s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) s += std::conj(a(r, ca)) * b(r, cb);
  return s;
}

// Unit-modulus phase of the first entry of column c above `pivot` in modulus.
Complex pivot_phase(const ComplexMatrix& m, std::size_t c, double pivot) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double mod = std::abs(m(r, c));
    if (mod > pivot) return m(r, c) / mod;
  }
  return 1.0;
}

}  // namespace

RealVector SchmidtDecomposition::weights() const {
  RealVector p(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) p[i] = coeffs[i] * coeffs[i];
  return p;
}

double SchmidtDecomposition::min_adjacent_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i)
    gap = std::min(gap, std::abs(coeffs[i] * coeffs[i] - coeffs[i + 1] * coeffs[i + 1]));
  return gap;
}

bool SchmidtDecomposition::any_degenerate() const {
  return std::any_of(degeneracy_flags.begin(), degeneracy_flags.end(), [](bool f) { return f; });
}

ComplexVector SchmidtDecomposition::reconstruct() const {
  const std::size_t da = basis_a.rows();
  const std::size_t db = basis_b.rows();
  ComplexVector amps(da * db);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    for (std::size_t i = 0; i < da; ++i) {
      const Complex ai = coeffs[k] * basis_a(i, k);
      for (std::size_t j = 0; j < db; ++j) amps[i * db + j] += ai * basis_b(j, k);
    }
  }
  return amps;
}

SchmidtDecomposition schmidt_decompose(const BipartiteState& psi, const ToleranceConfig& tol) {
  SvdResult r = svd(psi.amplitude_matrix(), tol);
  SchmidtDecomposition dec;
  dec.coeffs = std::move(r.s);
  dec.basis_a = std::move(r.u);
  // C = U S V^dagger, so the B-side partner of u_k is conj(v_k).
  dec.basis_b = r.v.conj();

  const std::size_t k = dec.coeffs.size();
  for (std::size_t c = 0; c < dec.basis_a.cols(); ++c) {
    const Complex ph = pivot_phase(dec.basis_a, c, tol.phase_pivot);
    scale_column(dec.basis_a, c, std::conj(ph));
    if (c < k) scale_column(dec.basis_b, c, ph);
  }
  for (std::size_t c = k; c < dec.basis_b.cols(); ++c)
    scale_column(dec.basis_b, c, std::conj(pivot_phase(dec.basis_b, c, tol.phase_pivot)));

  dec.degeneracy_flags = adjacent_degeneracy(dec.coeffs, tol.degeneracy);
  return dec;
}

DensityOperator reduced_density(const SchmidtDecomposition& dec, Subsystem which) {
  const ComplexMatrix& basis = which == Subsystem::A ? dec.basis_a : dec.basis_b;
  const std::size_t n = basis.rows();
  ComplexMatrix rho(n, n);
  for (std::size_t k = 0; k < dec.coeffs.size(); ++k) {
    const double p = dec.coeffs[k] * dec.coeffs[k];
    if (p == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex bi = p * basis(i, k);
      for (std::size_t j = 0; j < n; ++j) rho(i, j) += bi * std::conj(basis(j, k));
    }
  }
  return DensityOperator(rho.hermitian_part());
}

double entanglement_entropy(const SchmidtDecomposition& dec, const ToleranceConfig& tol) {
  double s = 0.0;
  for (double c : dec.coeffs) {
    const double p = c * c;
    if (p < tol.entropy_cutoff) continue;
    s -= p * std::log(p);
  }
  return s;
}

double alignment_score(const SchmidtDecomposition& dec, const SchmidtDecomposition& ref) {
  if (dec.dims() != ref.dims()) throw DimensionError("alignment_score: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < dec.coeffs.size(); ++i)
    s += std::abs(column_overlap(ref.basis_a, i, dec.basis_a, i));
  return s;
}

SchmidtDecomposition align_to_reference(const SchmidtDecomposition& dec,
                                        const SchmidtDecomposition& ref,
                                        const ToleranceConfig& tol) {
  if (dec.dims() != ref.dims() || dec.coeffs.size() != ref.coeffs.size())
    throw DimensionError("align_to_reference: dimension mismatch");
  const std::size_t k = dec.coeffs.size();

  // 1. Permutation maximising the summed overlap moduli.
  std::vector<std::vector<double>> cost(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      cost[i][j] = -std::abs(column_overlap(ref.basis_a, i, dec.basis_a, j));
  const auto assign = min_cost_assignment(cost);

  SchmidtDecomposition out = dec;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = assign[i];
    out.coeffs[i] = dec.coeffs[j];
    out.basis_a.set_column(i, dec.basis_a.column(j));
    out.basis_b.set_column(i, dec.basis_b.column(j));
  }

  // 2. Degenerate groups get the rotation that best matches the reference
  //    block. Grouping uses coefficient gaps so the rotation moves the
  //    represented state by at most tol.degeneracy.
  std::vector<std::size_t> group(k);
  for (std::size_t i = 0; i < k; ++i) group[i] = i;
  auto root = [&](std::size_t i) {
    while (group[i] != i) i = group[i] = group[group[i]];
    return i;
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::abs(out.coeffs[i] - out.coeffs[j]) < tol.degeneracy) group[root(j)] = root(i);
    }
  for (std::size_t g = 0; g < k; ++g) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < k; ++i)
      if (root(i) == g) members.push_back(i);
    if (members.size() < 2) continue;
    const std::size_t m = members.size();
    ComplexMatrix overlap(m, m);  // B^dagger R
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        overlap(a, b) = column_overlap(out.basis_a, members[a], ref.basis_a, members[b]);
    const SvdResult pol = svd(overlap, tol);
    const ComplexMatrix w = pol.u * pol.v.adjoint();
    const ComplexMatrix wc = w.conj();
    ComplexMatrix new_a(out.basis_a.rows(), m), new_b(out.basis_b.rows(), m);
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t r = 0; r < new_a.rows(); ++r)
          new_a(r, b) += out.basis_a(r, members[a]) * w(a, b);
        for (std::size_t r = 0; r < new_b.rows(); ++r)
          new_b(r, b) += out.basis_b(r, members[a]) * wc(a, b);
      }
    for (std::size_t b = 0; b < m; ++b) {
      out.basis_a.set_column(members[b], new_a.column(b));
      out.basis_b.set_column(members[b], new_b.column(b));
    }
  }

  // 3. Rephase each phi_i onto its reference.
  for (std::size_t i = 0; i < k; ++i) {
    const Complex z = column_overlap(ref.basis_a, i, out.basis_a, i);
    const double mod = std::abs(z);
    if (mod < 1e-12) continue;
    const Complex ph = z / mod;
    scale_column(out.basis_a, i, std::conj(ph));
    scale_column(out.basis_b, i, ph);
  }

  out.degeneracy_flags = adjacent_degeneracy(out.coeffs, tol.degeneracy);
  return out;
}

}  // namespace decoh
