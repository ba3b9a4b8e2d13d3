#include "decoh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "decoh/errors.hpp"

namespace decoh {

namespace {

// Rotation J = diag(1, conj(e)) * [[c, s], [-s, c]] acting on the (p, q) plane.
// For a Hermitian 2x2 block [[app, b e], [b conj(e), aqq]] with b > 0,
// J^dagger * block * J is diagonal.
struct PlaneRotation {
  double c;
  double s;
  Complex e;  // unit phase of the off-diagonal element

  static PlaneRotation make(double app, double aqq, Complex apq) {
    const double b = std::abs(apq);
    const double theta = (aqq - app) / (2.0 * b);
    double t;
    if (std::abs(theta) > 1e150) {
      t = 0.5 / theta;
    } else {
      t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, apq / b};
  }

  // Columns p, q of m become [m_p m_q] * J.
  void apply_right(ComplexMatrix& m, std::size_t p, std::size_t q) const {
    const Complex ce = std::conj(e);
    for (std::size_t k = 0; k < m.rows(); ++k) {
      const Complex mp = m(k, p);
      const Complex mq = m(k, q);
      m(k, p) = c * mp - s * ce * mq;
      m(k, q) = s * mp + c * ce * mq;
    }
  }

  // Rows p, q of m become J^dagger * [m_p; m_q].
  void apply_left_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q) const {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const Complex mp = m(p, k);
      const Complex mq = m(q, k);
      m(p, k) = c * mp - s * e * mq;
      m(q, k) = s * mp + c * e * mq;
    }
  }
};

std::vector<std::size_t> descending_order(const RealVector& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

void check_dimension(std::size_t n, const ToleranceConfig& tol, const char* what) {
  if (n > tol.max_dimension) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(n) +
                         " exceeds cap " + std::to_string(tol.max_dimension));
  }
}

// One-sided Jacobi on the columns of a (rows >= cols). On return the columns of
// a are mutually orthogonal and v accumulates the rotations.
void orthogonalize_columns(ComplexMatrix& a, ComplexMatrix& v, const ToleranceConfig& tol) {
  const std::size_t n = a.cols();
  const double scale = a.frobenius_norm();
  if (scale == 0.0) return;
  const double floor = 1e-300 + 1e-36 * scale * scale;

  for (int sweep = 0; sweep < tol.jacobi_max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < a.rows(); ++k) {
          alpha += std::norm(a(k, p));
          beta += std::norm(a(k, q));
          gamma += std::conj(a(k, p)) * a(k, q);
        }
        const double g = std::abs(gamma);
        if (g <= floor || g <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const auto rot = PlaneRotation::make(alpha, beta, gamma);
        rot.apply_right(a, p, q);
        rot.apply_right(v, p, q);
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceError("svd: one-sided Jacobi did not converge in " +
                         std::to_string(tol.jacobi_max_sweeps) + " sweeps");
}

// Orthonormalizes v against the first `count` columns of q (two passes).
double project_out(const ComplexMatrix& q, std::size_t count, ComplexVector& v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < count; ++j) {
      Complex ov = 0.0;
      for (std::size_t k = 0; k < q.rows(); ++k) ov += std::conj(q(k, j)) * v[k];
      for (std::size_t k = 0; k < q.rows(); ++k) v[k] -= ov * q(k, j);
    }
  }
  return norm(v);
}

// Fills columns [filled, n) of q with an orthonormal completion.
void fill_completion(ComplexMatrix& q, std::size_t filled) {
  const std::size_t n = q.rows();
  for (std::size_t cand = 0; cand < n && filled < q.cols(); ++cand) {
    ComplexVector v(n);
    v[cand] = 1.0;
    const double nv = project_out(q, filled, v);
    if (nv < 1e-6) continue;
    for (auto& z : v) z /= nv;
    q.set_column(filled++, v);
  }
  if (filled != q.cols()) throw ConvergenceError("basis completion failed");
}

}  // namespace

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const ToleranceConfig& tol) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  check_dimension(rows, tol, "tensor_product");
  check_dimension(cols, tol, "tensor_product");
  ComplexMatrix out(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

EigenDecomposition hermitian_eigh(const ComplexMatrix& m, const ToleranceConfig& tol) {
  if (!m.is_square()) throw InvalidArgument("hermitian_eigh: matrix is not square");
  const std::size_t n = m.rows();
  check_dimension(n, tol, "hermitian_eigh");
  const double scale = m.frobenius_norm();
  if (m.hermiticity_error() > tol.hermitian * std::max(1.0, scale)) {
    throw InvalidArgument("hermitian_eigh: matrix is not Hermitian (error " +
                          std::to_string(m.hermiticity_error()) + ")");
  }

  ComplexMatrix a = m.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double floor = 1e-300 + 1e-18 * scale;

  bool converged = false;
  for (int sweep = 0; sweep < tol.jacobi_max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (g <= floor || g <= 1e-16 * std::sqrt(std::abs(app * aqq))) continue;
        rotated = true;
        const auto rot = PlaneRotation::make(app, aqq, apq);
        rot.apply_right(a, p, q);
        rot.apply_left_adjoint(a, p, q);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rot.apply_right(v, p, q);
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw ConvergenceError("hermitian_eigh: Jacobi did not converge in " +
                           std::to_string(tol.jacobi_max_sweeps) + " sweeps");
  }

  RealVector diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  const auto order = descending_order(diag);
  EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return hermitian_eigh(m, tol).values;
}

SvdResult svd(const ComplexMatrix& m, const ToleranceConfig& tol) {
  if (m.rows() < m.cols()) {
    SvdResult t = svd(m.adjoint(), tol);
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
  }
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  check_dimension(rows, tol, "svd");

  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(cols);
  orthogonalize_columns(a, v, tol);

  RealVector norms(cols);
  for (std::size_t j = 0; j < cols; ++j) norms[j] = norm(a.column(j));
  const auto order = descending_order(norms);
  const double smax = cols ? norms[order[0]] : 0.0;

  SvdResult out{ComplexMatrix(rows, rows), RealVector(cols), ComplexMatrix(cols, cols)};
  std::size_t filled = 0;
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    out.s[k] = norms[j];
    for (std::size_t r = 0; r < cols; ++r) out.v(r, k) = v(r, j);
    // Columns at round-off level carry no usable direction; they are rebuilt below.
    if (norms[j] > 1e-13 * smax && norms[j] > 1e-300) {
      for (std::size_t r = 0; r < rows; ++r) out.u(r, k) = a(r, j) / norms[j];
      filled = k + 1;
    }
  }
  // Remaining columns: arbitrary orthonormal completion.
  fill_completion(out.u, filled);
  return out;
}

ComplexMatrix svd_reconstruct(const SvdResult& r) {
  const std::size_t rows = r.u.rows();
  const std::size_t cols = r.v.rows();
  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < r.s.size(); ++k) {
    if (r.s[k] == 0.0) continue;
    for (std::size_t i = 0; i < rows; ++i) {
      const Complex ui = r.u(i, k) * r.s[k];
      for (std::size_t j = 0; j < cols; ++j) m(i, j) += ui * std::conj(r.v(j, k));
    }
  }
  return m;
}

ComplexMatrix complete_basis(const ComplexMatrix& partial, const ToleranceConfig& tol) {
  if (partial.cols() > partial.rows())
    throw InvalidArgument("complete_basis: more columns than rows");
  if (orthonormality_error(partial) > tol.orthonormal)
    throw InvalidArgument("complete_basis: input columns are not orthonormal");
  ComplexMatrix q(partial.rows(), partial.rows());
  for (std::size_t c = 0; c < partial.cols(); ++c) q.set_column(c, partial.column(c));
  fill_completion(q, partial.cols());
  return q;
}

ComplexMatrix build_observable(const ComplexMatrix& basis, std::span<const double> scale,
                               const ToleranceConfig& tol) {
  if (scale.size() != basis.cols()) {
    throw InvalidArgument("build_observable: " + std::to_string(scale.size()) +
                          " scale values for " + std::to_string(basis.cols()) + " basis vectors");
  }
  if (orthonormality_error(basis) > tol.orthonormal)
    throw InvalidArgument("build_observable: basis columns are not orthonormal");
  ComplexMatrix a(basis.rows(), basis.rows());
  for (std::size_t n = 0; n < basis.cols(); ++n) {
    for (std::size_t i = 0; i < basis.rows(); ++i) {
      const Complex bi = basis(i, n) * scale[n];
      for (std::size_t j = 0; j < basis.rows(); ++j) a(i, j) += bi * std::conj(basis(j, n));
    }
  }
  return a.hermitian_part();
}

double expectation_value(std::span<const Complex> state, const ComplexMatrix& obs,
                         const ToleranceConfig& tol) {
  if (obs.rows() != state.size() || !obs.is_square())
    throw DimensionError("expectation_value: observable does not match state dimension");
  if (obs.hermiticity_error() > tol.hermitian * std::max(1.0, obs.frobenius_norm()))
    throw InvalidArgument("expectation_value: observable is not Hermitian");
  const Complex v = inner(state, obs * state);
  if (std::abs(v.imag()) > tol.density_hermitian * std::max(1.0, obs.frobenius_norm()))
    throw InvariantViolation("expectation_real", "imaginary part " + std::to_string(v.imag()));
  return v.real();
}

}  // namespace decoh
