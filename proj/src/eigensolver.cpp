#include "spinpair/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "spinpair/errors.hpp"

namespace spinpair {

namespace {

using Complex = std::complex<double>;

double max_offdiagonal(const MatrixXc& A) {
  double m = 0.0;
  for (int p = 0; p < A.rows(); ++p)
    for (int q = p + 1; q < A.cols(); ++q) m = std::max(m, std::abs(A(p, q)));
  return m;
}

// One Jacobi rotation zeroing A(p,q). A stays Hermitian, V accumulates the
// unitary. Rotation U has U(p,p)=c, U(p,q)=-s*e^{i phi}, U(q,p)=s*e^{-i phi},
// U(q,q)=c with phi = arg(A(p,q)).
void jacobi_rotate(MatrixXc& A, MatrixXc& V, int p, int q) {
  const Complex apq = A(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;  // e^{i phi}

  const double alpha = A(p, p).real();
  const double beta = A(q, q).real();
  const double tau = (beta - alpha) / (2.0 * r);
  // Roots of r t^2 - (beta-alpha) t - r = 0; keep the smaller-|t| one.
  const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(tau * tau + 1.0))
                                : 1.0 / (-tau + std::sqrt(tau * tau + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const int n = static_cast<int>(A.rows());
  // Update rows/columns p and q of A = U^dag A U.
  for (int k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const Complex akp = A(k, p);
    const Complex akq = A(k, q);
    A(k, p) = c * akp + s * std::conj(phase) * akq;
    A(k, q) = c * akq - s * phase * akp;
    A(p, k) = std::conj(A(k, p));
    A(q, k) = std::conj(A(k, q));
  }
  const double app = alpha * c * c + beta * s * s + 2.0 * s * c * r;
  const double aqq = alpha * s * s + beta * c * c - 2.0 * s * c * r;
  A(p, p) = app;
  A(q, q) = aqq;
  A(p, q) = 0.0;
  A(q, p) = 0.0;

  for (int k = 0; k < n; ++k) {
    const Complex vkp = V(k, p);
    const Complex vkq = V(k, q);
    V(k, p) = c * vkp + s * std::conj(phase) * vkq;
    V(k, q) = c * vkq - s * phase * vkp;
  }
}

// Plain Jacobi pass without resolver handling; returns unsorted diagonal/V.
void jacobi_core(MatrixXc A, double conv_tol_abs, int max_sweeps, VectorXr& values,
                 MatrixXc& V) {
  const int n = static_cast<int>(A.rows());
  V = MatrixXc::Identity(n, n);
  if (conv_tol_abs <= 0.0) conv_tol_abs = 1e-300;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (max_offdiagonal(A) < conv_tol_abs) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(A(p, q)) >= conv_tol_abs) jacobi_rotate(A, V, p, q);
  }
  if (max_offdiagonal(A) >= conv_tol_abs * 10.0)
    throw NumericalError("eigensolve: Jacobi sweeps did not converge");
  values.resize(n);
  for (int i = 0; i < n; ++i) values[i] = A(i, i).real();
}

void sort_ascending(VectorXr& values, MatrixXc& V) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] < values[b]; });
  VectorXr sv(n);
  MatrixXc sV(V.rows(), n);
  for (int i = 0; i < n; ++i) {
    sv[i] = values[order[i]];
    sV.col(i) = V.col(order[i]);
  }
  values = sv;
  V = sV;
}

void fix_phases(MatrixXc& V) {
  for (int j = 0; j < V.cols(); ++j) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < V.rows(); ++i) {
      const double a = std::abs(V(i, j));
      if (a > best + 1e-12) {
        best = a;
        imax = i;
      }
    }
    const Complex piv = V(imax, j);
    if (std::abs(piv) > 0.0) V.col(j) *= std::conj(piv) / std::abs(piv);
  }
}

// Recursively rotate degenerate clusters into eigenbases of the resolver
// operators so degenerate subspaces come out in a reproducible basis.
void resolve_cluster(MatrixXc& V, int begin, int count,
                     const std::vector<MatrixXc>& resolvers, size_t level,
                     const EigensolveOptions& opts) {
  if (count < 2 || level >= resolvers.size()) return;
  const MatrixXc W = V.middleCols(begin, count);
  const MatrixXc B = W.adjoint() * resolvers[level] * W;
  const MatrixXc Bh = 0.5 * (B + B.adjoint());
  VectorXr bvals;
  MatrixXc bvecs;
  jacobi_core(Bh, opts.convergence_tol * std::max(1.0, Bh.norm()), opts.max_sweeps,
              bvals, bvecs);
  sort_ascending(bvals, bvecs);
  V.middleCols(begin, count) = W * bvecs;
  // Recurse into sub-clusters still degenerate in this resolver.
  const double tol = opts.degeneracy_tol * std::max(1.0, bvals.cwiseAbs().maxCoeff());
  int start = 0;
  for (int i = 1; i <= count; ++i) {
    if (i == count || bvals[i] - bvals[i - 1] > tol) {
      resolve_cluster(V, begin + start, i - start, resolvers, level + 1, opts);
      start = i;
    }
  }
}

}  // namespace

EigenSystem eigensolve(const MatrixXc& H, const std::vector<MatrixXc>& resolvers,
                       const EigensolveOptions& opts) {
  if (H.rows() != H.cols()) throw ValidationError("eigensolve: matrix not square");
  const double scale = H.norm();
  const double herm = (H - H.adjoint()).norm();
  if (herm > opts.hermiticity_tol * std::max(scale, 1e-300))
    throw ValidationError("eigensolve: input is not Hermitian");

  EigenSystem out;
  jacobi_core(H, opts.convergence_tol * scale, opts.max_sweeps, out.values,
              out.vectors);
  sort_ascending(out.values, out.vectors);

  if (!resolvers.empty()) {
    const double tol = opts.degeneracy_tol * std::max(1.0, scale);
    const int n = out.size();
    int start = 0;
    for (int i = 1; i <= n; ++i) {
      if (i == n || out.values[i] - out.values[i - 1] > tol) {
        resolve_cluster(out.vectors, start, i - start, resolvers, 0, opts);
        start = i;
      }
    }
  }
  fix_phases(out.vectors);
  return out;
}

}  // namespace spinpair
