#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qgraph {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Row-major flattening: vec(X)[p*N+q] = X(p,q). With this ordering
// kron(a, b^T) vec(X) = vec(a X b).
inline Vec vec(const Mat& x) {
  Vec v(x.size());
  for (Eigen::Index p = 0; p < x.rows(); ++p)
    for (Eigen::Index q = 0; q < x.cols(); ++q) v(p * x.cols() + q) = x(p, q);
  return v;
}

inline Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  Mat x(rows, cols);
  for (Eigen::Index p = 0; p < rows; ++p)
    for (Eigen::Index q = 0; q < cols; ++q) x(p, q) = v(p * cols + q);
  return x;
}

inline Mat unvec_square(const Vec& v) {
  auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  return unvec(v, n, n);
}

// Spectral norm. Goes through the Gram matrix, which keeps the relative
// accuracy we need for residual thresholds.
inline double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  const Mat g = a.rows() <= a.cols() ? Mat(a * a.adjoint()) : Mat(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline bool is_hermitian(const Mat& a, double tol) {
  return a.rows() == a.cols() && op_norm(a - a.adjoint()) <= tol;
}

// Orthonormal basis (columns) of span(vs) by Gram-Schmidt, always taking the
// candidate with the largest remaining residual next. Candidates whose
// residual drops below rank_tol * (largest input norm) are discarded.
inline Mat orthonormalize(const std::vector<Vec>& vs, double rank_tol = 1e-8) {
  if (vs.empty()) return Mat(0, 0);
  const Eigen::Index len = vs.front().size();
  std::vector<Vec> res(vs);
  std::vector<bool> used(vs.size(), false);
  double scale = 0.0;
  for (const auto& v : vs) scale = std::max(scale, v.norm());
  std::vector<Vec> basis;
  if (scale == 0.0) return Mat(len, 0);
  const double cutoff = rank_tol * scale;
  while (basis.size() < static_cast<std::size_t>(len)) {
    std::size_t best = vs.size();
    double best_norm = cutoff;
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (used[i]) continue;
      double n = res[i].norm();
      if (n > best_norm) {
        best_norm = n;
        best = i;
      }
    }
    if (best == vs.size()) break;
    used[best] = true;
    Vec q = res[best] / best_norm;
    for (const auto& b : basis) q -= b * b.dot(q);  // second pass
    q.normalize();
    for (std::size_t i = 0; i < res.size(); ++i)
      if (!used[i]) res[i] -= q * q.dot(res[i]);
    basis.push_back(std::move(q));
  }
  Mat u(len, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) u.col(Eigen::Index(i)) = basis[i];
  return u;
}

// Columns of u must be orthonormal.
inline Vec project_out(const Mat& u, const Vec& x) {
  if (u.cols() == 0) return x;
  return x - u * (u.adjoint() * x);
}

inline double span_residual(const Mat& u, const Vec& x) {
  return project_out(u, x).norm();
}

// Largest residual of either orthonormal family against the other's span.
// Zero iff the spans coincide; 1 when dimensions differ.
inline double subspace_distance(const Mat& u, const Mat& w) {
  if (u.cols() != w.cols()) return 1.0;
  double d = 0.0;
  for (Eigen::Index i = 0; i < u.cols(); ++i)
    d = std::max(d, span_residual(w, u.col(i)));
  for (Eigen::Index i = 0; i < w.cols(); ++i)
    d = std::max(d, span_residual(u, w.col(i)));
  return d;
}

inline Mat orthogonal_complement(const Mat& u, Eigen::Index len) {
  std::vector<Vec> cand;
  cand.reserve(std::size_t(len));
  for (Eigen::Index i = 0; i < len; ++i) {
    Vec e = Vec::Zero(len);
    e(i) = 1.0;
    cand.push_back(project_out(u, e));
  }
  // every candidate is already orthogonal to u; rank_tol relative to 1
  std::vector<Vec> keep;
  for (auto& c : cand) keep.push_back(c);
  Mat c = orthonormalize(keep, 1e-8);
  return c.cols() == 0 ? Mat(len, 0) : c;
}

inline Mat span_sum(const Mat& u, const Mat& w) {
  std::vector<Vec> vs;
  for (Eigen::Index i = 0; i < u.cols(); ++i) vs.push_back(u.col(i));
  for (Eigen::Index i = 0; i < w.cols(); ++i) vs.push_back(w.col(i));
  if (vs.empty()) return Mat(std::max(u.rows(), w.rows()), 0);
  return orthonormalize(vs);
}

inline Mat span_intersection(const Mat& u, const Mat& w) {
  const Eigen::Index len = std::max(u.rows(), w.rows());
  Mat uc = orthogonal_complement(u, len);
  Mat wc = orthogonal_complement(w, len);
  return orthogonal_complement(span_sum(uc, wc), len);
}

}  // namespace qgraph
