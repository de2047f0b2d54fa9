#pragma once

// Elements of C (x) B^op, stored by coefficients in the matrix-unit basis:
// e = sum_{alpha,beta} coef(alpha, beta) e_alpha (x) e_beta. The algebra
// acts on H_C (x) conj(H_B) through c (x) b -> pi(c) (x) pi(b)^T.

#include "qgraph/representation.hpp"

namespace qgraph {

struct OppTensor {
  BlockAlgebra left;
  BlockAlgebra right;
  Mat coef;

  static OppTensor zero(const BlockAlgebra& l, const BlockAlgebra& r) {
    return {l, r, Mat::Zero(l.dim(), r.dim())};
  }
  static OppTensor identity(const BlockAlgebra& l, const BlockAlgebra& r) {
    return elementary(AlgebraElement::identity(l), AlgebraElement::identity(r), l, r);
  }
  static OppTensor elementary(const AlgebraElement& a, const AlgebraElement& b,
                              const BlockAlgebra& l, const BlockAlgebra& r) {
    return {l, r, a.coords(l) * b.coords(r).transpose()};
  }
};

inline OppTensor operator+(const OppTensor& a, const OppTensor& b) {
  return {a.left, a.right, a.coef + b.coef};
}
inline OppTensor operator-(const OppTensor& a, const OppTensor& b) {
  return {a.left, a.right, a.coef - b.coef};
}
inline OppTensor operator*(cd s, const OppTensor& a) { return {a.left, a.right, s * a.coef}; }

// sigma(a (x) b) = b (x) a
inline OppTensor swap(const OppTensor& e) { return {e.right, e.left, e.coef.transpose()}; }

inline OppTensor adjoint(const OppTensor& e) {
  Mat c(e.coef.rows(), e.coef.cols());
  for (int a = 0; a < e.left.dim(); ++a)
    for (int b = 0; b < e.right.dim(); ++b)
      c(e.left.transpose_index(a), e.right.transpose_index(b)) = std::conj(e.coef(a, b));
  return {e.left, e.right, c};
}

// (a (x) b)(c (x) d) = ac (x) db
inline OppTensor product(const OppTensor& e, const OppTensor& f) {
  require(e.left == f.left && e.right == f.right, ErrorCode::kBadShape, "tensor algebras differ");
  const BlockAlgebra& L = e.left;
  const BlockAlgebra& R = e.right;
  OppTensor out = OppTensor::zero(L, R);
  for (int al = 0; al < L.dim(); ++al) {
    const auto& ua = L.unit(al);
    for (int be = 0; be < R.dim(); ++be) {
      const cd x = e.coef(al, be);
      if (x == 0.0) continue;
      const auto& ub = R.unit(be);
      for (int l = 0; l < L.block_dim(ua.block); ++l) {
        const int ga = L.index(ua.block, ua.col, l);
        const int ac = L.index(ua.block, ua.row, l);
        for (int p = 0; p < R.block_dim(ub.block); ++p) {
          const int de = R.index(ub.block, p, ub.row);
          const int db = R.index(ub.block, p, ub.col);
          out.coef(ac, db) += x * f.coef(ga, de);
        }
      }
    }
  }
  return out;
}

inline Mat action(const OppTensor& e, const Representation& rl, const Representation& rr) {
  require(rl.algebra() == e.left && rr.algebra() == e.right, ErrorCode::kSpaceMismatch,
          "representation does not match tensor algebras");
  const int nr = rr.dim();
  const Eigen::Index n = Eigen::Index(rl.dim()) * nr;
  Mat out = Mat::Zero(n, n);
  for (int al = 0; al < e.left.dim(); ++al) {
    const auto le = rl.unit_entries(al);
    for (int be = 0; be < e.right.dim(); ++be) {
      const cd x = e.coef(al, be);
      if (x == 0.0) continue;
      // pi(e_beta)^T has entries (col, row)
      for (auto [p, q] : le)
        for (auto [a, b] : rr.unit_entries(be)) out(Eigen::Index(p) * nr + b, Eigen::Index(q) * nr + a) += x;
    }
  }
  return out;
}

inline Mat action(const OppTensor& e) {
  return action(e, Representation::minimal(e.left), Representation::minimal(e.right));
}

// Orthogonal projection of an operator on H_C (x) conj(H_B) onto the image of
// C (x) B^op. The images of e_alpha (x) e_beta are orthogonal with squared
// Hilbert-Schmidt norm m_k m_l.
inline OppTensor from_action(const Mat& x, const Representation& rl, const Representation& rr,
                             double* residual = nullptr) {
  const int nr = rr.dim();
  require(x.rows() == Eigen::Index(rl.dim()) * nr && x.cols() == x.rows(), ErrorCode::kSpaceMismatch,
          "operator does not act on H (x) conj(H)");
  OppTensor e = OppTensor::zero(rl.algebra(), rr.algebra());
  for (int al = 0; al < e.left.dim(); ++al) {
    const auto le = rl.unit_entries(al);
    for (int be = 0; be < e.right.dim(); ++be) {
      const auto re = rr.unit_entries(be);
      cd s = 0.0;
      for (auto [p, q] : le)
        for (auto [a, b] : re) s += x(Eigen::Index(p) * nr + b, Eigen::Index(q) * nr + a);
      e.coef(al, be) = s / double(le.size() * re.size());
    }
  }
  if (residual) *residual = (x - action(e, rl, rr)).norm();
  return e;
}

inline double tensor_norm(const OppTensor& e) { return op_norm(action(e)); }

inline bool is_projection(const OppTensor& e, double tol = kDefaultTol) {
  const Mat x = action(e);
  const double t = tol * double(x.rows());
  return op_norm(x * x - x) <= t && op_norm(x - x.adjoint()) <= t;
}

// Smallest eigenvalue of the Hermitian part, and the anti-Hermitian defect.
struct PositivityReport {
  bool positive = false;
  double min_eigenvalue = 0.0;
  double hermitian_defect = 0.0;
};

inline PositivityReport positivity(const OppTensor& e, double tol = kDefaultTol) {
  const Mat x = action(e);
  PositivityReport r;
  r.hermitian_defect = op_norm(x - x.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  r.min_eigenvalue = ev.minCoeff();
  const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
  r.positive = r.hermitian_defect <= tol * scale && r.min_eigenvalue >= -tol * scale;
  return r;
}

// m(a (x) b) = ab, for left == right.
inline AlgebraElement multiply_legs(const OppTensor& e) {
  require(e.left == e.right, ErrorCode::kBadShape, "legs live in different algebras");
  AlgebraElement out = AlgebraElement::zero(e.left);
  for (int al = 0; al < e.left.dim(); ++al) {
    const auto& ua = e.left.unit(al);
    for (int l = 0; l < e.left.block_dim(ua.block); ++l) {
      const int be = e.left.index(ua.block, ua.col, l);
      out.blocks[std::size_t(ua.block)](ua.row, l) += e.coef(al, be);
    }
  }
  return out;
}

// (sigma_{z1} (x) sigma_{z2})(e) for e in B (x) B^op.
inline OppTensor sigma_tensor(const GnsContext& ctx, const OppTensor& e, cd z1, cd z2) {
  require(e.left == ctx.algebra() && e.right == ctx.algebra(), ErrorCode::kContextMismatch,
          "tensor does not live over this context");
  OppTensor out = e;
  for (int a = 0; a < ctx.dim(); ++a) {
    const cd fa = ctx.sigma_factor(a, z1);
    for (int b = 0; b < ctx.dim(); ++b) out.coef(a, b) *= fa * ctx.sigma_factor(b, z2);
  }
  return out;
}

// (id (x) sigma_z) on C (x) B^op.
inline OppTensor sigma_right(const GnsContext& ctx, const OppTensor& e, cd z) {
  require(e.right == ctx.algebra(), ErrorCode::kContextMismatch, "right leg does not match context");
  OppTensor out = e;
  for (int b = 0; b < ctx.dim(); ++b) out.coef.col(b) *= ctx.sigma_factor(b, z);
  return out;
}

}  // namespace qgraph
