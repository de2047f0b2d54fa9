#pragma once

// Linear maps B -> C, their Choi elements in C (x) B^op, and the link between
// super-operators A_0 on B and operators A on L^2(B).

#include "qgraph/correspondence.hpp"

namespace qgraph {

// Matrix in matrix-unit coordinates: target coords x source coords. The source
// uses the canonical frame of its context.
struct LinearMapBC {
  GnsContext source;
  BlockAlgebra target;
  Mat matrix;

  AlgebraElement operator()(const AlgebraElement& b) const {
    return AlgebraElement::from_coords(target, matrix * b.coords(source.algebra()));
  }
};

inline void check_map(const LinearMapBC& f) {
  require(f.matrix.rows() == f.target.dim() && f.matrix.cols() == f.source.dim(), ErrorCode::kBadShape,
          "map matrix has wrong shape");
}

template <class F>
LinearMapBC tabulate_map(const GnsContext& src, const BlockAlgebra& tgt, F&& f) {
  Mat m(tgt.dim(), src.dim());
  for (int b = 0; b < src.dim(); ++b) m.col(b) = f(AlgebraElement::unit(src.algebra(), b)).coords(tgt);
  return {src, tgt, m};
}

// theta_{psi a, c} -> c (x) sigma_{-i/2}(a). Writing f = sum_beta
// theta_{psi a_beta, f(e_beta)} with a_beta = Q^{-1} e_{ji} gives
// choi(f) = sum_{beta=(i,j)} f(e_ij) (x) e_ji / sqrt(Q_ii Q_jj).
inline OppTensor choi(const LinearMapBC& f) {
  check_map(f);
  const auto& ctx = f.source;
  const auto& alg = ctx.algebra();
  OppTensor e = OppTensor::zero(f.target, alg);
  for (int be = 0; be < ctx.dim(); ++be) {
    const auto& c = ctx.coord(be);
    e.coef.col(alg.transpose_index(be)) = f.matrix.col(be) / std::sqrt(c.qi * c.qj);
  }
  return e;
}

inline LinearMapBC choi_inverse(const GnsContext& src, const OppTensor& e) {
  require(e.right == src.algebra(), ErrorCode::kContextMismatch, "right leg does not match source");
  const auto& alg = src.algebra();
  Mat m(e.left.dim(), src.dim());
  for (int be = 0; be < src.dim(); ++be) {
    const auto& c = src.coord(be);
    m.col(be) = e.coef.col(alg.transpose_index(be)) * std::sqrt(c.qi * c.qj);
  }
  return {src, e.left, m};
}

inline PositivityReport is_cp(const LinearMapBC& f, double tol = kDefaultTol) {
  return positivity(choi(f), tol);
}

// A Lambda(a) = Lambda(A_0(a))
inline AdjacencyOp operator_of(const LinearMapBC& a0) {
  check_map(a0);
  require(a0.target == a0.source.algebra(), ErrorCode::kBadShape, "super-operator must map B to B");
  const Eigen::VectorXd s = a0.source.lambda_scale();
  return {a0.source, s.asDiagonal() * a0.matrix * s.cwiseInverse().asDiagonal()};
}

inline LinearMapBC super_operator_of(const AdjacencyOp& a) {
  const Eigen::VectorXd s = a.ctx.lambda_scale();
  return {a.ctx, a.ctx.algebra(), s.cwiseInverse().asDiagonal() * a.matrix * s.asDiagonal()};
}

struct SuperOperatorReport {
  bool cp = false;
  bool schur_idempotent = false;
  bool real = false;
  bool selfadjoint = false;
  bool undirected = false;
  // CP and Schur idempotent <=> A real and axiom 1
  bool cp_idempotent = false;
  bool real_idempotent = false;
  // CP and axioms 1-2 <=> A self-adjoint and axioms 1-2
  bool cp_graph = false;
  bool selfadjoint_graph = false;
  double choi_psi_residual = 0.0;  // Psi'(A_0) against Psi'_{0,1/2}(A)
  // with e = Psi'_{0,1/2}(A) idempotent: e >= 0 iff (sigma_{i/2} (x) id)(Psi_{1,0}(A)) self-adjoint
  bool epsilon_selfadjoint = false;
  AxiomReport axioms;
  PositivityReport positivity;
};

inline SuperOperatorReport super_operator_report(const LinearMapBC& a0, double tol = kDefaultTol) {
  const AdjacencyOp a = operator_of(a0);
  const auto& ctx = a.ctx;
  SuperOperatorReport r;
  r.axioms = axiom_report(a, tol);
  r.positivity = is_cp(a0, tol);
  r.cp = r.positivity.positive;
  r.schur_idempotent = r.axioms.ax[0];
  r.real = r.axioms.real;
  r.selfadjoint = r.axioms.selfadjoint;
  r.undirected = r.axioms.ax[1];
  r.cp_idempotent = r.cp && r.schur_idempotent;
  r.real_idempotent = r.real && r.schur_idempotent;
  r.cp_graph = r.cp_idempotent && r.undirected;
  r.selfadjoint_graph = r.selfadjoint && r.schur_idempotent && r.undirected;
  const OppTensor c = choi(a0);
  const OppTensor p = psi_map(a, 0.0, 0.5, true);
  r.choi_psi_residual = tensor_norm(c - p);
  const OppTensor eps = sigma_tensor(ctx, psi_map(a, 1.0, 0.0), cd(0, 0.5), 0.0);
  r.epsilon_selfadjoint = tensor_norm(eps - adjoint(eps)) <= tol * ctx.dim() * std::max(1.0, tensor_norm(eps));
  require(r.choi_psi_residual <= tol * ctx.dim() * std::max(1.0, tensor_norm(c)), ErrorCode::kEquivalenceViolation,
          "Choi element and Psi'_{0,1/2}(A) disagree");
  require(r.cp_idempotent == r.real_idempotent, ErrorCode::kEquivalenceViolation,
          "CP + Schur idempotent and real + axiom 1 disagree");
  require(r.cp_graph == r.selfadjoint_graph, ErrorCode::kEquivalenceViolation,
          "CP + axioms 1-2 and self-adjoint + axioms 1-2 disagree");
  return r;
}

}  // namespace qgraph
