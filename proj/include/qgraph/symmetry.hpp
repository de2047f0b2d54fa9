#pragma once

// Automorphisms of (B, psi) and their action on quantum graphs, plus finite
// corepresentation certificates for quantum symmetry.

#include <numeric>
#include <optional>

#include "qgraph/correspondence.hpp"

namespace qgraph {

// theta(x)_{perm[k]} = u_k x_k u_k^*
struct AutoCandidate {
  std::vector<int> permutation;
  std::vector<Mat> unitaries;
};

inline void validate(const AutoCandidate& t, const BlockAlgebra& alg, double tol = kDefaultTol) {
  const int kb = alg.num_blocks();
  require(int(t.permutation.size()) == kb && int(t.unitaries.size()) == kb, ErrorCode::kBadShape,
          "one permutation entry and one unitary per block");
  std::vector<bool> seen(std::size_t(kb), false);
  for (int k = 0; k < kb; ++k) {
    const int p = t.permutation[std::size_t(k)];
    require(p >= 0 && p < kb && !seen[std::size_t(p)], ErrorCode::kBadShape, "not a permutation of blocks");
    seen[std::size_t(p)] = true;
    require(alg.block_dim(p) == alg.block_dim(k), ErrorCode::kBadShape, "blocks of different size swapped");
    const Mat& u = t.unitaries[std::size_t(k)];
    require(u.rows() == alg.block_dim(k) && u.cols() == alg.block_dim(k), ErrorCode::kBadShape,
            "unitary has wrong size");
    require((u * u.adjoint() - Mat::Identity(u.rows(), u.cols())).norm() <= tol * u.rows(), ErrorCode::kBadShape,
            "block map is not unitary");
  }
}

inline AutoCandidate identity_auto(const BlockAlgebra& alg) {
  AutoCandidate t;
  for (int k = 0; k < alg.num_blocks(); ++k) {
    t.permutation.push_back(k);
    t.unitaries.push_back(Mat::Identity(alg.block_dim(k), alg.block_dim(k)));
  }
  return t;
}

inline AlgebraElement apply(const AutoCandidate& t, const AlgebraElement& x) {
  AlgebraElement y = x;
  for (std::size_t k = 0; k < x.blocks.size(); ++k) {
    const Mat& u = t.unitaries[k];
    y.blocks[std::size_t(t.permutation[k])] = u * x.blocks[k] * u.adjoint();
  }
  return y;
}

inline AutoCandidate inverse(const AutoCandidate& t) {
  AutoCandidate inv = t;
  for (std::size_t k = 0; k < t.permutation.size(); ++k) {
    const auto p = std::size_t(t.permutation[k]);
    inv.permutation[p] = int(k);
    inv.unitaries[p] = t.unitaries[k].adjoint();
  }
  return inv;
}

inline AutoCandidate compose(const AutoCandidate& a, const AutoCandidate& b) {  // a o b
  AutoCandidate c = b;
  for (std::size_t k = 0; k < b.permutation.size(); ++k) {
    const auto p = std::size_t(b.permutation[k]);
    c.permutation[k] = a.permutation[p];
    c.unitaries[k] = a.unitaries[p] * b.unitaries[k];
  }
  return c;
}

// Matrix of theta in matrix-unit coordinates.
inline Mat theta_matrix(const AutoCandidate& t, const BlockAlgebra& alg) {
  Mat m(alg.dim(), alg.dim());
  for (int a = 0; a < alg.dim(); ++a) m.col(a) = apply(t, AlgebraElement::unit(alg, a)).coords(alg);
  return m;
}

struct StateReport {
  bool preserves = false;
  double q_residual = 0.0;
  double modular_residual = 0.0;  // theta sigma_t = sigma_t theta on matrix units
};

inline StateReport is_state_automorphism(const AutoCandidate& t, const GnsContext& ctx, double tol = kDefaultTol) {
  validate(t, ctx.algebra(), tol);
  StateReport r;
  const AlgebraElement q = ctx.q_power(1.0);
  r.q_residual = (block_diag(apply(t, q)) - block_diag(q)).norm();
  for (int a = 0; a < ctx.dim(); ++a) {
    const AlgebraElement x = AlgebraElement::unit(ctx.algebra(), a);
    const AlgebraElement lhs = apply(t, ctx.sigma(x, 0.7));
    const AlgebraElement rhs = ctx.sigma(apply(t, x), 0.7);
    r.modular_residual = std::max(r.modular_residual, (block_diag(lhs) - block_diag(rhs)).norm());
  }
  const double thr = tol * ctx.dim();
  r.preserves = r.q_residual <= thr && r.modular_residual <= thr;
  return r;
}

// theta-hat Lambda(b) = Lambda(theta(b)), a unitary on L^2(B).
inline Mat theta_hat(const AutoCandidate& t, const GnsContext& ctx, double tol = kDefaultTol) {
  require(is_state_automorphism(t, ctx, tol).preserves, ErrorCode::kNotStatePreserving,
          "automorphism does not preserve psi");
  const Eigen::VectorXd s = ctx.lambda_scale();
  return s.asDiagonal() * theta_matrix(t, ctx.algebra()) * s.cwiseInverse().asDiagonal();
}

struct GraphAutomorphismReport {
  bool automorphism = false;
  double commutator = 0.0;   // || A theta-hat - theta-hat A ||
  double tensor_defect = 0.0;  // || (theta (x) theta)(e) - e ||
};

inline GraphAutomorphismReport is_graph_automorphism(const AutoCandidate& t, const AdjacencyOp& a,
                                                     double tol = kDefaultTol) {
  check_adjacency(a);
  const Mat u = theta_hat(t, a.ctx, tol);
  GraphAutomorphismReport r;
  r.commutator = op_norm(a.matrix * u - u * a.matrix);
  const OppTensor e = graph_projection(a);
  const Mat th = theta_matrix(t, a.ctx.algebra());
  const OppTensor moved{e.left, e.right, th * e.coef * th.transpose()};
  r.tensor_defect = tensor_norm(moved - e);
  const double thr = tol * a.ctx.dim();
  const bool c1 = r.commutator <= thr * std::max(1.0, op_norm(a.matrix));
  const bool c2 = r.tensor_defect <= thr * std::max(1.0, tensor_norm(e));
  require(c1 == c2, ErrorCode::kVerdictMismatch, "operator and tensor criteria disagree");
  r.automorphism = c1;
  return r;
}

// ---------------------------------------------------------------------------
// Corepresentation certificates: v in M_n(A_q) acting on L^2(B) (x) H_q.

struct CorepCertificate {
  BlockAlgebra symmetry_algebra;
  std::vector<std::vector<AlgebraElement>> v;  // n x n
};

inline Mat corep_matrix(const CorepCertificate& c) {
  const Representation rq = Representation::minimal(c.symmetry_algebra);
  const int n = int(c.v.size()), d = rq.dim();
  Mat big = Mat::Zero(Eigen::Index(n) * d, Eigen::Index(n) * d);
  for (int i = 0; i < n; ++i) {
    require(int(c.v[std::size_t(i)].size()) == n, ErrorCode::kBadShape, "certificate matrix is not square");
    for (int j = 0; j < n; ++j) big.block(Eigen::Index(i) * d, Eigen::Index(j) * d, d, d) = rq.pi(c.v[std::size_t(i)][std::size_t(j)]);
  }
  return big;
}

struct CorepReport {
  bool coaction = false;
  std::optional<bool> commutes;
  double unitary = 0.0;
  double multiplication = 0.0;
  double unit = 0.0;
  double counit = 0.0;  // eta eta^* commutes with v
  double conjugate = 0.0;
  double adjacency = 0.0;
};

// X_{ab} = (Lambda f_a | Lambda f_b^*)
inline Mat conjugation_matrix(const GnsContext& ctx) {
  Mat x(ctx.dim(), ctx.dim());
  for (int a = 0; a < ctx.dim(); ++a)
    for (int b = 0; b < ctx.dim(); ++b) {
      const Vec fb = ctx.lambda(ctx.lambda_inverse(Vec::Unit(ctx.dim(), b)).adjoint());
      x(a, b) = fb(a);
    }
  return x;
}

inline CorepReport corep_check(const GnsContext& ctx, const CorepCertificate& c,
                               const std::optional<AdjacencyOp>& a = std::nullopt, double tol = kDefaultTol) {
  const int n = ctx.dim();
  require(int(c.v.size()) == n, ErrorCode::kBadShape, "certificate size differs from dim L^2(B)");
  const Mat v = corep_matrix(c);
  const int d = int(v.rows()) / n;
  const Mat id_d = Mat::Identity(d, d), id_n = Mat::Identity(n, n);
  CorepReport r;
  r.unitary = std::max(op_norm(v.adjoint() * v - Mat::Identity(v.rows(), v.cols())),
                       op_norm(v * v.adjoint() - Mat::Identity(v.rows(), v.cols())));
  // (m (x) 1) v_13 v_23 = v (m (x) 1)
  const Mat m = ctx.m();
  Mat v13 = Mat::Zero(Eigen::Index(n) * n * d, Eigen::Index(n) * n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Mat blk = v.block(Eigen::Index(i) * d, Eigen::Index(j) * d, d, d);
      if (blk.norm() == 0.0) continue;
      for (int l = 0; l < n; ++l)
        v13.block((Eigen::Index(i) * n + l) * d, (Eigen::Index(j) * n + l) * d, d, d) = blk;
    }
  const Mat v23 = kron(id_n, v);
  const Mat md = kron(m, id_d);
  r.multiplication = op_norm(md * v13 * v23 - v * md);
  const Mat eta = ctx.eta();
  const Mat ed = kron(eta, id_d);
  r.unit = op_norm(v * ed - ed);
  const Mat pd = kron(eta * eta.adjoint(), id_d);
  r.counit = op_norm(pd * v - v * pd);
  // v = (X (x) 1) vbar (Xbar (x) 1), vbar_ij = v_ij^*
  const Mat x = conjugation_matrix(ctx);
  Mat vbar = v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vbar.block(Eigen::Index(i) * d, Eigen::Index(j) * d, d, d) = v.block(Eigen::Index(i) * d, Eigen::Index(j) * d, d, d).adjoint();
  r.conjugate = op_norm(kron(x, id_d) * vbar * kron(x.conjugate(), id_d) - v);
  const double thr = tol * double(v.rows());
  r.coaction = r.unitary <= thr && r.multiplication <= thr && r.unit <= thr && r.counit <= thr && r.conjugate <= thr;
  if (a) {
    check_adjacency(*a);
    const Mat ad = kron(a->matrix, id_d);
    r.adjacency = op_norm(ad * v - v * ad);
    r.commutes = r.adjacency <= thr * std::max(1.0, op_norm(a->matrix));
  }
  return r;
}

// A_q = C(G) for a finite list G of state-preserving automorphisms, with
// v_ij(g) = theta-hat_g(i, j).
inline CorepCertificate group_certificate(const GnsContext& ctx, const std::vector<AutoCandidate>& group,
                                          double tol = kDefaultTol) {
  require(!group.empty(), ErrorCode::kBadShape, "empty group");
  const int n = ctx.dim(), g = int(group.size());
  BlockAlgebra aq(std::vector<int>(std::size_t(g), 1));
  CorepCertificate c{aq, std::vector<std::vector<AlgebraElement>>(std::size_t(n),
                                                                  std::vector<AlgebraElement>(std::size_t(n), AlgebraElement::zero(aq)))};
  for (int s = 0; s < g; ++s) {
    const Mat u = theta_hat(group[std::size_t(s)], ctx, tol);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.v[std::size_t(i)][std::size_t(j)].blocks[std::size_t(s)](0, 0) = u(i, j);
  }
  return c;
}

inline AutoCandidate vertex_permutation(const std::vector<int>& sigma) {
  AutoCandidate t;
  for (int s : sigma) {
    t.permutation.push_back(s);
    t.unitaries.push_back(Mat::Identity(1, 1));
  }
  return t;
}

struct ClassicalCertificate {
  std::vector<std::vector<int>> automorphisms;  // sigma with A(sigma u, sigma v) = A(u, v)
  CorepCertificate certificate;
};

// Brute force over Sym(V); v_ij(sigma) = delta_{i, sigma(j)}.
inline ClassicalCertificate classical_certificate(const Graph& g) {
  require(g.vertices > 0, ErrorCode::kBadShape, "graph needs at least one vertex");
  require(g.vertices <= 8, ErrorCode::kTooLarge, "brute-force automorphism search limited to 8 vertices");
  const AdjacencyOp a = from_classical(g);
  std::vector<int> sigma(std::size_t(g.vertices));
  std::iota(sigma.begin(), sigma.end(), 0);
  ClassicalCertificate out;
  std::vector<AutoCandidate> group;
  do {
    bool ok = true;
    for (int u = 0; u < g.vertices && ok; ++u)
      for (int v = 0; v < g.vertices && ok; ++v)
        ok = a.matrix(sigma[std::size_t(u)], sigma[std::size_t(v)]) == a.matrix(u, v);
    if (ok) {
      out.automorphisms.push_back(sigma);
      group.push_back(vertex_permutation(sigma));
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  out.certificate = group_certificate(a.ctx, group);
  return out;
}

}  // namespace qgraph
