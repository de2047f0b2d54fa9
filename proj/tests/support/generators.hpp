#pragma once

// Random instances for the test suites.

#include <random>

#include "qgraph/correspondence.hpp"

namespace qgraph::testing {

using Rng = std::mt19937_64;

inline cd gauss_c(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline Mat random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = gauss_c(rng);
  return m;
}

inline Mat random_hermitian(Rng& rng, Eigen::Index n) {
  Mat g = random_matrix(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

inline Mat random_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(rng, n, n));
  Mat q = qr.householderQ();
  return q;
}

inline AlgebraElement random_element(Rng& rng, const BlockAlgebra& alg) {
  AlgebraElement a;
  for (int n : alg.dims()) a.blocks.push_back(random_matrix(rng, n, n));
  return a;
}

// Random faithful state; the density is deliberately not diagonal.
inline FaithfulFunctional random_functional(Rng& rng, const BlockAlgebra& alg) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  AlgebraElement q;
  double tr = 0.0;
  for (int n : alg.dims()) {
    Mat g = random_matrix(rng, n, n);
    Mat h = g * g.adjoint() + u(rng) * Mat::Identity(n, n);
    tr += h.trace().real();
    q.blocks.push_back(h);
  }
  for (auto& b : q.blocks) b /= tr;
  return {alg, q};
}

inline GnsContext random_context(Rng& rng, const BlockAlgebra& alg) {
  return make_context(random_functional(rng, alg), true);
}

// Random element of B (x) B^op fixed by sigma and by the adjoint, supported on
// the commutant of Q (x) Q^{-1}.
inline OppTensor random_symmetric_tensor(Rng& rng, const GnsContext& ctx) {
  const BlockAlgebra& alg = ctx.algebra();
  OppTensor h = OppTensor::zero(alg, alg);
  for (int a = 0; a < ctx.dim(); ++a)
    for (int b = 0; b < ctx.dim(); ++b)
      if (std::abs(ctx.sigma_factor(a, cd(0, -1)) * ctx.sigma_factor(b, cd(0, -1)) - 1.0) < 1e-9)
        h.coef(a, b) = gauss_c(rng);
  h = 0.5 * (h + adjoint(h));
  h = 0.5 * (h + swap(h));
  return h;
}

// Spectral projection of h onto eigenvalues above a cut placed in a gap.
inline OppTensor spectral_projection(const OppTensor& h, const Mat& restrict_to, Rng& rng) {
  const Representation rl = Representation::minimal(h.left), rr = Representation::minimal(h.right);
  Mat x = action(h, rl, rr);
  x = restrict_to * x * restrict_to;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (x + x.adjoint()));
  const auto& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  // the cut stays positive so the kernel of restrict_to is never selected
  std::uniform_real_distribution<double> u(0.02, 0.4);
  double cut = 0.0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    cut = (attempt ? u(rng) : 0.05) * scale;
    bool clear = true;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (std::abs(ev(i) - cut) < 1e-3 * scale) clear = false;
    if (clear) break;
  }
  Mat p = Mat::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return from_action(p, rl, rr);
}

// A random quantum graph. With reflexive = true it contains all loops.
inline AdjacencyOp random_quantum_graph(Rng& rng, const GnsContext& ctx, bool reflexive) {
  const OppTensor h = random_symmetric_tensor(rng, ctx);
  Eigen::Index side = 0;
  for (int d : ctx.algebra().dims()) side += d;
  const Mat id = Mat::Identity(side * side, side * side);
  if (!reflexive) return graph_adjacency(ctx, spectral_projection(h, id, rng));
  const OppTensor e0 = graph_projection(empty_adjacency(ctx));
  const OppTensor e1 = spectral_projection(h, id - action(e0), rng);
  return graph_adjacency(ctx, e1 + e0);
}

// Random projection in B (x) B^op with no symmetry imposed.
inline OppTensor random_projection(Rng& rng, const BlockAlgebra& alg) {
  OppTensor h = OppTensor::zero(alg, alg);
  for (int a = 0; a < alg.dim(); ++a)
    for (int b = 0; b < alg.dim(); ++b) h.coef(a, b) = gauss_c(rng);
  h = 0.5 * (h + adjoint(h));
  const Mat id = Mat::Identity(action(h).rows(), action(h).cols());
  return spectral_projection(h, id, rng);
}

inline std::vector<BlockAlgebra> standard_algebras() {
  return {BlockAlgebra({1, 1, 1}), BlockAlgebra({2}), BlockAlgebra({1, 2}), BlockAlgebra({2, 2})};
}

}  // namespace qgraph::testing

namespace qgraph::testing {

// g p g^{-1}: idempotent, generally not self-adjoint.
inline OppTensor random_idempotent(Rng& rng, const BlockAlgebra& alg) {
  const OppTensor p = random_projection(rng, alg);
  OppTensor g = OppTensor::zero(alg, alg);
  for (int a = 0; a < alg.dim(); ++a)
    for (int b = 0; b < alg.dim(); ++b) g.coef(a, b) = 0.3 * gauss_c(rng);
  g = g + OppTensor::identity(alg, alg);
  const Representation r = Representation::minimal(alg);
  const OppTensor gi = from_action(Mat(action(g).inverse()), r, r);
  return product(product(g, p), gi);
}

// x -> sum_k s_k K_k x K_k^* on the block-diagonal picture, projected back to B.
inline Mat kraus_map_matrix(const GnsContext& src, const BlockAlgebra& tgt, const std::vector<Mat>& ks,
                            const std::vector<double>& signs) {
  const Representation rs = Representation::minimal(src.algebra());
  const Representation rt = Representation::minimal(tgt);
  Mat m(tgt.dim(), src.dim());
  for (int b = 0; b < src.dim(); ++b) {
    Mat x = rs.pi(AlgebraElement::unit(src.algebra(), b));
    Mat y = Mat::Zero(rt.dim(), rt.dim());
    for (std::size_t k = 0; k < ks.size(); ++k) y += signs[k] * ks[k] * x * ks[k].adjoint();
    m.col(b) = rt.project(y).coords(tgt);
  }
  return m;
}

}  // namespace qgraph::testing

namespace qgraph::testing {

// Random unital Kraus family on C^d: the stacked operators form an isometry.
inline std::vector<Mat> random_ucp_kraus(Rng& rng, int d_in, int d_out, int r) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(rng, Eigen::Index(d_out) * r, d_in));
  Mat v = qr.householderQ() * Mat::Identity(Eigen::Index(d_out) * r, d_in);
  std::vector<Mat> ks;
  for (int k = 0; k < r; ++k) ks.push_back(v.block(Eigen::Index(k) * d_out, 0, d_out, d_in));
  return ks;
}

// Orthogonal projector onto span(xs) through an SVD, for cross-checking.
inline Mat svd_projector(const std::vector<Mat>& xs) {
  Mat s(xs.front().size(), Eigen::Index(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) s.col(Eigen::Index(i)) = vec(xs[i]);
  Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-9 * sv(0)) ++rank;
  Mat u = svd.matrixU().leftCols(rank);
  return u * u.adjoint();
}

inline Mat bimodule_projector(const Bimodule& s) {
  Mat u = s.stacked();
  return u * u.adjoint();
}

}  // namespace qgraph::testing

#include "qgraph/symmetry.hpp"

namespace qgraph::testing {

// Contexts with enough symmetry for nontrivial state-preserving automorphisms.
struct SymmetricSetting {
  GnsContext ctx;
  std::vector<std::vector<int>> perms;          // allowed block permutations
  std::vector<std::vector<int>> phase_classes;  // per block: eigenvalue class of each index
};

inline std::vector<SymmetricSetting> symmetric_settings() {
  std::vector<SymmetricSetting> out;
  auto diag_ctx = [](const std::vector<std::vector<double>>& d) {
    std::vector<int> dims;
    AlgebraElement q;
    for (const auto& b : d) {
      dims.push_back(int(b.size()));
      Eigen::VectorXcd v(Eigen::Index(b.size()));
      for (std::size_t i = 0; i < b.size(); ++i) v(Eigen::Index(i)) = b[i];
      q.blocks.push_back(v.asDiagonal());
    }
    return make_context({BlockAlgebra(dims), q}, true);
  };
  out.push_back({diag_ctx({{1.0 / 3}, {1.0 / 3}, {1.0 / 3}}), {{0, 1, 2}, {1, 2, 0}, {1, 0, 2}}, {{0}, {0}, {0}}});
  out.push_back({diag_ctx({{0.3, 0.2}, {0.3, 0.2}}), {{0, 1}, {1, 0}}, {{0, 1}, {0, 1}}});
  out.push_back({diag_ctx({{0.4, 0.4, 0.2}}), {{0}}, {{0, 0, 1}}});
  out.push_back({diag_ctx({{0.2}, {0.5, 0.3}}), {{0, 1}}, {{0}, {0, 1}}});
  return out;
}

// Random automorphism of order dividing 4 preserving psi: unitaries are
// W diag(i^k) W^* inside each eigenspace of Q_k.
inline AutoCandidate random_state_automorphism(Rng& rng, const SymmetricSetting& s) {
  std::uniform_int_distribution<std::size_t> pick(0, s.perms.size() - 1);
  AutoCandidate t;
  t.permutation = s.perms[pick(rng)];
  std::uniform_int_distribution<int> quarter(0, 3);
  // one unitary per block orbit so that theta^4 = id also when blocks move
  std::vector<Mat> base;
  for (const auto& cls : s.phase_classes) {
    const Eigen::Index n = Eigen::Index(cls.size());
    Mat u = Mat::Zero(n, n);
    int maxc = *std::max_element(cls.begin(), cls.end());
    for (int c = 0; c <= maxc; ++c) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index i = 0; i < n; ++i)
        if (cls[std::size_t(i)] == c) idx.push_back(i);
      const Eigen::Index m = Eigen::Index(idx.size());
      Mat w = random_unitary(rng, m);
      Mat d = Mat::Zero(m, m);
      for (Eigen::Index i = 0; i < m; ++i) d(i, i) = std::pow(cd(0, 1), quarter(rng));
      Mat blk = w * d * w.adjoint();
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) u(idx[std::size_t(a)], idx[std::size_t(b)]) = blk(a, b);
    }
    base.push_back(u);
  }
  t.unitaries = base;
  // a moved block gets an identity so the composite keeps finite order
  for (std::size_t k = 0; k < t.permutation.size(); ++k)
    if (t.permutation[k] != int(k)) t.unitaries[k] = Mat::Identity(base[k].rows(), base[k].cols());
  return t;
}

// Quantum graph fixed by theta, from a symmetric tensor averaged over <theta>.
inline AdjacencyOp invariant_quantum_graph(Rng& rng, const GnsContext& ctx, const AutoCandidate& t) {
  OppTensor h = random_symmetric_tensor(rng, ctx);
  const Mat th = theta_matrix(t, ctx.algebra());
  OppTensor acc = OppTensor::zero(ctx.algebra(), ctx.algebra());
  OppTensor cur = h;
  for (int j = 0; j < 12; ++j) {
    acc = acc + cur;
    cur = OppTensor{cur.left, cur.right, th * cur.coef * th.transpose()};
  }
  Eigen::Index side = 0;
  for (int d : ctx.algebra().dims()) side += d;
  const Mat id = Mat::Identity(side * side, side * side);
  return graph_adjacency(ctx, spectral_projection((1.0 / 12) * acc, id, rng));
}

}  // namespace qgraph::testing
