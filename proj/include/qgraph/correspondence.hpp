#pragma once

// The three pictures of a quantum graph over (B, psi): adjacency operators on
// L^2(B), projections e in B (x) B^op, and B'-bimodules S in B(H).

#include <optional>
#include <string>

#include "qgraph/adjacency.hpp"
#include "qgraph/opp_tensor.hpp"

namespace qgraph {

// ---------------------------------------------------------------------------
// Psi_{t,s}(theta_{Lambda a, Lambda b}) = sigma_{it}(a)^* (x) sigma_{is}(b)
// Psi'_{t,s}(theta_{Lambda a, Lambda b}) = sigma_{it}(b) (x) sigma_{is}(a)^*

namespace detail {

// A = sum A(al, be) theta_{f_be, f_al}; Psi_{t,s} sends that rank one to
// w(al, be) e_{be^T} (x) e_al.
inline double psi_weight(const GnsContext& ctx, int al, int be, double t, double s) {
  const auto& ca = ctx.coord(al);
  const auto& cb = ctx.coord(be);
  return std::pow(cb.qi / cb.qj, -t) / std::sqrt(cb.qj) * std::pow(ca.qi / ca.qj, -s) /
         std::sqrt(ca.qj);
}

}  // namespace detail

inline OppTensor psi_map(const AdjacencyOp& a, double t, double s, bool primed = false) {
  check_adjacency(a);
  if (primed) return swap(psi_map(a, s, t, false));
  const GnsContext& ctx = a.ctx;
  const BlockAlgebra& alg = ctx.algebra();
  OppTensor e = OppTensor::zero(alg, alg);
  for (int al = 0; al < ctx.dim(); ++al)
    for (int be = 0; be < ctx.dim(); ++be)
      e.coef(alg.transpose_index(be), al) = a.matrix(al, be) * detail::psi_weight(ctx, al, be, t, s);
  return e;
}

inline AdjacencyOp psi_inverse(const GnsContext& ctx, const OppTensor& e, double t, double s,
                               bool primed = false) {
  require(e.left == ctx.algebra() && e.right == ctx.algebra(), ErrorCode::kContextMismatch,
          "tensor does not live over this context");
  if (primed) return psi_inverse(ctx, swap(e), s, t, false);
  const BlockAlgebra& alg = ctx.algebra();
  Mat a(ctx.dim(), ctx.dim());
  for (int al = 0; al < ctx.dim(); ++al)
    for (int be = 0; be < ctx.dim(); ++be)
      a(al, be) = e.coef(alg.transpose_index(be), al) / detail::psi_weight(ctx, al, be, t, s);
  return {ctx, a};
}

// The correspondence used throughout: e = Psi'_{1/2,0}(A).
inline OppTensor graph_projection(const AdjacencyOp& a) { return psi_map(a, 0.5, 0.0, true); }
inline AdjacencyOp graph_adjacency(const GnsContext& ctx, const OppTensor& e) {
  return psi_inverse(ctx, e, 0.5, 0.0, true);
}

// e commutes with Q (x) Q^{-1}: only e_al (x) e_be with (Q_ii/Q_jj)(Q_kk/Q_ll) = 1.
inline double modular_defect(const GnsContext& ctx, const OppTensor& e) {
  return tensor_norm(sigma_tensor(ctx, e, cd(0, -1), cd(0, -1)) - e);
}

// ---------------------------------------------------------------------------
// Bimodules

struct Bimodule {
  Representation rep;
  std::vector<Mat> basis;  // Hilbert-Schmidt orthonormal

  int dim() const { return int(basis.size()); }
  Mat stacked() const {
    const Eigen::Index n = Eigen::Index(rep.dim()) * rep.dim();
    Mat u(n, Eigen::Index(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) u.col(Eigen::Index(i)) = vec(basis[i]);
    return u;
  }
};

inline Bimodule bimodule_from_stack(const Representation& rep, const Mat& u) {
  Bimodule s{rep, {}};
  for (Eigen::Index i = 0; i < u.cols(); ++i) s.basis.push_back(unvec(u.col(i), rep.dim(), rep.dim()));
  return s;
}

inline Bimodule span_bimodule(const Representation& rep, const std::vector<Mat>& xs,
                              double rank_tol = 1e-8) {
  std::vector<Vec> vs;
  for (const auto& x : xs) {
    require(x.rows() == rep.dim() && x.cols() == rep.dim(), ErrorCode::kSpaceMismatch,
            "operator does not act on the representation space");
    vs.push_back(vec(x));
  }
  if (vs.empty()) return {rep, {}};
  return bimodule_from_stack(rep, orthonormalize(vs, rank_tol));
}

inline double span_residual(const Bimodule& s, const Mat& x) {
  return span_residual(s.stacked(), vec(x));
}

inline bool contains(const Bimodule& s, const Mat& x, double tol = kDefaultTol) {
  return span_residual(s, x) <= tol * s.rep.dim() * std::max(1.0, x.norm());
}

inline double subspace_distance(const Bimodule& a, const Bimodule& b) {
  require(a.rep == b.rep, ErrorCode::kSpaceMismatch, "bimodules over different representations");
  return subspace_distance(a.stacked(), b.stacked());
}

// span{x s y : x, y in B', s in seeds}
inline Bimodule generate_bimodule(const Representation& rep, const std::vector<Mat>& seeds) {
  const auto comm = rep.commutant_basis();
  std::vector<Mat> xs;
  for (const auto& s : seeds)
    for (const auto& x : comm) {
      const Mat xs_ = x * s;
      if (xs_.norm() == 0.0) continue;
      for (const auto& y : comm) xs.push_back(xs_ * y);
    }
  return span_bimodule(rep, xs);
}

inline Bimodule full_bimodule(const Representation& rep) {
  const Eigen::Index n = Eigen::Index(rep.dim()) * rep.dim();
  return bimodule_from_stack(rep, Mat::Identity(n, n));
}

inline Mat pi_q_power(const GnsContext& ctx, const Representation& rep, double p) {
  require(rep.algebra() == ctx.algebra(), ErrorCode::kContextMismatch,
          "representation is not over the context algebra");
  return rep.pi(ctx.q_power(p));
}

// B' Q^{-1/2} B', the bimodule of the empty graph.
inline Bimodule empty_bimodule(const GnsContext& ctx, const Representation& rep) {
  return generate_bimodule(rep, {pi_q_power(ctx, rep, -0.5)});
}

struct BimoduleReport {
  bool bimodule = false;
  bool selfadjoint = false;
  bool unital = false;
  std::optional<bool> contains_qinvhalf;
  std::optional<bool> q_invariant;
  double bimodule_residual = 0.0;
  double selfadjoint_residual = 0.0;
  double unital_residual = 0.0;
  double qinvhalf_residual = 0.0;
  double q_invariant_residual = 0.0;
};

inline BimoduleReport bimodule_check(const Bimodule& s, const GnsContext* ctx = nullptr,
                                     double tol = kDefaultTol) {
  const Representation& rep = s.rep;
  const Mat u = s.stacked();
  const double thr = tol * rep.dim();
  auto rel = [&](const Mat& x) { return span_residual(u, vec(x)) / std::max(1.0, x.norm()); };
  BimoduleReport r;
  const auto comm = rep.commutant_basis();
  for (const auto& b : s.basis)
    for (const auto& x : comm) {
      r.bimodule_residual = std::max(r.bimodule_residual, rel(x * b));
      r.bimodule_residual = std::max(r.bimodule_residual, rel(b * x));
    }
  for (const auto& b : s.basis) r.selfadjoint_residual = std::max(r.selfadjoint_residual, rel(b.adjoint()));
  r.unital_residual = rel(Mat::Identity(rep.dim(), rep.dim()));
  r.bimodule = r.bimodule_residual <= thr;
  r.selfadjoint = r.selfadjoint_residual <= thr;
  r.unital = r.unital_residual <= thr;
  if (ctx) {
    const Mat qh = pi_q_power(*ctx, rep, -0.5);
    const Mat q = pi_q_power(*ctx, rep, 1.0);
    const Mat qi = pi_q_power(*ctx, rep, -1.0);
    r.qinvhalf_residual = rel(qh);
    for (const auto& b : s.basis) r.q_invariant_residual = std::max(r.q_invariant_residual, rel(q * b * qi));
    r.contains_qinvhalf = r.qinvhalf_residual <= thr;
    r.q_invariant = r.q_invariant_residual <= thr;
  }
  return r;
}

// Image of e acting on H (x) conj(H), reshaped through vec(theta_{xi,eta}) = eta (x) conj(xi).
inline Bimodule projection_to_bimodule(const GnsContext& ctx, const OppTensor& e,
                                       const Representation& rep, double tol = kDefaultTol) {
  require(rep.algebra() == ctx.algebra(), ErrorCode::kContextMismatch,
          "representation is not over the context algebra");
  require(is_projection(e, tol), ErrorCode::kNotProjection, "e is not a projection");
  require(modular_defect(ctx, e) <= tol * ctx.dim(), ErrorCode::kNotProjection,
          "e does not commute with Q (x) Q^{-1}");
  const Mat x = action(e, rep, rep);
  std::vector<Vec> cols;
  for (Eigen::Index c = 0; c < x.cols(); ++c) cols.push_back(x.col(c));
  Mat u = orthonormalize(cols, 1e-6);
  return bimodule_from_stack(rep, u);
}

inline OppTensor bimodule_to_projection(const Bimodule& s, double tol = kDefaultTol) {
  const Mat u = s.stacked();
  const Mat p = u * u.adjoint();
  double res = 0.0;
  OppTensor e = from_action(p, s.rep, s.rep, &res);
  require(res <= tol * p.rows(), ErrorCode::kNotBimodule,
          "subspace is not a B'-bimodule (projection residual " + std::to_string(res) + ")");
  return e;
}

inline Bimodule adjacency_to_bimodule(const AdjacencyOp& a, const Representation& rep,
                                      double tol = kDefaultTol) {
  const AxiomReport ax = axiom_report(a, tol);
  require(ax.quantum_graph(), ErrorCode::kAxiomsFail,
          "A fails axiom " + std::string(ax.ax[0] ? "2" : "1"));
  const OppTensor e = graph_projection(a);
  const OppTensor e2 = psi_map(a, 0.0, 0.5, false);
  require(tensor_norm(e - e2) <= tol * a.ctx.dim() * std::max(1.0, tensor_norm(e)),
          ErrorCode::kInconsistentVerdict, "Psi'_{1/2,0}(A) and Psi_{0,1/2}(A) disagree");
  return projection_to_bimodule(a.ctx, e, rep, tol);
}

inline Bimodule adjacency_to_bimodule(const AdjacencyOp& a, double tol = kDefaultTol) {
  return adjacency_to_bimodule(a, Representation::gns(a.ctx.algebra()), tol);
}

inline AdjacencyOp bimodule_to_adjacency(const Bimodule& s, const GnsContext& ctx,
                                         double tol = kDefaultTol) {
  require(s.rep.algebra() == ctx.algebra(), ErrorCode::kContextMismatch,
          "bimodule is not over the context algebra");
  const OppTensor e = bimodule_to_projection(s, tol);
  require(modular_defect(ctx, e) <= tol * ctx.dim(), ErrorCode::kNotBimodule,
          "bimodule is not invariant under conjugation by Q");
  require(tensor_norm(swap(e) - e) <= tol * ctx.dim(), ErrorCode::kAxiomsFail,
          "bimodule is not self-adjoint, so the operator fails axiom 2");
  AdjacencyOp a = graph_adjacency(ctx, e);
  const AxiomReport ax = axiom_report(a, tol);
  require(ax.quantum_graph(), ErrorCode::kAxiomsFail, "recovered operator fails axioms 1-2");
  return a;
}

// ---------------------------------------------------------------------------
// Loops

// u0 = (1 (x) (Q^{-1/2})^T) 1hat and u1 = (Q^{-1/2} (x) 1) 1hat, 1hat = sum e_i (x) conj(e_i).
inline std::pair<Vec, Vec> reflexivity_vectors(const GnsContext& ctx, const Representation& rep) {
  const Mat qh = pi_q_power(ctx, rep, -0.5);
  const Mat id = Mat::Identity(rep.dim(), rep.dim());
  const Vec one = vec(id);
  return {kron(id, qh.transpose()) * one, kron(qh, id) * one};
}

enum class LoopMode { kAllLoops, kNoLoops };

struct LoopReport {
  bool holds = false;
  double residual = 0.0;
};

inline LoopReport loop_check(const GnsContext& ctx, const OppTensor& e, const Representation& rep,
                             LoopMode mode, double tol = kDefaultTol) {
  const auto [u0, u1] = reflexivity_vectors(ctx, rep);
  const Mat x = action(e, rep, rep);
  auto defect = [&](const Vec& u) {
    return (mode == LoopMode::kAllLoops ? Vec(x * u - u) : Vec(x * u)).norm() / u.norm();
  };
  const double r0 = defect(u0), r1 = defect(u1);
  const double thr = tol * rep.dim();
  require((r0 <= thr) == (r1 <= thr), ErrorCode::kInconsistentVerdict,
          "u0 and u1 give different loop verdicts");
  return {r0 <= thr, std::max(r0, r1)};
}

// ---------------------------------------------------------------------------
// Tracial reduction S_0 = Q^{1/2} S

inline Bimodule scale_left(const Bimodule& s, const Mat& x) {
  std::vector<Mat> xs;
  for (const auto& b : s.basis) xs.push_back(x * b);
  return span_bimodule(s.rep, xs);
}

inline Bimodule tracial_reduce(const Bimodule& s, const GnsContext& ctx) {
  return scale_left(s, pi_q_power(ctx, s.rep, 0.5));
}

inline Bimodule tracial_expand(const Bimodule& s0, const GnsContext& ctx) {
  return scale_left(s0, pi_q_power(ctx, s0.rep, -0.5));
}

// ---------------------------------------------------------------------------
// Complements on the bimodule side

inline Bimodule orthogonal_complement(const Bimodule& s) {
  const Eigen::Index n = Eigen::Index(s.rep.dim()) * s.rep.dim();
  return bimodule_from_stack(s.rep, orthogonal_complement(s.stacked(), n));
}

inline Bimodule bimodule_complement(const Bimodule& s, const GnsContext& ctx, ComplementMode mode) {
  const Bimodule perp = orthogonal_complement(s);
  if (mode == ComplementMode::kCo) return perp;
  const Bimodule empty = empty_bimodule(ctx, s.rep);
  if (mode == ComplementMode::kComplement)
    return bimodule_from_stack(s.rep, span_sum(perp.stacked(), empty.stacked()));
  return bimodule_from_stack(s.rep, span_intersection(perp.stacked(), orthogonal_complement(empty).stacked()));
}

// ---------------------------------------------------------------------------
// Quantum graphs over (M_2, psi_q)

struct ClassifiedGraph {
  std::string name;
  Bimodule S;
};

struct M2Classification {
  GnsContext ctx;
  std::vector<ClassifiedGraph> graphs;
  bool continuum = false;  // q = 1: the lattice below only gives representatives
};

inline M2Classification classify_m2(double q, double tol = kDefaultTol) {
  require(q > 0.0 && std::isfinite(q), ErrorCode::kBadQ, "q must be positive");
  M2Classification out;
  out.ctx = powers_context(q);
  out.continuum = std::abs(q - 1.0) <= tol;
  const Representation rep = Representation::minimal(out.ctx.algebra());
  const Mat qh = pi_q_power(out.ctx, rep, -0.5);
  auto unit = [](int i, int j) {
    Mat x = Mat::Zero(2, 2);
    x(i, j) = 1.0;
    return x;
  };
  // Eigenspaces of X -> Q X Q^{-1}: the diagonal, C e12 and C e21. For q = 1
  // they merge and this split is one representative of the continuum.
  const std::vector<std::vector<Mat>> diag_options = {{}, {qh}, {unit(0, 0), unit(1, 1)}};
  for (int d = 0; d < 3; ++d)
    for (int o = 0; o < 4; ++o) {
      std::vector<Mat> gens = diag_options[std::size_t(d)];
      if (o & 1) gens.push_back(unit(0, 1));
      if (o & 2) gens.push_back(unit(1, 0));
      if (gens.empty()) continue;
      Bimodule s = span_bimodule(rep, gens);
      const BimoduleReport r = bimodule_check(s, &out.ctx, tol);
      if (!(r.bimodule && r.selfadjoint && *r.contains_qinvhalf && *r.q_invariant)) continue;
      bool dup = false;
      for (const auto& g : out.graphs)
        if (subspace_distance(g.S, s) <= 1e-8) dup = true;
      if (dup) continue;
      std::string name = d == 1 ? (o ? "S2A" : "S1") : (o ? "S3" : "S2B");
      out.graphs.push_back({name, std::move(s)});
    }
  std::stable_sort(out.graphs.begin(), out.graphs.end(),
                   [](const auto& a, const auto& b) { return a.S.dim() < b.S.dim(); });
  return out;
}

}  // namespace qgraph
