#pragma once

// Completely positive maps theta : C -> B between represented algebras, in
// Kraus form theta(c) = sum_k E_k^* pi_C(c) E_k with E_k : H_B -> H_C, and
// how they move quantum graphs around.

#include "qgraph/correspondence.hpp"

namespace qgraph {

struct KrausMap {
  Representation source;  // C on H_C
  Representation target;  // B on H_B
  std::vector<Mat> kraus;
};

inline Mat kraus_apply(const KrausMap& t, const Mat& x) {
  Mat y = Mat::Zero(t.target.dim(), t.target.dim());
  for (const auto& e : t.kraus) y += e.adjoint() * x * e;
  return y;
}

// Largest distance from pi_B(B) over the images of the matrix units of C.
inline double range_residual(const KrausMap& t) {
  double worst = 0.0;
  for (int al = 0; al < t.source.algebra().dim(); ++al) {
    double r = 0.0;
    t.target.project(kraus_apply(t, t.source.pi(AlgebraElement::unit(t.source.algebra(), al))), &r);
    worst = std::max(worst, r);
  }
  return worst;
}

inline void validate(const KrausMap& t, double tol = kDefaultTol) {
  require(!t.kraus.empty(), ErrorCode::kBadShape, "at least one Kraus operator required");
  for (const auto& e : t.kraus)
    require(e.rows() == t.source.dim() && e.cols() == t.target.dim(), ErrorCode::kBadShape,
            "Kraus operators must map H_B to H_C");
  require(range_residual(t) <= tol * t.target.dim(), ErrorCode::kRangeViolation,
          "map does not land in pi(B)");
}

inline double unital_defect(const KrausMap& t) {
  Mat s = Mat::Zero(t.target.dim(), t.target.dim());
  for (const auto& e : t.kraus) s += e.adjoint() * e;
  return op_norm(s - Mat::Identity(t.target.dim(), t.target.dim()));
}

// With both functionals the restriction of Tr, theta-hat is unital exactly
// when theta preserves the trace.
inline double trace_preserving_defect(const KrausMap& t) {
  Mat s = Mat::Zero(t.source.dim(), t.source.dim());
  for (const auto& e : t.kraus) s += e * e.adjoint();
  return op_norm(s - Mat::Identity(t.source.dim(), t.source.dim()));
}

inline bool is_unital(const KrausMap& t, double tol = kDefaultTol) {
  return unital_defect(t) <= tol * t.target.dim();
}

inline AlgebraElement apply(const KrausMap& t, const AlgebraElement& c) {
  return t.target.project(kraus_apply(t, t.source.pi(c)));
}

struct Dilation {
  Mat V;  // H_B -> H_C (x) C^r, index p * r + k
  int environment = 0;
};

inline Dilation stinespring(const KrausMap& t, double tol = kDefaultTol) {
  validate(t, tol);
  require(is_unital(t, tol), ErrorCode::kNotUnital, "Stinespring isometry needs a unital map");
  const int r = int(t.kraus.size());
  Dilation d{Mat::Zero(Eigen::Index(t.source.dim()) * r, t.target.dim()), r};
  for (int k = 0; k < r; ++k)
    for (int p = 0; p < t.source.dim(); ++p) d.V.row(Eigen::Index(p) * r + k) = t.kraus[std::size_t(k)].row(p);
  return d;
}

inline Bimodule sandwich_span(const std::vector<Mat>& left, const std::vector<Mat>& mids,
                              const std::vector<Mat>& right, const Representation& rep) {
  std::vector<Mat> xs;
  for (const auto& l : left)
    for (const auto& m : mids) {
      const Mat lm = l * m;
      for (const auto& r : right) xs.push_back(lm * r);
    }
  return span_bimodule(rep, xs);
}

inline std::vector<Mat> adjoints(const std::vector<Mat>& xs) {
  std::vector<Mat> out;
  for (const auto& x : xs) out.push_back(x.adjoint());
  return out;
}

enum class Unitality { kRequire, kAllowNonUnital };

// span{E_i^* x E_j : x in S}, S a quantum graph over C on H_C.
inline Bimodule pullback(const KrausMap& t, const Bimodule& s, Unitality u = Unitality::kRequire,
                         double tol = kDefaultTol) {
  validate(t, tol);
  if (u == Unitality::kRequire) require(is_unital(t, tol), ErrorCode::kNotUnital, "pullback needs a unital map");
  require(s.rep == t.source, ErrorCode::kSpaceMismatch, "graph does not live on the source space");
  return sandwich_span(adjoints(t.kraus), s.basis, t.kraus, t.target);
}

// The quantum confusability graph: the pullback of the trivial graph C'.
inline Bimodule confusability(const KrausMap& t, double tol = kDefaultTol) {
  validate(t, tol);
  require(is_unital(t, tol), ErrorCode::kNotUnital, "confusability graph needs a unital map");
  return sandwich_span(adjoints(t.kraus), t.source.commutant_basis(), t.kraus, t.target);
}

// Same graph through the dilation: V^* (C' (x) M_r) V.
inline Bimodule confusability_from_dilation(const KrausMap& t, const Dilation& d) {
  const int r = d.environment;
  std::vector<Mat> mids;
  for (const auto& x : t.source.commutant_basis())
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        Mat eab = Mat::Zero(r, r);
        eab(a, b) = 1.0;
        mids.push_back(kron(x, eab));
      }
  return sandwich_span({d.V.adjoint()}, mids, {d.V}, t.target);
}

// span{E_i x E_j^* : x in S}, S a quantum graph over B on H_B.
inline Bimodule pushforward(const KrausMap& t, const Bimodule& s, double tol = kDefaultTol) {
  validate(t, tol);
  require(s.rep == t.target, ErrorCode::kSpaceMismatch, "graph does not live on the target space");
  return sandwich_span(t.kraus, s.basis, adjoints(t.kraus), t.source);
}

inline bool is_trace_restriction(const GnsContext& ctx, const Representation& rep, double tol = kDefaultTol) {
  if (!(ctx.algebra() == rep.algebra())) return false;
  for (int k = 0; k < rep.algebra().num_blocks(); ++k)
    for (double q : ctx.q_diagonal()[std::size_t(k)])
      if (std::abs(q - rep.multiplicity(k)) > tol * rep.multiplicity(k)) return false;
  return true;
}

inline GnsContext trace_restriction(const Representation& rep) {
  AlgebraElement q = AlgebraElement::identity(rep.algebra());
  for (int k = 0; k < rep.algebra().num_blocks(); ++k) q.blocks[std::size_t(k)] *= double(rep.multiplicity(k));
  return make_context({rep.algebra(), q}, false);
}

// psi_B(a theta(b)) - psi_C(theta-hat(a) b) with psi = Tr on both spaces.
inline double duality_residual(const KrausMap& t, const KrausMap& hat, const AlgebraElement& a,
                               const AlgebraElement& b) {
  const Mat lhs = t.target.pi(a) * kraus_apply(t, t.source.pi(b));
  const Mat rhs = kraus_apply(hat, t.target.pi(a)) * t.source.pi(b);
  return std::abs(lhs.trace() - rhs.trace());
}

// theta-hat(a) = sum_k E_k a E_k^*, the adjoint for psi_1 = Tr|_B, psi_2 = Tr|_C.
inline KrausMap cp_adjoint(const KrausMap& t, const GnsContext& psi_c, const GnsContext& psi_b,
                           double tol = kDefaultTol) {
  validate(t, tol);
  require(is_trace_restriction(psi_c, t.source, tol) && is_trace_restriction(psi_b, t.target, tol),
          ErrorCode::kNotTraceRestriction, "functionals must be restrictions of the trace");
  KrausMap hat{t.target, t.source, adjoints(t.kraus)};
  require(range_residual(hat) <= tol * hat.target.dim(), ErrorCode::kRangeViolation,
          "the Kraus form of the adjoint leaves pi(C)");
  double worst = 0.0;
  const BlockAlgebra& bb = t.target.algebra();
  const BlockAlgebra& cc = t.source.algebra();
  for (int a = 0; a < bb.dim(); ++a)
    for (int b = 0; b < cc.dim(); ++b)
      worst = std::max(worst, duality_residual(t, hat, AlgebraElement::unit(bb, a), AlgebraElement::unit(cc, b)));
  require(worst <= tol * std::max(t.source.dim(), t.target.dim()), ErrorCode::kRangeViolation,
          "duality identity fails for the adjoint");
  return hat;
}

inline KrausMap cp_adjoint(const KrausMap& t, double tol = kDefaultTol) {
  return cp_adjoint(t, trace_restriction(t.source), trace_restriction(t.target), tol);
}

struct MorphismReport {
  bool morphism = false;
  double residual = 0.0;
};

// theta is a CP morphism S1 -> S2 when its pushforward of S1 sits inside S2.
inline MorphismReport is_cp_morphism(const KrausMap& t, const Bimodule& s1, const Bimodule& s2,
                                     double tol = kDefaultTol) {
  require(s2.rep == t.source, ErrorCode::kSpaceMismatch, "S2 does not live on the source space");
  const Bimodule push = pushforward(t, s1, tol);
  const Mat u = s2.stacked();
  MorphismReport r;
  for (const auto& b : push.basis) r.residual = std::max(r.residual, span_residual(u, vec(b)));
  r.morphism = r.residual <= tol * t.source.dim();
  return r;
}

// ---------------------------------------------------------------------------
// Classical channels. p(x, y) = p(y|x), rows indexed by inputs.

inline KrausMap classical_channel(const RMat& p, double tol = kDefaultTol) {
  require(p.rows() > 0 && p.cols() > 0, ErrorCode::kBadShape, "empty stochastic table");
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    require(p.row(x).minCoeff() >= -tol, ErrorCode::kNotStochastic, "negative transition probability");
    require(std::abs(p.row(x).sum() - 1.0) <= tol * p.cols(), ErrorCode::kNotStochastic,
            "row " + std::to_string(x) + " does not sum to 1");
  }
  const int nx = int(p.rows()), ny = int(p.cols());
  KrausMap t{Representation::minimal(BlockAlgebra(std::vector<int>(std::size_t(ny), 1))),
             Representation::minimal(BlockAlgebra(std::vector<int>(std::size_t(nx), 1))),
             {}};
  // E_x e_x = sum_y sqrt(p(y|x)) e_y
  for (int x = 0; x < nx; ++x) {
    Mat e = Mat::Zero(ny, nx);
    for (int y = 0; y < ny; ++y) e(y, x) = std::sqrt(std::max(0.0, p(x, y)));
    t.kraus.push_back(std::move(e));
  }
  return t;
}

// theta(a) = a o f for a vertex map f : V(G) -> V(H).
inline KrausMap classical_homomorphism(const std::vector<int>& f, int target_vertices) {
  RMat p = RMat::Zero(Eigen::Index(f.size()), target_vertices);
  for (std::size_t u = 0; u < f.size(); ++u) {
    require(f[u] >= 0 && f[u] < target_vertices, ErrorCode::kBadShape, "vertex map out of range");
    p(Eigen::Index(u), f[u]) = 1.0;
  }
  return classical_channel(p);
}

// a -> p a p for the central projection onto the chosen blocks.
inline KrausMap restriction_channel(const Representation& rep, const std::vector<int>& blocks) {
  std::vector<int> dims, mult;
  std::vector<int> rows;
  for (int k : blocks) {
    require(k >= 0 && k < rep.algebra().num_blocks(), ErrorCode::kBadShape, "block index out of range");
    dims.push_back(rep.algebra().block_dim(k));
    mult.push_back(rep.multiplicity(k));
    for (int i = 0; i < rep.algebra().block_dim(k) * rep.multiplicity(k); ++i) rows.push_back(rep.offset(k) + i);
  }
  Representation sub(BlockAlgebra(dims), mult);
  Mat e = Mat::Zero(rep.dim(), sub.dim());
  for (std::size_t c = 0; c < rows.size(); ++c) e(rows[c], Eigen::Index(c)) = 1.0;
  return {rep, sub, {e}};
}

// Edges (u, v) with e_uv in S, for S over C^n on C^n.
inline Graph bimodule_to_graph(const Bimodule& s, double tol = kDefaultTol) {
  require(s.rep.algebra().is_commutative() && s.rep.dim() == s.rep.algebra().num_blocks(),
          ErrorCode::kNotClassicalContext, "bimodule is not over C^n acting on C^n");
  const int n = s.rep.dim();
  const Mat u = s.stacked();
  Graph g{n, {}};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Mat x = Mat::Zero(n, n);
      x(a, b) = 1.0;
      if (span_residual(u, vec(x)) <= tol * n) g.edges.emplace_back(a, b);
    }
  return g;
}

inline Bimodule graph_to_bimodule(const Graph& g) {
  const Representation rep = Representation::minimal(BlockAlgebra(std::vector<int>(std::size_t(g.vertices), 1)));
  std::vector<Mat> xs;
  for (auto [a, b] : g.edges) {
    Mat x = Mat::Zero(g.vertices, g.vertices);
    x(a, b) = 1.0;
    xs.push_back(x);
  }
  return span_bimodule(rep, xs);
}

}  // namespace qgraph
