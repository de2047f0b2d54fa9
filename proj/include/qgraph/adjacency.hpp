#pragma once

// Quantum adjacency operators A on L^2(B, psi), the seven axioms, the
// standard graphs and the classical dictionary.

#include <array>
#include <utility>
#include <vector>

#include "qgraph/algebra.hpp"

namespace qgraph {

struct AdjacencyOp {
  GnsContext ctx;
  Mat matrix;
};

struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;  // (u, v) means A_{u,v} = 1
};

struct AxiomReport {
  std::array<bool, 7> ax{};
  std::array<double, 7> residuals{};
  double threshold = 0.0;
  bool selfadjoint = false;
  double selfadjoint_residual = 0.0;
  bool real = false;
  double real_residual = 0.0;

  bool quantum_graph() const { return ax[0] && ax[1]; }
  bool all(std::initializer_list<int> which) const {
    for (int i : which)
      if (!ax[std::size_t(i - 1)]) return false;
    return true;
  }
};

enum class ComplementMode { kCo, kComplement, kNComplement };

inline void check_adjacency(const AdjacencyOp& a) {
  require(a.ctx.valid(), ErrorCode::kBadShape, "adjacency without context");
  require(a.matrix.rows() == a.ctx.dim() && a.matrix.cols() == a.ctx.dim(), ErrorCode::kBadShape,
          "adjacency matrix must be dim x dim");
}

inline void check_same_context(const GnsContext& a, const GnsContext& b) {
  require(a.same_as(b), ErrorCode::kContextMismatch, "operators live over different contexts");
}

// m (X (x) Y) m^* using the sparse structure of m.
inline Mat m_sandwich(const GnsContext& ctx, const Mat& x, const Mat& y) {
  const int n = ctx.dim();
  std::vector<std::vector<detail::MulEntry>> by_out(static_cast<std::size_t>(n));
  for (const auto& e : ctx.mul_entries()) by_out[std::size_t(e.out)].push_back(e);
  Mat out = Mat::Zero(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cd s = 0.0;
      for (const auto& p : by_out[std::size_t(r)])
        for (const auto& q : by_out[std::size_t(c)])
          s += p.value * q.value * x(p.left, q.left) * y(p.right, q.right);
      out(r, c) = s;
    }
  return out;
}

inline AdjacencyOp schur(const AdjacencyOp& a1, const AdjacencyOp& a2) {
  check_adjacency(a1);
  check_adjacency(a2);
  check_same_context(a1.ctx, a2.ctx);
  return {a1.ctx, m_sandwich(a1.ctx, a1.matrix, a2.matrix)};
}

namespace detail {

// W = m^* eta and R = eta^* m, both reshaped to dim x dim.
inline std::pair<Mat, Mat> eta_legs(const GnsContext& ctx) {
  const int n = ctx.dim();
  const Vec eta = ctx.eta();
  Mat w = Mat::Zero(n, n), r = Mat::Zero(n, n);
  for (const auto& e : ctx.mul_entries()) {
    w(e.left, e.right) += e.value * eta(e.out);
    r(e.left, e.right) += e.value * std::conj(eta(e.out));
  }
  return {w, r};
}

}  // namespace detail

// (1 (x) eta^* m)(1 (x) A (x) 1)(m^* eta (x) 1)
inline Mat axiom2_operator(const AdjacencyOp& a) {
  auto [w, r] = detail::eta_legs(a.ctx);
  return w * a.matrix.transpose() * r;
}

// (eta^* m (x) 1)(1 (x) A (x) 1)(1 (x) m^* eta)
inline Mat axiom4_operator(const AdjacencyOp& a) {
  auto [w, r] = detail::eta_legs(a.ctx);
  return (r * a.matrix * w).transpose();
}

// A^r = s A s with s = nabla^{-1/2} J antilinear, s Lambda(a) = Lambda(a^*).
inline Mat real_conjugate(const AdjacencyOp& a) {
  const Mat s = a.ctx.nabla(-0.5) * a.ctx.j_permutation();
  return s * a.matrix.conjugate() * s;
}

inline AxiomReport axiom_report(const AdjacencyOp& a, double tol = kDefaultTol) {
  check_adjacency(a);
  const auto& ctx = a.ctx;
  const int n = ctx.dim();
  const Mat id = Mat::Identity(n, n);
  const Mat& A = a.matrix;
  const Mat left = m_sandwich(ctx, A, id);
  const Mat right = m_sandwich(ctx, id, A);
  AxiomReport rep;
  rep.threshold = tol * n;
  rep.residuals[0] = op_norm(m_sandwich(ctx, A, A) - A);
  rep.residuals[1] = op_norm(axiom2_operator(a) - A);
  rep.residuals[2] = op_norm(left - id);
  rep.residuals[3] = op_norm(axiom4_operator(a) - A);
  rep.residuals[4] = op_norm(right - id);
  rep.residuals[5] = op_norm(left);
  rep.residuals[6] = op_norm(right);
  for (std::size_t i = 0; i < 7; ++i) rep.ax[i] = rep.residuals[i] <= rep.threshold;
  rep.selfadjoint_residual = op_norm(A - A.adjoint());
  rep.selfadjoint = rep.selfadjoint_residual <= rep.threshold;
  rep.real_residual = op_norm(real_conjugate(a) - A);
  rep.real = rep.real_residual <= rep.threshold;
  return rep;
}

// theta_{Lambda 1, Lambda 1} = eta eta^*
inline AdjacencyOp complete_adjacency(const GnsContext& ctx) {
  const Vec eta = ctx.eta();
  return {ctx, eta * eta.adjoint()};
}

// (m m^*)^{-1}
inline AdjacencyOp empty_adjacency(const GnsContext& ctx) {
  return {ctx, ctx.mm_star().diagonal().cwiseInverse().asDiagonal()};
}

inline AdjacencyOp complement(const AdjacencyOp& a, ComplementMode mode) {
  check_adjacency(a);
  const Mat full = complete_adjacency(a.ctx).matrix;
  const Mat loops = empty_adjacency(a.ctx).matrix;
  switch (mode) {
    case ComplementMode::kCo: return {a.ctx, full - a.matrix};
    case ComplementMode::kComplement: return {a.ctx, full + loops - a.matrix};
    case ComplementMode::kNComplement: return {a.ctx, full - loops - a.matrix};
  }
  return a;
}

inline AdjacencyOp deloop(const AdjacencyOp& a) {
  return {a.ctx, a.matrix - empty_adjacency(a.ctx).matrix};
}

inline AdjacencyOp add_loops(const AdjacencyOp& a) {
  return {a.ctx, a.matrix + empty_adjacency(a.ctx).matrix};
}

inline bool is_counting_context(const GnsContext& ctx) {
  if (!ctx.algebra().is_commutative()) return false;
  for (const auto& d : ctx.q_diagonal())
    if (d.front() != 1.0) return false;
  return true;
}

inline AdjacencyOp from_classical(const Graph& g) {
  require(g.vertices > 0, ErrorCode::kBadShape, "graph needs at least one vertex");
  GnsContext ctx = counting_context(g.vertices);
  Mat a = Mat::Zero(g.vertices, g.vertices);
  for (auto [u, v] : g.edges) {
    require(u >= 0 && v >= 0 && u < g.vertices && v < g.vertices, ErrorCode::kBadShape,
            "edge endpoint out of range");
    a(u, v) = 1.0;
  }
  return {ctx, a};
}

inline Graph to_classical(const AdjacencyOp& a, double tol = kDefaultTol) {
  check_adjacency(a);
  require(is_counting_context(a.ctx), ErrorCode::kNotClassicalContext,
          "context is not C(V) with the counting measure");
  Graph g;
  g.vertices = a.ctx.dim();
  for (int u = 0; u < g.vertices; ++u)
    for (int v = 0; v < g.vertices; ++v) {
      const cd x = a.matrix(u, v);
      if (std::abs(x) <= tol) continue;
      require(std::abs(x - 1.0) <= tol, ErrorCode::kNotZeroOne,
              "entry (" + std::to_string(u) + "," + std::to_string(v) + ") is not 0 or 1");
      g.edges.emplace_back(u, v);
    }
  return g;
}

// A commutes with nabla and with J (J antilinear: AJ = JA iff A K = K conj(A)).
inline double nabla_commutator(const AdjacencyOp& a) {
  const Mat d = a.ctx.nabla();
  return op_norm(a.matrix * d - d * a.matrix);
}

inline double j_commutator(const AdjacencyOp& a) {
  const Mat k = a.ctx.j_permutation();
  return op_norm(a.matrix * k - k * a.matrix.conjugate());
}

}  // namespace qgraph
