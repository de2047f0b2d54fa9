#include <gtest/gtest.h>

#include "qgraph/correspondence.hpp"
#include "support/generators.hpp"

namespace qgraph {
namespace {

using testing::random_context;
using testing::random_element;
using testing::random_matrix;
using testing::random_quantum_graph;
using testing::Rng;

double dist(const OppTensor& a, const OppTensor& b) { return tensor_norm(a - b); }

// Psi_{t,s} of the rank one theta_{Lambda a, Lambda b} = Lambda(b) Lambda(a)^*.
OppTensor psi_rank_one(const GnsContext& ctx, const AlgebraElement& a, const AlgebraElement& b,
                       double t, double s) {
  return OppTensor::elementary(ctx.sigma(a, cd(0, t)).adjoint(), ctx.sigma(b, cd(0, s)),
                               ctx.algebra(), ctx.algebra());
}

class CorrespondenceTest : public ::testing::TestWithParam<std::vector<int>> {
 protected:
  Rng rng{11};
  const std::vector<std::pair<double, double>> ts{{0.0, 0.5}, {0.5, 0.0}, {0.3, -0.8}, {1.0, 0.0}};
};

TEST_P(CorrespondenceTest, PsiOnRankOnes) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  const auto& alg = ctx.algebra();
  AlgebraElement a = random_element(rng, alg), b = random_element(rng, alg);
  AdjacencyOp th{ctx, ctx.lambda(b) * ctx.lambda(a).adjoint()};
  for (auto [t, s] : ts) {
    EXPECT_LT(dist(psi_map(th, t, s), psi_rank_one(ctx, a, b, t, s)), 1e-9);
    // Psi'_{t,s}: theta -> sigma_{it}(b) (x) sigma_{is}(a)^*
    OppTensor primed = OppTensor::elementary(ctx.sigma(b, cd(0, t)), ctx.sigma(a, cd(0, s)).adjoint(), alg, alg);
    EXPECT_LT(dist(psi_map(th, t, s, true), primed), 1e-9);
    EXPECT_LT((psi_inverse(ctx, psi_map(th, t, s), t, s).matrix - th.matrix).norm(), 1e-9);
  }
}

TEST_P(CorrespondenceTest, PsiIntertwinesAdjointAndUndirectedOperators) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  AdjacencyOp a{ctx, random_matrix(rng, ctx.dim(), ctx.dim())};
  AdjacencyOp astar{ctx, a.matrix.adjoint()};
  AdjacencyOp a2{ctx, axiom2_operator(a)}, a4{ctx, axiom4_operator(a)};
  const cd i(0, 1);
  for (auto [t, s] : ts) {
    const OppTensor e = psi_map(a, t, s);
    EXPECT_LT(dist(psi_map(astar, t, s), sigma_tensor(ctx, swap(adjoint(e)), i * (s - t), i * (s - t))), 1e-8);
    EXPECT_LT(dist(psi_map(a2, t, s), sigma_tensor(ctx, swap(e), -i * (s + t), i * (t + s - 1))), 1e-8);
    EXPECT_LT(dist(psi_map(a4, t, s), sigma_tensor(ctx, swap(e), i * (1 - t - s), i * (s + t))), 1e-8);
    const OppTensor f = psi_map(a, t, s, true);
    EXPECT_LT(dist(psi_map(astar, t, s, true), sigma_tensor(ctx, swap(adjoint(f)), i * (t - s), i * (t - s))), 1e-8);
    EXPECT_LT(dist(psi_map(a2, t, s, true), sigma_tensor(ctx, swap(f), i * (s + t - 1), -i * (s + t))), 1e-8);
    EXPECT_LT(dist(psi_map(a4, t, s, true), sigma_tensor(ctx, swap(f), i * (t + s), i * (1 - s - t))), 1e-8);
    // real conjugate
    AdjacencyOp ar{ctx, real_conjugate(a)};
    EXPECT_LT(dist(psi_map(ar, t, s), sigma_tensor(ctx, adjoint(e), i - 2.0 * i * t, 2.0 * i * s)), 1e-8);
    EXPECT_LT(dist(psi_map(ar, t, s, true), sigma_tensor(ctx, adjoint(f), 2.0 * i * t, i - 2.0 * i * s)), 1e-8);
  }
}

TEST_P(CorrespondenceTest, SchurProductBecomesProduct) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  AdjacencyOp a1{ctx, random_matrix(rng, ctx.dim(), ctx.dim())};
  AdjacencyOp a2{ctx, random_matrix(rng, ctx.dim(), ctx.dim())};
  const AdjacencyOp p = schur(a1, a2);
  EXPECT_LT(dist(psi_map(p, 0.0, 0.5), product(psi_map(a2, 0.0, 0.5), psi_map(a1, 0.0, 0.5))), 1e-8);
  EXPECT_LT(dist(psi_map(p, 0.5, 0.0, true),
                 product(psi_map(a1, 0.5, 0.0, true), psi_map(a2, 0.5, 0.0, true))), 1e-8);
}

TEST_P(CorrespondenceTest, QuantumGraphsGiveSymmetricProjections) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  for (int trial = 0; trial < 4; ++trial) {
    AdjacencyOp a = random_quantum_graph(rng, ctx, trial % 2 == 0);
    const OppTensor e = graph_projection(a);
    EXPECT_TRUE(is_projection(e));
    EXPECT_LT(dist(e, swap(e)), 1e-9);
    EXPECT_LT(dist(e, psi_map(a, 0.0, 0.5)), 1e-9);
    EXPECT_LT(modular_defect(ctx, e), 1e-9);
    // commutes with Q (x) (Q^{-1})^T on H (x) conj(H)
    const Representation rep = Representation::minimal(ctx.algebra());
    const Mat q = rep.pi(ctx.q_power(1.0)), qi = rep.pi(ctx.q_power(-1.0));
    const Mat x = action(e), g = kron(q, qi.transpose());
    EXPECT_LT((x * g - g * x).norm(), 1e-9);
  }
}

TEST_P(CorrespondenceTest, ThreePictureRoundTrip) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  for (const auto& rep : {Representation::gns(ctx.algebra()), Representation::minimal(ctx.algebra())}) {
    AdjacencyOp a = random_quantum_graph(rng, ctx, true);
    Bimodule s = adjacency_to_bimodule(a, rep);
    BimoduleReport r = bimodule_check(s, &ctx);
    EXPECT_TRUE(r.bimodule && r.selfadjoint && *r.q_invariant && *r.contains_qinvhalf);
    AdjacencyOp back = bimodule_to_adjacency(s, ctx);
    EXPECT_LT((back.matrix - a.matrix).norm(), 1e-8);
    EXPECT_LT(dist(bimodule_to_projection(s), graph_projection(a)), 1e-8);
  }
}

TEST_P(CorrespondenceTest, LoopsAndAxiomThree) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  const Representation rep = Representation::gns(ctx.algebra());
  AdjacencyOp a = random_quantum_graph(rng, ctx, true);
  const OppTensor e = graph_projection(a);
  EXPECT_TRUE(loop_check(ctx, e, rep, LoopMode::kAllLoops).holds);
  const AlgebraElement one = multiply_legs(sigma_tensor(ctx, e, cd(0, -0.5), 0.0));
  EXPECT_LT((block_diag(one) - block_diag(AlgebraElement::identity(ctx.algebra()))).norm(), 1e-9);
  const OppTensor e0 = graph_projection(deloop(a));
  EXPECT_TRUE(loop_check(ctx, e0, rep, LoopMode::kNoLoops).holds);
  EXPECT_FALSE(loop_check(ctx, e0, rep, LoopMode::kAllLoops).holds);
  const auto [u0, u1] = reflexivity_vectors(ctx, rep);
  EXPECT_LT((u0 - vec(rep.pi(ctx.q_power(-0.5)))).norm(), 1e-12);
  EXPECT_LT((u1 - u0).norm(), 1e-12);
}

TEST_P(CorrespondenceTest, MeaningOfAxiomThreeOnRankOnes) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  const auto& alg = ctx.algebra();
  AlgebraElement a = random_element(rng, alg), b = random_element(rng, alg);
  AdjacencyOp th{ctx, ctx.lambda(b) * ctx.lambda(a).adjoint()};
  const Mat id = Mat::Identity(ctx.dim(), ctx.dim());
  auto left_mult = [&](const AlgebraElement& x) {
    Mat l(ctx.dim(), ctx.dim());
    for (int c = 0; c < ctx.dim(); ++c) l.col(c) = ctx.lambda(x * ctx.lambda_inverse(Vec::Unit(ctx.dim(), c)));
    return l;
  };
  auto right_mult = [&](const AlgebraElement& x) {
    Mat r(ctx.dim(), ctx.dim());
    for (int c = 0; c < ctx.dim(); ++c) r.col(c) = ctx.lambda(ctx.lambda_inverse(Vec::Unit(ctx.dim(), c)) * x);
    return r;
  };
  EXPECT_LT((m_sandwich(ctx, th.matrix, id) - left_mult(b * a.adjoint())).norm(), 1e-9);
  EXPECT_LT((m_sandwich(ctx, id, th.matrix) - right_mult(ctx.sigma(a, cd(0, 1)).adjoint() * b)).norm(), 1e-9);
}

TEST_P(CorrespondenceTest, BimoduleGeneratedByAdjacency) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  const Representation rep = Representation::gns(ctx.algebra());
  AdjacencyOp a = random_quantum_graph(rng, ctx, false);
  const Bimodule s = adjacency_to_bimodule(a, rep);
  const Mat na = ctx.nabla(-0.5) * a.matrix;
  const Bimodule g = generate_bimodule(rep, {na});
  EXPECT_LT(subspace_distance(s, g), 1e-8);
  // vec(nabla^{-1/2} A) = e (Lambda (x) Lambda^op)(1) = e vec(eta eta^*)
  const Vec eta = ctx.eta();
  const Vec rhs = action(graph_projection(a), rep, rep) * vec(eta * eta.adjoint());
  EXPECT_LT((vec(na) - rhs).norm(), 1e-9);
  EXPECT_LT(subspace_distance(tracial_reduce(s, ctx), generate_bimodule(rep, {a.matrix})), 1e-8);
  EXPECT_LT(subspace_distance(tracial_expand(tracial_reduce(s, ctx), ctx), s), 1e-8);
}

TEST_P(CorrespondenceTest, StandardBimodules) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  for (const auto& rep : {Representation::gns(ctx.algebra()), Representation::minimal(ctx.algebra()),
                          Representation(ctx.algebra(), std::vector<int>(ctx.algebra().dims().size(), 2))}) {
    Bimodule empty = adjacency_to_bimodule(empty_adjacency(ctx), rep);
    EXPECT_LT(subspace_distance(empty, empty_bimodule(ctx, rep)), 1e-8);
    Bimodule full = adjacency_to_bimodule(complete_adjacency(ctx), rep);
    EXPECT_EQ(full.dim(), rep.dim() * rep.dim());
    EXPECT_LT(subspace_distance(tracial_reduce(empty, ctx), generate_bimodule(rep, {Mat::Identity(rep.dim(), rep.dim())})), 1e-8);
  }
}

TEST_P(CorrespondenceTest, ComplementsAgreeAcrossPictures) {
  GnsContext ctx = random_context(rng, BlockAlgebra(GetParam()));
  const Representation rep = Representation::gns(ctx.algebra());
  AdjacencyOp a = random_quantum_graph(rng, ctx, true);
  const Bimodule s = adjacency_to_bimodule(a, rep);
  auto via_a = [&](const AdjacencyOp& x) { return adjacency_to_bimodule(x, rep); };
  EXPECT_LT(subspace_distance(via_a(complement(a, ComplementMode::kComplement)),
                              bimodule_complement(s, ctx, ComplementMode::kComplement)), 1e-8);
  EXPECT_LT(subspace_distance(via_a(complement(a, ComplementMode::kCo)),
                              bimodule_complement(s, ctx, ComplementMode::kCo)), 1e-8);
  const AdjacencyOp d = deloop(a);
  EXPECT_LT(subspace_distance(via_a(complement(d, ComplementMode::kNComplement)),
                              bimodule_complement(via_a(d), ctx, ComplementMode::kNComplement)), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Algebras, CorrespondenceTest,
                         ::testing::Values(std::vector<int>{1, 1, 1}, std::vector<int>{2},
                                           std::vector<int>{1, 2}, std::vector<int>{2, 2}));

TEST(Classical, BimoduleIsMatrixUnitSpan) {
  Graph g{4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1}, {1, 0}, {2, 3}, {3, 2}}};
  AdjacencyOp a = from_classical(g);
  const Representation rep = Representation::gns(a.ctx.algebra());
  Bimodule s = adjacency_to_bimodule(a, rep);
  std::vector<Mat> units;
  for (auto [u, v] : g.edges) {
    Mat x = Mat::Zero(4, 4);
    x(u, v) = 1.0;
    units.push_back(x);
  }
  EXPECT_LT(subspace_distance(s, span_bimodule(rep, units)), 1e-12);
}

TEST(Classical, EmptyGraphProjection) {
  GnsContext ctx = counting_context(3);
  const OppTensor e = graph_projection(empty_adjacency(ctx));
  Mat expected = Mat::Zero(3, 3);
  expected.diagonal().setOnes();
  EXPECT_LT((e.coef - expected).norm(), 1e-14);
}

TEST(Bimodules, JDecompositionRejectsNonBimodule) {
  const Representation rep = Representation::minimal(BlockAlgebra({1, 1}));
  Mat x = Mat::Zero(2, 2);
  x(0, 0) = 1.0;
  x(0, 1) = 1.0;
  Bimodule s = span_bimodule(rep, {x});
  EXPECT_FALSE(bimodule_check(s).bimodule);
  try {
    bimodule_to_projection(s);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotBimodule);
  }
}

TEST(Bimodules, NonSymmetricRejected) {
  GnsContext ctx = counting_context(2);
  AdjacencyOp a = from_classical({2, {{0, 0}, {1, 1}, {0, 1}}});
  try {
    adjacency_to_bimodule(a);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAxiomsFail);
  }
  (void)ctx;
}

TEST(M2, Classification) {
  for (double q : {0.3, 0.5, 0.9}) {
    M2Classification c = classify_m2(q);
    ASSERT_EQ(c.graphs.size(), 4u);
    EXPECT_FALSE(c.continuum);
    std::vector<int> dims;
    for (auto& g : c.graphs) dims.push_back(g.S.dim());
    EXPECT_EQ(dims, (std::vector<int>{1, 2, 3, 4}));
    EXPECT_EQ(c.graphs[0].name, "S1");
    EXPECT_EQ(c.graphs[1].name, "S2B");
    EXPECT_EQ(c.graphs[2].name, "S2A");
    EXPECT_EQ(c.graphs[3].name, "S3");
    // complements swap S1 <-> S3 and S2A <-> S2B
    auto comp = [&](int i) { return bimodule_complement(c.graphs[std::size_t(i)].S, c.ctx, ComplementMode::kComplement); };
    EXPECT_LT(subspace_distance(comp(0), c.graphs[3].S), 1e-8);
    EXPECT_LT(subspace_distance(comp(3), c.graphs[0].S), 1e-8);
    EXPECT_LT(subspace_distance(comp(1), c.graphs[2].S), 1e-8);
    EXPECT_LT(subspace_distance(comp(2), c.graphs[1].S), 1e-8);
    // the same through adjacency operators
    for (const auto& g : c.graphs) {
      AdjacencyOp a = bimodule_to_adjacency(g.S, c.ctx);
      EXPECT_TRUE(axiom_report(a).all({1, 2, 3, 4, 5}));
    }
  }
  M2Classification one = classify_m2(1.0);
  EXPECT_TRUE(one.continuum);
  EXPECT_EQ(one.graphs.size(), 4u);
}

TEST(Bop, OppositeModularOperatorIsTranspose) {
  // L^2(B^op, psi^op) -> conj(L^2(B)), Lambda^op(a) -> conj(Lambda(a^*)).
  Rng rng(2);
  GnsContext ctx = random_context(rng, BlockAlgebra({1, 2}));
  const int n = ctx.dim();
  auto w = [&](const AlgebraElement& a) { return Vec(ctx.lambda(a.adjoint()).conjugate()); };
  // psi^op inner product (Lambda^op a | Lambda^op b) = psi(a b^*) is carried to the conj inner product
  AlgebraElement a = random_element(rng, ctx.algebra()), b = random_element(rng, ctx.algebra());
  EXPECT_LT(std::abs(w(a).dot(w(b)) - ctx.psi(b * a.adjoint())), 1e-10);
  // nabla^op Lambda^op(a) = Lambda^op(Q^{-1} a Q)
  Mat nop(n, n);
  for (int c = 0; c < n; ++c) {
    AlgebraElement fa = ctx.lambda_inverse(Vec::Unit(n, c)).adjoint();  // w^{-1}(conj e_c)
    AlgebraElement img = ctx.q_power(-1.0) * fa * ctx.q_power(1.0);
    nop.col(c) = w(img);
  }
  EXPECT_LT((nop - ctx.nabla().transpose()).norm(), 1e-9);
}

}  // namespace
}  // namespace qgraph
