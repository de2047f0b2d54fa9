#pragma once

// JSON documents. Every top-level document carries "kind" and
// "schema_version"; complex numbers are [re, im] and matrices are row-major
// lists of rows. Matrices attached to a context are in its canonical frame.

#include <json.hpp>

#include "qgraph/channels.hpp"
#include "qgraph/choi.hpp"
#include "qgraph/symmetry.hpp"

namespace qgraph::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

[[noreturn]] inline void parse_fail(const std::string& what) { fail(ErrorCode::kParse, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

inline cd complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  parse_fail("complex numbers are [re, im]");
}

inline json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat matrix_from_json(const json& j) {
  if (!j.is_array()) parse_fail("matrix must be a list of rows");
  const Eigen::Index r = Eigen::Index(j.size());
  const Eigen::Index c = r ? Eigen::Index(j[0].size()) : 0;
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = j[std::size_t(i)];
    if (!row.is_array() || Eigen::Index(row.size()) != c) fail(ErrorCode::kBadShape, "ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = complex_from_json(row[std::size_t(k)]);
  }
  return m;
}

inline json real_matrix_to_json(const RMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RMat real_matrix_from_json(const json& j) {
  const Mat m = matrix_from_json(j);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) parse_fail("expected a real matrix");
  return m.real();
}

inline std::vector<int> ints_from_json(const json& j) {
  if (!j.is_array()) parse_fail("expected a list of integers");
  std::vector<int> v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) parse_fail("expected a list of integers");
    v.push_back(x.get<int>());
  }
  return v;
}

inline json mats_to_json(const std::vector<Mat>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(matrix_to_json(m));
  return a;
}

inline std::vector<Mat> mats_from_json(const json& j) {
  if (!j.is_array()) parse_fail("expected a list of matrices");
  std::vector<Mat> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

inline json document(const std::string& kind) {
  return json{{"kind", kind}, {"schema_version", kSchemaVersion}};
}

inline void expect_kind(const json& j, const std::string& kind) {
  if (!j.is_object()) parse_fail("document must be a JSON object");
  const std::string k = field(j, "kind").get<std::string>();
  if (k != kind) parse_fail("expected a '" + kind + "' document, got '" + k + "'");
  if (field(j, "schema_version").get<int>() != kSchemaVersion) parse_fail("unsupported schema_version");
}

// ---- payloads ----

inline json element_payload(const AlgebraElement& a) { return json{{"blocks", mats_to_json(a.blocks)}}; }

inline AlgebraElement element_from_payload(const json& j) { return {mats_from_json(field(j, "blocks"))}; }

inline json context_payload(const GnsContext& ctx) {
  return json{{"block_dims", ctx.algebra().dims()},
              {"Q", element_payload(ctx.q_input())},
              {"normalized", ctx.normalized()}};
}

inline GnsContext context_from_payload(const json& j, double tol = kDefaultTol) {
  BlockAlgebra alg(ints_from_json(field(j, "block_dims")));
  AlgebraElement q = element_from_payload(field(j, "Q"));
  return make_context({alg, q}, field(j, "normalized").get<bool>(), tol);
}

inline json rep_payload(const Representation& r) {
  return json{{"block_dims", r.algebra().dims()}, {"multiplicities", r.multiplicities()}};
}

inline Representation rep_from_payload(const json& j) {
  return {BlockAlgebra(ints_from_json(field(j, "block_dims"))), ints_from_json(field(j, "multiplicities"))};
}

// ---- documents ----

inline json to_json(const GnsContext& ctx) {
  json d = document("context");
  d.update(context_payload(ctx));
  return d;
}

inline json to_json(const AlgebraElement& a) {
  json d = document("element");
  d.update(element_payload(a));
  return d;
}

inline json to_json(const AdjacencyOp& a) {
  json d = document("adjacency");
  d["ctx"] = context_payload(a.ctx);
  d["matrix"] = matrix_to_json(a.matrix);
  return d;
}

inline json to_json(const Graph& g) {
  json d = document("graph");
  d["vertices"] = g.vertices;
  json e = json::array();
  for (auto [u, v] : g.edges) e.push_back({u, v});
  d["edges"] = e;
  return d;
}

// "op" is the action on H_left (x) conj(H_right) with multiplicity-one representations.
inline json to_json(const OppTensor& e, const GnsContext& ctx) {
  json d = document("opptensor");
  d["ctx"] = context_payload(ctx);
  if (!(e.left == ctx.algebra())) d["left_dims"] = e.left.dims();
  d["op"] = matrix_to_json(action(e));
  return d;
}

inline json to_json(const Bimodule& s, const GnsContext* ctx = nullptr) {
  json d = document("bimodule");
  if (ctx) d["ctx"] = context_payload(*ctx);
  d["rep"] = rep_payload(s.rep);
  d["dim"] = s.dim();
  d["basis"] = mats_to_json(s.basis);
  return d;
}

inline json to_json(const KrausMap& t) {
  json d = document("kraus");
  d["source"] = rep_payload(t.source);
  d["target"] = rep_payload(t.target);
  d["kraus"] = mats_to_json(t.kraus);
  return d;
}

inline json stochastic_to_json(const RMat& p) {
  json d = document("stochastic");
  d["p"] = real_matrix_to_json(p);
  return d;
}

inline json to_json(const LinearMapBC& f) {
  json d = document("linear_map");
  d["ctx"] = context_payload(f.source);
  d["target_dims"] = f.target.dims();
  d["matrix"] = matrix_to_json(f.matrix);
  return d;
}

inline json to_json(const AutoCandidate& t) {
  json d = document("automorphism");
  d["permutation"] = t.permutation;
  d["unitaries"] = mats_to_json(t.unitaries);
  return d;
}

inline json to_json(const CorepCertificate& c, const GnsContext* ctx = nullptr) {
  json d = document("certificate");
  if (ctx) d["ctx"] = context_payload(*ctx);
  d["symmetry_algebra"] = json{{"block_dims", c.symmetry_algebra.dims()}};
  json v = json::array();
  for (const auto& row : c.v) {
    json r = json::array();
    for (const auto& x : row) r.push_back(element_payload(x));
    v.push_back(std::move(r));
  }
  d["v"] = v;
  return d;
}

inline GnsContext context_from_json(const json& j, double tol = kDefaultTol) {
  expect_kind(j, "context");
  return context_from_payload(j, tol);
}

inline AlgebraElement element_from_json(const json& j) {
  expect_kind(j, "element");
  return element_from_payload(j);
}

inline AdjacencyOp adjacency_from_json(const json& j, double tol = kDefaultTol) {
  expect_kind(j, "adjacency");
  AdjacencyOp a{context_from_payload(field(j, "ctx"), tol), matrix_from_json(field(j, "matrix"))};
  check_adjacency(a);
  return a;
}

inline Graph graph_from_json(const json& j) {
  expect_kind(j, "graph");
  Graph g{field(j, "vertices").get<int>(), {}};
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) parse_fail("edges are [u, v] pairs");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  if (j.value("undirected", false)) {
    auto es = g.edges;
    for (auto [u, v] : es) g.edges.emplace_back(v, u);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

struct TensorDoc {
  GnsContext ctx;
  OppTensor e;
};

inline TensorDoc opptensor_from_json(const json& j, double tol = kDefaultTol) {
  expect_kind(j, "opptensor");
  GnsContext ctx = context_from_payload(field(j, "ctx"), tol);
  BlockAlgebra left = j.contains("left_dims") ? BlockAlgebra(ints_from_json(j["left_dims"])) : ctx.algebra();
  double res = 0.0;
  OppTensor e = from_action(matrix_from_json(field(j, "op")), Representation::minimal(left),
                            Representation::minimal(ctx.algebra()), &res);
  require(res <= tol * std::max(1.0, double(e.coef.size())), ErrorCode::kBadShape,
          "operator is not in the image of the tensor algebra");
  return {ctx, e};
}

struct BimoduleDoc {
  std::optional<GnsContext> ctx;
  Bimodule s;
};

inline BimoduleDoc bimodule_from_json(const json& j, double tol = kDefaultTol) {
  expect_kind(j, "bimodule");
  BimoduleDoc d;
  if (j.contains("ctx")) d.ctx = context_from_payload(j["ctx"], tol);
  const Representation rep = rep_from_payload(field(j, "rep"));
  // re-orthonormalise so hand-written spanning sets are accepted
  d.s = span_bimodule(rep, mats_from_json(field(j, "basis")));
  if (d.ctx) require(d.ctx->algebra() == rep.algebra(), ErrorCode::kContextMismatch,
                     "representation is not over the context algebra");
  return d;
}

inline KrausMap kraus_from_json(const json& j, double tol = kDefaultTol) {
  expect_kind(j, "kraus");
  KrausMap t{rep_from_payload(field(j, "source")), rep_from_payload(field(j, "target")),
             mats_from_json(field(j, "kraus"))};
  validate(t, tol);
  return t;
}

inline RMat stochastic_from_json(const json& j) {
  expect_kind(j, "stochastic");
  return real_matrix_from_json(field(j, "p"));
}

inline LinearMapBC linear_map_from_json(const json& j, double tol = kDefaultTol) {
  expect_kind(j, "linear_map");
  LinearMapBC f{context_from_payload(field(j, "ctx"), tol), BlockAlgebra(ints_from_json(field(j, "target_dims"))),
                matrix_from_json(field(j, "matrix"))};
  check_map(f);
  return f;
}

inline AutoCandidate automorphism_from_json(const json& j) {
  expect_kind(j, "automorphism");
  return {ints_from_json(field(j, "permutation")), mats_from_json(field(j, "unitaries"))};
}

struct CertificateDoc {
  std::optional<GnsContext> ctx;
  CorepCertificate cert;
};

inline CertificateDoc certificate_from_json(const json& j, double tol = kDefaultTol) {
  expect_kind(j, "certificate");
  CertificateDoc d;
  if (j.contains("ctx")) d.ctx = context_from_payload(j["ctx"], tol);
  d.cert.symmetry_algebra = BlockAlgebra(ints_from_json(field(field(j, "symmetry_algebra"), "block_dims")));
  for (const auto& row : field(j, "v")) {
    std::vector<AlgebraElement> r;
    for (const auto& x : row) {
      AlgebraElement e = element_from_payload(x);
      e.check_shape(d.cert.symmetry_algebra);
      r.push_back(std::move(e));
    }
    d.cert.v.push_back(std::move(r));
  }
  return d;
}

// ---- reports ----

inline json axiom_report_json(const AxiomReport& r) {
  json d = document("report");
  d["name"] = "axioms";
  json ax = json::object();
  for (std::size_t i = 0; i < 7; ++i)
    ax[std::to_string(i + 1)] = json{{"holds", r.ax[i]}, {"residual", r.residuals[i]}};
  d["axioms"] = ax;
  d["threshold"] = r.threshold;
  d["selfadjoint"] = json{{"holds", r.selfadjoint}, {"residual", r.selfadjoint_residual}};
  d["real"] = json{{"holds", r.real}, {"residual", r.real_residual}};
  d["quantum_graph"] = r.quantum_graph();
  return d;
}

inline json bimodule_report_json(const BimoduleReport& r) {
  json d = document("report");
  d["name"] = "bimodule";
  d["bimodule"] = json{{"holds", r.bimodule}, {"residual", r.bimodule_residual}};
  d["selfadjoint"] = json{{"holds", r.selfadjoint}, {"residual", r.selfadjoint_residual}};
  d["unital"] = json{{"holds", r.unital}, {"residual", r.unital_residual}};
  if (r.contains_qinvhalf) d["contains_qinvhalf"] = json{{"holds", *r.contains_qinvhalf}, {"residual", r.qinvhalf_residual}};
  if (r.q_invariant) d["q_invariant"] = json{{"holds", *r.q_invariant}, {"residual", r.q_invariant_residual}};
  return d;
}

inline json super_report_json(const SuperOperatorReport& r) {
  json d = document("report");
  d["name"] = "super_operator";
  d["cp"] = r.cp;
  d["schur_idempotent"] = r.schur_idempotent;
  d["real"] = r.real;
  d["selfadjoint"] = r.selfadjoint;
  d["undirected"] = r.undirected;
  d["cp_and_idempotent"] = r.cp_idempotent;
  d["real_and_axiom1"] = r.real_idempotent;
  d["cp_and_axioms12"] = r.cp_graph;
  d["selfadjoint_and_axioms12"] = r.selfadjoint_graph;
  d["choi_psi_residual"] = r.choi_psi_residual;
  d["min_eigenvalue"] = r.positivity.min_eigenvalue;
  return d;
}

}  // namespace qgraph::io
