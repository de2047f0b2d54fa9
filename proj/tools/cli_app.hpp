#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qgraph/io.hpp"

namespace qgraph::cli {

using io::json;

// Exit codes: 0 all checks pass, 1 a checked property failed, 2 input error.
inline constexpr int kPass = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInputError = 2;

class Runner {
 public:
  Runner(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  double tol = kDefaultTol;

  json load(const std::string& path) {
    std::string text;
    if (path == "-") {
      require(!stdin_used_, ErrorCode::kParse, "standard input can only be read once");
      stdin_used_ = true;
      std::ostringstream ss;
      ss << in_.rdbuf();
      text = ss.str();
    } else {
      std::ifstream f(path);
      require(bool(f), ErrorCode::kParse, "cannot open " + path);
      std::ostringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    // JSON Lines input: the first document is used
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json j = json::parse(line, nullptr, false);
      if (!j.is_discarded()) return j;
      break;
    }
    return json::parse(text);
  }

  void emit(const json& j) { out_ << j.dump() << '\n'; }

  int report(json r, bool pass) {
    r["pass"] = pass;
    emit(r);
    return pass ? kPass : kCheckFailed;
  }

 private:
  std::istream& in_;
  std::ostream& out_;
  bool stdin_used_ = false;
};

inline Representation choose_rep(const BlockAlgebra& alg, const std::string& kind, const std::vector<int>& mult) {
  if (!mult.empty()) return {alg, mult};
  if (kind == "minimal") return Representation::minimal(alg);
  require(kind == "gns", ErrorCode::kParse, "--rep must be gns or minimal");
  return Representation::gns(alg);
}

inline ComplementMode parse_mode(const std::string& m) {
  if (m == "co") return ComplementMode::kCo;
  if (m == "complement") return ComplementMode::kComplement;
  if (m == "ncomplement") return ComplementMode::kNComplement;
  fail(ErrorCode::kParse, "--mode must be co, complement or ncomplement");
}

inline GnsContext require_ctx(const std::optional<GnsContext>& c, const char* what) {
  require(c.has_value(), ErrorCode::kParse, std::string(what) + " document has no ctx");
  return *c;
}

inline std::string error_record(const std::string& code, const std::string& message) {
  return json{{"kind", "error"}, {"schema_version", io::kSchemaVersion}, {"code", code}, {"message", message}}.dump();
}

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Runner r(in, out);
  CLI::App app{"Quantum graph toolkit", "qgraph"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", r.tol, "numerical tolerance")->check(CLI::PositiveNumber);

  std::function<int()> action;
  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help) {
    CLI::App* s = group->add_subcommand(name, help);
    return s;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };
  auto pos = [](CLI::App* s, const std::string& name, std::string& target) {
    s->add_option(name, target, "input document, - for stdin")->capture_default_str();
  };

  // -- context
  std::vector<int> blocks;
  std::vector<double> qdiag;
  std::string qfile;
  double powers = 0.0;
  bool normalized = false;
  {
    CLI::App* g = group("context", "functional contexts");
    CLI::App* s = leaf(g, "new", "build a context document");
    s->add_option("--blocks", blocks, "block sizes")->delimiter(',')->allow_extra_args(false);
    s->add_option("--q-diag", qdiag, "diagonal of Q, concatenated over blocks")->delimiter(',')->allow_extra_args(false);
    s->add_option("--q", qfile, "element document holding Q");
    s->add_option("--powers", powers, "M_2 with Q = diag(1, q^2)/(1 + q^2)");
    s->add_flag("--normalized", normalized, "require psi(1) = 1");
    s->callback([&] {
      action = [&] {
        if (powers > 0.0) {
          r.emit(io::to_json(powers_context(powers)));
          return kPass;
        }
        require(!blocks.empty(), ErrorCode::kParse, "--blocks is required");
        BlockAlgebra alg(blocks);
        AlgebraElement q = AlgebraElement::identity(alg);
        int total = 0;
        for (int n : blocks) total += n;
        if (!qfile.empty()) {
          q = io::element_from_json(r.load(qfile));
        } else if (!qdiag.empty()) {
          require(int(qdiag.size()) == total, ErrorCode::kBadShape, "--q-diag needs one value per diagonal entry");
          std::size_t p = 0;
          for (auto& b : q.blocks)
            for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, i) = qdiag[p++];
        } else if (normalized) {
          q = cd(1.0 / total) * q;
        }
        r.emit(io::to_json(make_context({alg, q}, normalized, r.tol)));
        return kPass;
      };
    });
  }

  // -- adjacency
  std::string in1 = "-", in2 = "-", in3 = "-";
  std::vector<int> axioms_required{1, 2};
  std::string mode = "complement";
  std::string rep_kind = "gns";
  std::vector<int> mult;
  {
    CLI::App* g = group("adjacency", "quantum adjacency matrices");
    CLI::App* s = leaf(g, "check", "axiom report");
    pos(s, "adjacency", in1);
    s->add_option("--axioms", axioms_required, "axioms that must hold")->delimiter(',')->allow_extra_args(false);
    s->callback([&] {
      action = [&] {
        const AdjacencyOp a = io::adjacency_from_json(r.load(in1), r.tol);
        const AxiomReport rep = axiom_report(a, r.tol);
        for (int k : axioms_required) require(k >= 1 && k <= 7, ErrorCode::kParse, "axioms are numbered 1-7");
        bool ok = true;
        for (int k : axioms_required) ok = ok && rep.ax[std::size_t(k - 1)];
        return r.report(io::axiom_report_json(rep), ok);
      };
    });
    s = leaf(g, "complete", "complete graph ctx");
    pos(s, "context", in1);
    s->callback([&] {
      action = [&] {
        r.emit(io::to_json(complete_adjacency(io::context_from_json(r.load(in1), r.tol))));
        return kPass;
      };
    });
    s = leaf(g, "empty", "empty (trivial) graph");
    pos(s, "context", in1);
    s->callback([&] {
      action = [&] {
        r.emit(io::to_json(empty_adjacency(io::context_from_json(r.load(in1), r.tol))));
        return kPass;
      };
    });
    s = leaf(g, "complement", "complement of a graph");
    pos(s, "adjacency", in1);
    s->add_option("--mode", mode, "co, complement or ncomplement")->capture_default_str();
    s->callback([&] {
      action = [&] {
        const AdjacencyOp a = io::adjacency_from_json(r.load(in1), r.tol);
        r.emit(io::to_json(complement(a, parse_mode(mode))));
        return kPass;
      };
    });
  }

  // -- convert
  auto rep_opts = [&](CLI::App* s) {
    s->add_option("--rep", rep_kind, "gns or minimal")->capture_default_str();
    s->add_option("--mult", mult, "explicit multiplicities")->delimiter(',')->allow_extra_args(false);
  };
  {
    CLI::App* g = group("convert", "move between adjacency, projection and bimodule pictures");
    CLI::App* s = leaf(g, "a2e", "adjacency to projection");
    pos(s, "adjacency", in1);
    s->callback([&] {
      action = [&] {
        const AdjacencyOp a = io::adjacency_from_json(r.load(in1), r.tol);
        const AxiomReport ax = axiom_report(a, r.tol);
        require(ax.quantum_graph(), ErrorCode::kAxiomsFail, "adjacency fails axioms 1-2");
        r.emit(io::to_json(graph_projection(a), a.ctx));
        return kPass;
      };
    });
    s = leaf(g, "e2a", "projection to adjacency");
    pos(s, "opptensor", in1);
    s->callback([&] {
      action = [&] {
        const auto d = io::opptensor_from_json(r.load(in1), r.tol);
        r.emit(io::to_json(graph_adjacency(d.ctx, d.e)));
        return kPass;
      };
    });
    s = leaf(g, "e2s", "projection to bimodule");
    pos(s, "opptensor", in1);
    rep_opts(s);
    s->callback([&] {
      action = [&] {
        const auto d = io::opptensor_from_json(r.load(in1), r.tol);
        const Representation rep = choose_rep(d.ctx.algebra(), rep_kind, mult);
        r.emit(io::to_json(projection_to_bimodule(d.ctx, d.e, rep, r.tol), &d.ctx));
        return kPass;
      };
    });
    s = leaf(g, "s2e", "bimodule to projection");
    pos(s, "bimodule", in1);
    s->callback([&] {
      action = [&] {
        const auto d = io::bimodule_from_json(r.load(in1), r.tol);
        const GnsContext ctx = require_ctx(d.ctx, "bimodule");
        r.emit(io::to_json(bimodule_to_projection(d.s, r.tol), ctx));
        return kPass;
      };
    });
    s = leaf(g, "a2s", "adjacency to bimodule");
    pos(s, "adjacency", in1);
    rep_opts(s);
    s->callback([&] {
      action = [&] {
        const AdjacencyOp a = io::adjacency_from_json(r.load(in1), r.tol);
        const Representation rep = choose_rep(a.ctx.algebra(), rep_kind, mult);
        r.emit(io::to_json(adjacency_to_bimodule(a, rep, r.tol), &a.ctx));
        return kPass;
      };
    });
  }

  // -- tracial
  {
    CLI::App* g = group("tracial", "tracial reduction S_0 = Q^{1/2} S");
    for (const char* name : {"reduce", "expand"}) {
      CLI::App* s = leaf(g, name, name);
      pos(s, "bimodule", in1);
      const bool reduce = std::string(name) == "reduce";
      s->callback([&, reduce] {
        action = [&, reduce] {
          const auto d = io::bimodule_from_json(r.load(in1), r.tol);
          const GnsContext ctx = require_ctx(d.ctx, "bimodule");
          const Bimodule out = reduce ? tracial_reduce(d.s, ctx) : tracial_expand(d.s, ctx);
          r.emit(io::to_json(out, &ctx));
          return kPass;
        };
      });
    }
  }

  // -- choi
  {
    CLI::App* g = group("choi", "Choi matrices of linear maps B -> C");
    CLI::App* s = leaf(g, "map", "Choi element of a linear map");
    pos(s, "linear_map", in1);
    s->callback([&] {
      action = [&] {
        const LinearMapBC f = io::linear_map_from_json(r.load(in1), r.tol);
        r.emit(io::to_json(choi(f), f.source));
        return kPass;
      };
    });
    s = leaf(g, "cp-check", "complete positivity via the Choi element");
    pos(s, "linear_map", in1);
    s->callback([&] {
      action = [&] {
        const PositivityReport p = is_cp(io::linear_map_from_json(r.load(in1), r.tol), r.tol);
        json d = io::document("report");
        d["name"] = "cp";
        d["min_eigenvalue"] = p.min_eigenvalue;
        d["hermitian_defect"] = p.hermitian_defect;
        return r.report(d, p.positive);
      };
    });
    s = leaf(g, "super-report", "super-operator equivalences");
    pos(s, "linear_map", in1);
    s->callback([&] {
      action = [&] {
        const SuperOperatorReport rep = super_operator_report(io::linear_map_from_json(r.load(in1), r.tol), r.tol);
        r.emit(io::super_report_json(rep));
        return kPass;
      };
    });
  }

  // -- channel
  bool allow_nonunital = false;
  {
    CLI::App* g = group("channel", "quantum channels in Kraus form");
    CLI::App* s = leaf(g, "confusability", "confusability graph");
    pos(s, "kraus", in1);
    s->callback([&] {
      action = [&] {
        r.emit(io::to_json(confusability(io::kraus_from_json(r.load(in1), r.tol), r.tol)));
        return kPass;
      };
    });
    s = leaf(g, "pullback", "pull a graph back along the channel");
    pos(s, "kraus", in1);
    pos(s, "bimodule", in2);
    s->add_flag("--allow-nonunital", allow_nonunital, "skip the unitality requirement");
    s->callback([&] {
      action = [&] {
        const KrausMap t = io::kraus_from_json(r.load(in1), r.tol);
        const auto d = io::bimodule_from_json(r.load(in2), r.tol);
        const Unitality u = allow_nonunital ? Unitality::kAllowNonUnital : Unitality::kRequire;
        r.emit(io::to_json(pullback(t, d.s, u, r.tol)));
        return kPass;
      };
    });
    s = leaf(g, "pushforward", "push a graph forward along the channel");
    pos(s, "kraus", in1);
    pos(s, "bimodule", in2);
    s->callback([&] {
      action = [&] {
        const KrausMap t = io::kraus_from_json(r.load(in1), r.tol);
        const auto d = io::bimodule_from_json(r.load(in2), r.tol);
        r.emit(io::to_json(pushforward(t, d.s, r.tol)));
        return kPass;
      };
    });
    s = leaf(g, "adjoint", "trace-dual channel");
    pos(s, "kraus", in1);
    s->callback([&] {
      action = [&] {
        r.emit(io::to_json(cp_adjoint(io::kraus_from_json(r.load(in1), r.tol), r.tol)));
        return kPass;
      };
    });
    s = leaf(g, "morphism-check", "is the channel a CP morphism S1 -> S2");
    pos(s, "kraus", in1);
    pos(s, "s1", in2);
    pos(s, "s2", in3);
    s->callback([&] {
      action = [&] {
        const KrausMap t = io::kraus_from_json(r.load(in1), r.tol);
        const auto s1 = io::bimodule_from_json(r.load(in2), r.tol);
        const auto s2 = io::bimodule_from_json(r.load(in3), r.tol);
        const MorphismReport m = is_cp_morphism(t, s1.s, s2.s, r.tol);
        json d = io::document("report");
        d["name"] = "cp_morphism";
        d["residual"] = m.residual;
        return r.report(d, m.morphism);
      };
    });
    s = leaf(g, "from-classical", "channel of a stochastic matrix");
    pos(s, "stochastic", in1);
    s->callback([&] {
      action = [&] {
        r.emit(io::to_json(classical_channel(io::stochastic_from_json(r.load(in1)), r.tol)));
        return kPass;
      };
    });
  }

  // -- classify
  double q = 0.0;
  {
    CLI::App* g = group("classify", "classification results");
    CLI::App* s = leaf(g, "m2", "all quantum graphs over (M_2, psi_q)");
    s->add_option("--q", q, "parameter 0 < q")->required();
    s->callback([&] {
      action = [&] {
        const M2Classification c = classify_m2(q, r.tol);
        std::vector<int> dims;
        std::string summary = "dims ";
        for (const auto& gr : c.graphs) {
          json d = io::to_json(gr.S, &c.ctx);
          d["name"] = gr.name;
          r.emit(d);
          dims.push_back(gr.S.dim());
          summary += (dims.size() > 1 ? "," : "") + std::to_string(gr.S.dim());
        }
        json d = io::document("report");
        d["name"] = "classify_m2";
        d["q"] = q;
        d["dims"] = dims;
        d["continuum"] = c.continuum;
        d["summary"] = summary;
        r.emit(d);
        return kPass;
      };
    });
  }

  // -- aut
  {
    CLI::App* g = group("aut", "automorphisms of B");
    CLI::App* s = leaf(g, "check", "is the automorphism psi-preserving");
    pos(s, "context", in1);
    pos(s, "automorphism", in2);
    s->callback([&] {
      action = [&] {
        const GnsContext ctx = io::context_from_json(r.load(in1), r.tol);
        const StateReport st = is_state_automorphism(io::automorphism_from_json(r.load(in2)), ctx, r.tol);
        json d = io::document("report");
        d["name"] = "state_automorphism";
        d["q_residual"] = st.q_residual;
        d["modular_residual"] = st.modular_residual;
        return r.report(d, st.preserves);
      };
    });
    s = leaf(g, "graph-check", "is the automorphism a graph automorphism");
    pos(s, "adjacency", in1);
    pos(s, "automorphism", in2);
    s->callback([&] {
      action = [&] {
        const AdjacencyOp a = io::adjacency_from_json(r.load(in1), r.tol);
        const GraphAutomorphismReport g2 = is_graph_automorphism(io::automorphism_from_json(r.load(in2)), a, r.tol);
        json d = io::document("report");
        d["name"] = "graph_automorphism";
        d["commutator"] = g2.commutator;
        d["tensor_defect"] = g2.tensor_defect;
        return r.report(d, g2.automorphism);
      };
    });
  }

  // -- corep
  std::string ctx_file, adj_file;
  {
    CLI::App* g = group("corep", "quantum symmetry certificates");
    CLI::App* s = leaf(g, "check", "verify a corepresentation certificate");
    pos(s, "certificate", in1);
    s->add_option("--ctx", ctx_file, "context document, if the certificate has none");
    s->add_option("--adjacency", adj_file, "also check commutation with this graph");
    s->callback([&] {
      action = [&] {
        const auto c = io::certificate_from_json(r.load(in1), r.tol);
        std::optional<AdjacencyOp> a;
        if (!adj_file.empty()) a = io::adjacency_from_json(r.load(adj_file), r.tol);
        std::optional<GnsContext> ctx = c.ctx;
        if (!ctx_file.empty()) ctx = io::context_from_json(r.load(ctx_file), r.tol);
        if (!ctx && a) ctx = a->ctx;
        const GnsContext cx = require_ctx(ctx, "certificate");
        if (a) check_same_context(cx, a->ctx);
        const CorepReport rep = corep_check(cx, c.cert, a, r.tol);
        json d = io::document("report");
        d["name"] = "corep";
        d["coaction"] = rep.coaction;
        d["residuals"] = json{{"unitary", rep.unitary}, {"multiplication", rep.multiplication},
                              {"unit", rep.unit}, {"counit", rep.counit}, {"conjugate", rep.conjugate}};
        if (rep.commutes) {
          d["commutes"] = *rep.commutes;
          d["residuals"]["adjacency"] = rep.adjacency;
        }
        return r.report(d, rep.coaction && rep.commutes.value_or(true));
      };
    });
    s = leaf(g, "from-graph", "automorphism group certificate of a classical graph");
    pos(s, "graph", in1);
    s->callback([&] {
      action = [&] {
        const Graph gr = io::graph_from_json(r.load(in1));
        const ClassicalCertificate cc = classical_certificate(gr);
        const GnsContext ctx = from_classical(gr).ctx;
        json d = io::to_json(cc.certificate, &ctx);
        d["automorphisms"] = cc.automorphisms;
        r.emit(d);
        return kPass;
      };
    });
  }

  // -- classical
  {
    CLI::App* g = group("classical", "classical graphs");
    CLI::App* s = leaf(g, "import", "graph to adjacency over the counting measure");
    pos(s, "graph", in1);
    s->callback([&] {
      action = [&] {
        r.emit(io::to_json(from_classical(io::graph_from_json(r.load(in1)))));
        return kPass;
      };
    });
    s = leaf(g, "export", "adjacency over C^n to graph");
    pos(s, "adjacency", in1);
    s->callback([&] {
      action = [&] {
        r.emit(io::to_json(to_classical(io::adjacency_from_json(r.load(in1), r.tol), r.tol)));
        return kPass;
      };
    });
  }

  std::vector<const char*> argv{"qgraph"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << error_record("UsageError", e.what()) << '\n';
    return kInputError;
  }

  try {
    require(bool(action), ErrorCode::kParse, "no command given");
    return action();
  } catch (const Error& e) {
    err << error_record(std::string(e.name()), e.what()) << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << error_record(std::string(error_name(ErrorCode::kParse)), e.what()) << '\n';
  } catch (const std::exception& e) {
    err << error_record("InternalError", e.what()) << '\n';
  }
  return kInputError;
}

}  // namespace qgraph::cli
