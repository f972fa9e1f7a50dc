#include "qmc/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmc/assertion_format.hpp"
#include "qmc/checker.hpp"
#include "qmc/ket.hpp"
#include "qmc/model_format.hpp"
#include "qmc/random.hpp"
#include "qmc/reach.hpp"

namespace qmc {

using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse errors carry line:column; prefix the file name.
template <class F>
auto with_path(const std::string& path, F parse) {
  try {
    return parse(read_file(path));
  } catch (const SyntaxError& e) {
    throw SyntaxError(path + ":" + e.what(), SourcePos{});
  } catch (const NormalisationViolation& e) {
    throw Error(path + ":" + e.what());
  }
}

QuantumTransitionSystem load_model(const RunConfig& cfg) {
  if (cfg.model_path.empty()) throw Error("--model is required");
  return with_path(cfg.model_path, [](const std::string& text) { return parse_model(text); });
}

CMatrix initial_state(const RunConfig& cfg, int n_qubits) {
  if (!cfg.init_ket.empty() && !cfg.init_dm_path.empty()) {
    throw Error("--init and --init-dm are mutually exclusive");
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (!cfg.init_dm_path.empty()) {
    CMatrix rho = with_path(cfg.init_dm_path, [](const std::string& t) { return parse_matrix_literal(t); });
    if (rho.rows() != d || rho.cols() != d) {
      throw DimensionMismatch("initial density matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    require_density_matrix(rho, true);
    return rho;
  }
  if (cfg.init_ket.empty()) return outer(basis_vector(d, 0));
  return outer(parse_state_vector(cfg.init_ket, n_qubits));
}

std::string sig10(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::string(buf) == "-0" ? "0" : buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::holds: return 0;
    case VerdictKind::fails: return 1;
    case VerdictKind::unknown: return 2;
  }
  return 3;
}

std::string ket_label(Eigen::Index index, int n_qubits) {
  std::string s = "|";
  for (int q = 0; q < n_qubits; ++q) s += ((index >> q) & 1) ? '1' : '0';
  return s + ">";
}

}  // namespace

std::string format_ket(const CVector& v, int n_qubits) {
  Eigen::Index top = 0;
  v.cwiseAbs().maxCoeff(&top);
  const double scale = std::abs(v(top));
  const Complex phase = scale > 0 ? std::conj(v(top)) / scale : Complex(1.0);
  // Parts below 1e-10 of the largest amplitude are rounding noise.
  auto clean = [&](double x) { return std::abs(x) <= 1e-10 * scale ? 0.0 : x; };
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Complex a(clean((v(i) * phase).real()), clean((v(i) * phase).imag()));
    const std::string re = sig10(a.real()), im = sig10(a.imag());
    if (re == "0" && im == "0") continue;
    std::string coeff;
    if (im == "0") {
      coeff = re == "1" ? "" : re == "-1" ? "-" : re;
    } else if (re == "0") {
      coeff = im + "i";
    } else {
      coeff = "(" + re + (a.imag() < 0 ? "" : "+") + im + "i)";
    }
    if (!out.empty()) out += " + ";
    out += coeff + ket_label(i, n_qubits);
  }
  return out.empty() ? "0" : out;
}

// ---- check ------------------------------------------------------------------

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const auto sys = load_model(cfg);
  if (cfg.assert_path.empty()) throw Error("--assert is required");
  const auto file = with_path(cfg.assert_path, [](const std::string& t) { return parse_assertions(t); });
  Bindings bindings;
  try {
    bindings = bind(file, sys.n_qubits());
  } catch (const SyntaxError& e) {
    throw SyntaxError(cfg.assert_path + ":" + e.what(), SourcePos{});
  }
  for (const auto& a : file.assertions) {
    try {
      require_bound(*a.formula, bindings);
    } catch (const UnboundAtom& e) {
      throw UnboundAtom(cfg.assert_path + ":" + position_prefix(a.pos) + "assertion \"" + a.label + "\": " + e.what());
    }
  }
  const CMatrix rho0 = initial_state(cfg, sys.n_qubits());
  if (cfg.bound < 1) throw BadParameter("--bound must be at least 1");

  const auto start = std::chrono::steady_clock::now();
  BuildOptions options;
  options.bound = cfg.bound;
  const auto graph = build_graph(sys, rho0, options);
  const double build_ms = elapsed_ms(start);

  int code = 0;
  Json results = Json::array();
  std::ostringstream text;
  for (const auto& a : file.assertions) {
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict v = check(graph, *a.formula, bindings);
    const double check_ms = elapsed_ms(t0);
    code = std::max(code, exit_code(v.result));

    Json r;
    r["label"] = a.label;
    r["formula"] = print(*a.formula);
    r["verdict"] = to_string(v.result);
    r["closure"] = to_string(v.closure);
    r["bound"] = v.bound;
    r["nodes"] = v.nodes;
    r["edges"] = v.edges;
    if (v.trace) {
      Json steps = Json::array();
      for (const auto& s : v.trace->steps) {
        steps.push_back({{"location", s.location}, {"probability", s.probability}, {"state_digest", s.digest}});
      }
      r["trace"] = steps;
      if (v.trace->loop_back) r["loop_back"] = *v.trace->loop_back;
    } else {
      r["trace"] = nullptr;
    }
    if (cfg.timings) r["timings"] = {{"check_ms", check_ms}};
    results.push_back(r);

    text << to_string(v.result) << "  \"" << a.label << "\"  " << print(*a.formula) << "\n";
    if (v.trace) {
      text << "  " << (v.result == VerdictKind::holds ? "witness" : "counterexample") << ":";
      for (std::size_t k = 0; k < v.trace->steps.size(); ++k) {
        const auto& s = v.trace->steps[k];
        text << (k ? " -> " : " ") << s.location << " (p=" << sig10(s.probability) << ", " << s.digest << ")";
      }
      if (v.trace->loop_back) text << " -> loops to step " << *v.trace->loop_back;
      text << "\n";
    }
  }

  if (cfg.json) {
    Json report;
    report["model"] = cfg.model_path;
    report["assertions"] = cfg.assert_path;
    report["closure"] = to_string(graph.closure);
    report["nodes"] = graph.nodes.size();
    report["edges"] = graph.edge_count();
    report["results"] = results;
    if (cfg.timings) report["timings"] = {{"build_ms", build_ms}};
    out << report.dump(2) << "\n";
  } else {
    out << "model " << cfg.model_path << ": " << graph.nodes.size() << " configurations, "
        << graph.edge_count() << " edges, " << to_string(graph.closure);
    if (graph.closure == Closure::truncated) out << " at bound " << graph.bound;
    out << "\n" << text.str();
    if (cfg.timings) out << "build " << sig10(build_ms) << " ms\n";
  }
  return code;
}

// ---- reach ------------------------------------------------------------------

int cmd_reach(const RunConfig& cfg, std::ostream& out) {
  std::optional<QuantumMarkovChain> chain;
  CMatrix rho0;
  int n = 0;
  std::string label;
  if (cfg.random_qubits > 0) {
    if (!cfg.model_path.empty()) throw Error("--random and --model are mutually exclusive");
    n = cfg.random_qubits;
    if (n > 6) throw BadParameter("--random supports at most 6 qubits");
    Rng rng(cfg.seed);
    chain.emplace(random_channel(n, 2, rng));
    rho0 = (cfg.init_ket.empty() && cfg.init_dm_path.empty()) ? outer(random_vector(Eigen::Index{1} << n, rng))
                                                             : initial_state(cfg, n);
    label = "random(qubits=" + std::to_string(n) + ", seed=" + std::to_string(cfg.seed) + ")";
  } else {
    const auto sys = load_model(cfg);
    if (sys.locations().size() != 1) {
      throw Error("reach needs a single-location model (a quantum Markov chain); '" + cfg.model_path +
                  "' has " + std::to_string(sys.locations().size()) + " locations");
    }
    n = sys.n_qubits();
    std::vector<CMatrix> kraus;
    for (const auto& t : sys.transitions()) {
      for (const auto& k : t.op.kraus()) kraus.push_back(k);
    }
    chain.emplace(kraus.empty() ? SuperOperator::identity(n) : SuperOperator(n, std::move(kraus)));
    rho0 = initial_state(cfg, n);
    label = cfg.model_path;
  }

  const Subspace r = reachable_subspace(*chain, rho0);
  Json report;
  report["model"] = label;
  report["dim"] = r.dim();
  Json basis = Json::array();
  for (Eigen::Index k = 0; k < r.dim(); ++k) basis.push_back(format_ket(r.basis().col(k), n));
  report["basis"] = basis;

  int code = 0;
  std::ostringstream verify_text;
  if (cfg.verify) {
    const Subspace vec = reachable_subspace_vectorized(*chain, rho0);
    const Subspace fix = reachable_fixpoint_oracle(*chain, rho0);
    const Subspace* all[] = {&r, &vec, &fix};
    double residual = 0.0;
    for (const auto* x : all)
      for (const auto* y : all) residual = std::max(residual, containment_residual(*x, *y));
    const bool same_dims = r.dim() == vec.dim() && vec.dim() == fix.dim();
    const bool ok = same_dims && residual < tol().member;
    if (!ok) code = 1;
    report["verify"] = {{"dims", {r.dim(), vec.dim(), fix.dim()}}, {"max_residual", residual}, {"agree", ok}};
    verify_text << "verify: dims " << r.dim() << "/" << vec.dim() << "/" << fix.dim() << ", max residual "
                << sig10(residual) << (ok ? " (agree)" : " (DISAGREE)") << "\n";
  }

  if (cfg.json) {
    out << report.dump(2) << "\n";
  } else {
    out << "reachable subspace of " << label << ": dim " << r.dim() << "\n";
    for (const auto& b : basis) out << "  " << b.get<std::string>() << "\n";
    out << verify_text.str();
  }
  return code;
}

// ---- simulate ---------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto sys = load_model(cfg);
  const CMatrix rho0 = initial_state(cfg, sys.n_qubits());
  const auto tree = simulate(sys, rho0, cfg.depth);
  auto loc = [&](const SimulationNode& s) { return sys.locations()[static_cast<std::size_t>(s.config.location)]; };

  if (cfg.json) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < tree.size(); ++i) {
      const auto& s = tree[i];
      nodes.push_back({{"id", i},
                       {"parent", s.parent},
                       {"depth", s.depth},
                       {"location", loc(s)},
                       {"probability", s.config.probability},
                       {"transition", s.transition},
                       {"state_digest", fingerprint(s.config.state)}});
    }
    Json report;
    report["model"] = cfg.model_path;
    report["depth"] = cfg.depth;
    report["nodes"] = nodes;
    out << report.dump(2) << "\n";
    return 0;
  }

  std::vector<std::vector<std::size_t>> children(tree.size());
  for (std::size_t i = 1; i < tree.size(); ++i) children[static_cast<std::size_t>(tree[i].parent)].push_back(i);
  std::function<void(std::size_t)> dump = [&](std::size_t i) {
    const auto& s = tree[i];
    out << std::string(2 * static_cast<std::size_t>(s.depth), ' ') << loc(s) << "  p=" << sig10(s.config.probability)
        << "  " << fingerprint(s.config.state) << "\n";
    for (std::size_t c : children[i]) dump(c);
  };
  dump(0);
  std::size_t leaves = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) leaves += children[i].empty() && tree[i].depth == cfg.depth;
  out << "leaves at depth " << cfg.depth << ": " << leaves << "\n";
  return 0;
}

// ---- fmt --------------------------------------------------------------------

int cmd_fmt(const RunConfig& cfg, std::ostream& out) {
  if (cfg.model_path.empty() == cfg.assert_path.empty()) {
    throw Error("fmt needs exactly one of --model and --assert");
  }
  if (!cfg.model_path.empty()) {
    out << serialize_model(load_model(cfg));
  } else {
    out << serialize_assertions(
        with_path(cfg.assert_path, [](const std::string& t) { return parse_assertions(t); }));
  }
  return 0;
}

// ---- entry point ------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checker for quantum circuits and transition systems", "qmc"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "text";

  auto common = [&](CLI::App* sub, bool needs_init) {
    sub->add_option("--model", cfg.model_path, "model file (.qts)");
    if (needs_init) {
      sub->add_option("--init", cfg.init_ket, "initial state as a ket expression, e.g. \"(|00>+|11>)/sqrt2\"");
      sub->add_option("--init-dm", cfg.init_dm_path, "file holding the initial density matrix literal");
    }
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--tol-eig", cfg.tolerances.eig, "relative rank cut")->check(CLI::PositiveNumber);
    sub->add_option("--tol-member", cfg.tolerances.member, "subspace membership residual")->check(CLI::PositiveNumber);
    sub->add_option("--tol-norm", cfg.tolerances.norm, "normalisation tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-prob", cfg.tolerances.prob, "branch pruning probability")->check(CLI::PositiveNumber);
    sub->add_option("--tol-fp", cfg.tolerances.fp, "configuration equality tolerance")->check(CLI::PositiveNumber);
  };

  auto* check_cmd = app.add_subcommand("check", "check CTQL assertions against a model");
  common(check_cmd, true);
  check_cmd->add_option("--assert", cfg.assert_path, "assertion file (.ctql)")->required();
  check_cmd->add_option("--bound", cfg.bound, "exploration depth bound")->check(CLI::PositiveNumber);
  check_cmd->add_flag("--timings", cfg.timings, "include timings (makes output nondeterministic)");

  auto* reach_cmd = app.add_subcommand("reach", "reachable subspace of a single-location model");
  common(reach_cmd, true);
  reach_cmd->add_flag("--verify", cfg.verify, "cross-check the three reachability algorithms");
  reach_cmd->add_option("--random", cfg.random_qubits, "use a random channel on this many qubits")
      ->check(CLI::PositiveNumber);
  reach_cmd->add_option("--seed", cfg.seed, "seed for --random");

  auto* sim_cmd = app.add_subcommand("simulate", "print the branch tree");
  common(sim_cmd, true);
  sim_cmd->add_option("--depth", cfg.depth, "tree depth")->check(CLI::NonNegativeNumber);

  auto* fmt_cmd = app.add_subcommand("fmt", "print a model or assertion file canonically");
  fmt_cmd->add_option("--model", cfg.model_path, "model file");
  fmt_cmd->add_option("--assert", cfg.assert_path, "assertion file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 3;
  }

  cfg.json = format == "json";
  try {
    set_tolerances(cfg.tolerances);
    if (check_cmd->parsed()) return cmd_check(cfg, out);
    if (reach_cmd->parsed()) return cmd_reach(cfg, out);
    if (sim_cmd->parsed()) return cmd_simulate(cfg, out);
    return cmd_fmt(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qmc
