#include "qmc/checker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <map>
#include <thread>
#include <unordered_map>

namespace qmc {

// ---- fingerprints -----------------------------------------------------------

std::string fingerprint(const CMatrix& rho) {
  const double scale = std::pow(10.0, tol().fp_decimals);
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::int64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(rho.rows());
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      const Complex z = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
      mix(std::llround(z.real() * scale));
      mix(std::llround(z.imag() * scale));
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool same_state(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol().fp;
}

// ---- graph construction -----------------------------------------------------

std::size_t ConfigurationGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

namespace {

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QMC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n) on up to `threads` threads.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F body) {
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct Expansion {
  std::vector<Successor> successors;
  std::vector<std::string> digests;
};

}  // namespace

ConfigurationGraph build_graph(const QuantumTransitionSystem& sys, const CMatrix& rho0,
                               const BuildOptions& options) {
  if (rho0.rows() != sys.dim() || rho0.cols() != sys.dim()) {
    throw DimensionMismatch("initial state does not match the register size");
  }
  require_density_matrix(rho0, true);
  if (options.bound < 0) throw BadParameter("exploration bound must be non-negative");
  const unsigned threads = worker_count(options.threads);

  ConfigurationGraph g;
  g.bound = options.bound;
  g.locations = sys.locations();
  g.nodes.push_back({Configuration{sys.initial(), rho0, 1.0}, fingerprint(rho0), 0, false});
  g.edges.emplace_back();

  std::unordered_map<std::string, std::vector<int>> index;
  auto key = [](int location, const std::string& digest) {
    return std::to_string(location) + ":" + digest;
  };
  if (options.dedup) index[key(sys.initial(), g.nodes[0].digest)].push_back(0);

  std::vector<int> layer{0};
  for (int depth = 0; !layer.empty(); ++depth) {
    if (depth >= options.bound) {
      g.closure = Closure::truncated;
      break;
    }
    std::vector<Expansion> work(layer.size());
    parallel_for(layer.size(), threads, [&](std::size_t i) {
      auto& w = work[i];
      w.successors = step(sys, g.nodes[static_cast<std::size_t>(layer[i])].config);
      for (const auto& s : w.successors) w.digests.push_back(fingerprint(s.config.state));
    });

    std::vector<int> next_layer;
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const int from = layer[i];
      g.nodes[static_cast<std::size_t>(from)].expanded = true;
      auto& w = work[i];
      if (w.successors.empty()) {
        g.edges[static_cast<std::size_t>(from)].push_back({from, 1.0, -1});
        continue;
      }
      for (std::size_t k = 0; k < w.successors.size(); ++k) {
        auto& s = w.successors[k];
        int target = -1;
        if (options.dedup) {
          auto& bucket = index[key(s.config.location, w.digests[k])];
          for (int candidate : bucket) {
            if (same_state(g.nodes[static_cast<std::size_t>(candidate)].config.state, s.config.state)) {
              target = candidate;
              break;
            }
          }
          if (target < 0) bucket.push_back(static_cast<int>(g.nodes.size()));
        }
        if (target < 0) {
          target = static_cast<int>(g.nodes.size());
          g.nodes.push_back({std::move(s.config), w.digests[k], depth + 1, false});
          g.edges.emplace_back();
          next_layer.push_back(target);
        }
        g.edges[static_cast<std::size_t>(from)].push_back({target, s.branch_probability, s.transition});
      }
    }
    layer = std::move(next_layer);
  }
  return g;
}

// ---- labelling --------------------------------------------------------------

namespace {

Truth negate(Truth t) {
  return t == Truth::yes ? Truth::no : t == Truth::no ? Truth::yes : Truth::unknown;
}

class Evaluator {
 public:
  Evaluator(const ConfigurationGraph& g, const Bindings& b) : g_(g), bindings_(b) {
    const Eigen::Index d = g.nodes.empty() ? 0 : g.nodes.front().config.state.rows();
    if (bindings_.dim != 0 && bindings_.dim != d) {
      throw DimensionMismatch("atom bindings do not match the register size");
    }
    supports_.reserve(g.nodes.size());
    for (const auto& n : g.nodes) supports_.push_back(support(n.config.state));
    dim_ = d;
  }

  const std::vector<Truth>& values(const StateFormula& f) {
    auto it = memo_.find(&f);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(&f, compute(f)).first->second;
  }

  std::size_t size() const { return g_.nodes.size(); }
  const ConfigurationGraph& graph() const { return g_; }

 private:
  const ConfigurationGraph& g_;
  const Bindings& bindings_;
  Eigen::Index dim_ = 0;
  std::vector<Subspace> supports_;
  std::map<const StateFormula*, std::vector<Truth>> memo_;

  std::vector<Truth> compute(const StateFormula& f) {
    const std::size_t n = size();
    std::vector<Truth> out(n, Truth::unknown);
    switch (f.kind) {
      case StateFormula::Kind::prop: {
        Bindings b = bindings_;
        if (b.dim == 0) b.dim = dim_;
        const Subspace s = eval_prop(*f.prop, b);
        for (std::size_t i = 0; i < n; ++i) out[i] = contains(s, supports_[i]) ? Truth::yes : Truth::no;
        return out;
      }
      case StateFormula::Kind::negation: {
        const auto& v = values(*f.lhs);
        for (std::size_t i = 0; i < n; ++i) out[i] = negate(v[i]);
        return out;
      }
      case StateFormula::Kind::conjunction: {
        const auto& a = values(*f.lhs);
        const auto& b = values(*f.rhs);
        for (std::size_t i = 0; i < n; ++i) out[i] = std::min(a[i], b[i]);
        return out;
      }
      case StateFormula::Kind::exists:
      case StateFormula::Kind::forall: {
        const bool universal = f.kind == StateFormula::Kind::forall;
        const PathFormula& p = *f.path;
        if (p.kind == PathFormula::Kind::next) return next(values(*p.rhs), universal);
        return until(values(*p.lhs), values(*p.rhs), universal);
      }
    }
    return out;
  }

  std::vector<Truth> next(const std::vector<Truth>& v, bool universal) const {
    std::vector<Truth> out(size(), Truth::unknown);
    for (std::size_t i = 0; i < size(); ++i) {
      if (!g_.nodes[i].expanded) continue;
      Truth acc = universal ? Truth::yes : Truth::no;
      for (const auto& e : g_.edges[i]) {
        const Truth t = v[static_cast<std::size_t>(e.to)];
        acc = universal ? std::min(acc, t) : std::max(acc, t);
      }
      out[i] = acc;
    }
    return out;
  }

  // Least fixed point of Z = base | (step & expanded-successor condition),
  // with frontier nodes counted as satisfying the successor condition when
  // `frontier_passes` is set.
  std::vector<char> lfp(const std::vector<char>& base, const std::vector<char>& step, bool universal,
                        bool frontier_passes) const {
    std::vector<char> z = base;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < size(); ++i) {
        if (z[i] || !step[i]) continue;
        bool ok;
        if (!g_.nodes[i].expanded) {
          ok = frontier_passes;
        } else if (universal) {
          ok = std::all_of(g_.edges[i].begin(), g_.edges[i].end(),
                           [&](const GraphEdge& e) { return z[static_cast<std::size_t>(e.to)] != 0; });
        } else {
          ok = std::any_of(g_.edges[i].begin(), g_.edges[i].end(),
                           [&](const GraphEdge& e) { return z[static_cast<std::size_t>(e.to)] != 0; });
        }
        if (ok) {
          z[i] = 1;
          changed = true;
        }
      }
    }
    return z;
  }

  std::vector<Truth> until(const std::vector<Truth>& a, const std::vector<Truth>& b, bool universal) const {
    const std::size_t n = size();
    std::vector<char> b_yes(n), a_yes(n), b_maybe(n), a_maybe(n);
    for (std::size_t i = 0; i < n; ++i) {
      b_yes[i] = b[i] == Truth::yes;
      a_yes[i] = a[i] == Truth::yes;
      b_maybe[i] = b[i] != Truth::no;
      a_maybe[i] = a[i] != Truth::no;
    }
    const auto definitely = lfp(b_yes, a_yes, universal, false);
    const auto possibly = lfp(b_maybe, a_maybe, universal, true);
    std::vector<Truth> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = definitely[i] ? Truth::yes : possibly[i] ? Truth::unknown : Truth::no;
    }
    return out;
  }
};

// ---- traces -----------------------------------------------------------------

class Explainer {
 public:
  explicit Explainer(Evaluator& ev) : ev_(ev), g_(ev.graph()) {}

  // Node path (and optional loop start) demonstrating that `f` has value
  // `wanted` at `node`.
  struct Path {
    std::vector<int> nodes;
    std::optional<std::size_t> loop_back;
  };

  Path explain(int node, const StateFormula& f, bool wanted) {
    const Truth expected = wanted ? Truth::yes : Truth::no;
    if (ev_.values(f)[static_cast<std::size_t>(node)] != expected) {
      throw NoTraceAvailable("the formula does not have the requested value");
    }
    switch (f.kind) {
      case StateFormula::Kind::prop:
        return {{node}, std::nullopt};
      case StateFormula::Kind::negation:
        return explain(node, *f.lhs, !wanted);
      case StateFormula::Kind::conjunction: {
        if (wanted) throw NoTraceAvailable("no single path witnesses a conjunction");
        const auto& l = ev_.values(*f.lhs);
        return explain(node, l[static_cast<std::size_t>(node)] == Truth::no ? *f.lhs : *f.rhs, false);
      }
      case StateFormula::Kind::exists:
      case StateFormula::Kind::forall:
        break;
    }
    const bool universal = f.kind == StateFormula::Kind::forall;
    if (universal == wanted) {
      throw NoTraceAvailable(universal ? "a holding universal formula has no finite witness"
                                       : "a failing existential formula has no finite counterexample");
    }
    const PathFormula& p = *f.path;
    // Existential witness (wanted true) or universal counterexample (wanted
    // false): both are a single path; for the latter we look for a path
    // along which the body is definitely false.
    if (p.kind == PathFormula::Kind::next) {
      const auto& v = ev_.values(*p.rhs);
      for (const auto& e : g_.edges[static_cast<std::size_t>(node)]) {
        if (v[static_cast<std::size_t>(e.to)] == expected) return extend({node}, e.to, *p.rhs, wanted);
      }
      throw NoTraceAvailable("no successor decides the next-step formula");
    }
    return wanted ? until_witness(node, p) : until_counterexample(node, f);
  }

 private:
  Evaluator& ev_;
  const ConfigurationGraph& g_;

  // prefix + explanation of `f` at `target` (just `target` if none exists).
  Path extend(std::vector<int> prefix, int target, const StateFormula& f, bool wanted) {
    Path tail;
    try {
      tail = explain(target, f, wanted);
    } catch (const NoTraceAvailable&) {
      tail = {{target}, std::nullopt};
    }
    Path out{std::move(prefix), std::nullopt};
    if (tail.loop_back) out.loop_back = *tail.loop_back + out.nodes.size();
    out.nodes.insert(out.nodes.end(), tail.nodes.begin(), tail.nodes.end());
    return out;
  }

  // Shortest path from `from` through nodes satisfying `through` (which must
  // be expanded) to a node satisfying `target`.
  template <class Through, class Target>
  std::optional<std::vector<int>> shortest(int from, Through through, Target target) const {
    std::vector<int> parent(g_.nodes.size(), -2);
    std::deque<int> queue{from};
    parent[static_cast<std::size_t>(from)] = -1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      if (target(u)) {
        std::vector<int> path;
        for (int x = u; x >= 0; x = parent[static_cast<std::size_t>(x)]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (!through(u) || !g_.nodes[static_cast<std::size_t>(u)].expanded) continue;
      for (const auto& e : g_.edges[static_cast<std::size_t>(u)]) {
        if (parent[static_cast<std::size_t>(e.to)] != -2) continue;
        parent[static_cast<std::size_t>(e.to)] = u;
        queue.push_back(e.to);
      }
    }
    return std::nullopt;
  }

  Path until_witness(int node, const PathFormula& p) {
    const auto& a = ev_.values(*p.lhs);
    const auto& b = ev_.values(*p.rhs);
    auto path = shortest(
        node, [&](int u) { return a[static_cast<std::size_t>(u)] == Truth::yes; },
        [&](int u) { return b[static_cast<std::size_t>(u)] == Truth::yes; });
    if (!path) throw NoTraceAvailable("no until witness in the explored graph");
    const int last = path->back();
    path->pop_back();
    return extend(std::move(*path), last, *p.rhs, true);
  }

  // The node violates A(a U b): b is false along a path that either reaches
  // a node where a is false too, or cycles forever.
  Path until_counterexample(int node, const StateFormula& f) {
    const PathFormula& p = *f.path;
    const auto& a = ev_.values(*p.lhs);
    const auto& b = ev_.values(*p.rhs);
    const auto& self = ev_.values(f);
    auto refuted = [&](int u) { return self[static_cast<std::size_t>(u)] == Truth::no; };
    auto path = shortest(
        node, refuted,
        [&](int u) { return b[static_cast<std::size_t>(u)] == Truth::no && a[static_cast<std::size_t>(u)] == Truth::no; });
    if (path) {
      const int last = path->back();
      path->pop_back();
      return extend(std::move(*path), last, *p.lhs, false);
    }
    // Lasso: every refuted node with a true has a refuted successor.
    std::vector<int> nodes;
    std::map<int, std::size_t> seen;
    for (int u = node;;) {
      if (auto it = seen.find(u); it != seen.end()) return {nodes, it->second};
      seen[u] = nodes.size();
      nodes.push_back(u);
      int next = -1;
      for (const auto& e : g_.edges[static_cast<std::size_t>(u)]) {
        if (refuted(e.to)) {
          next = e.to;
          break;
        }
      }
      if (next < 0) throw NoTraceAvailable("counterexample leaves the explored graph");
      u = next;
    }
  }

};

Trace to_trace(const ConfigurationGraph& g, const Explainer::Path& path) {
  Trace t;
  t.loop_back = path.loop_back;
  double prob = 1.0;
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    const int u = path.nodes[k];
    if (k > 0) {
      const int prev = path.nodes[k - 1];
      for (const auto& e : g.edges[static_cast<std::size_t>(prev)]) {
        if (e.to == u) {
          prob *= e.probability;
          break;
        }
      }
    }
    const auto& node = g.nodes[static_cast<std::size_t>(u)];
    t.steps.push_back({u, g.locations[static_cast<std::size_t>(node.config.location)], prob, node.digest});
  }
  return t;
}

}  // namespace

std::vector<Truth> evaluate(const ConfigurationGraph& g, const StateFormula& f, const Bindings& bindings) {
  require_bound(f, bindings);
  Evaluator ev(g, bindings);
  return ev.values(f);
}

Trace extract_trace(const ConfigurationGraph& g, const StateFormula& f, const Bindings& bindings,
                    VerdictKind kind) {
  if (kind == VerdictKind::unknown) throw NoTraceAvailable("an unknown verdict has no trace");
  require_bound(f, bindings);
  Evaluator ev(g, bindings);
  Explainer ex(ev);
  return to_trace(g, ex.explain(0, f, kind == VerdictKind::holds));
}

Verdict check(const ConfigurationGraph& g, const StateFormula& f, const Bindings& bindings) {
  require_bound(f, bindings);
  Evaluator ev(g, bindings);
  const Truth t = ev.values(f)[0];
  Verdict v{t == Truth::yes ? VerdictKind::holds : t == Truth::no ? VerdictKind::fails : VerdictKind::unknown,
            g.closure, g.bound, g.nodes.size(), g.edge_count(), std::nullopt};
  if (v.result != VerdictKind::unknown) {
    Explainer ex(ev);
    try {
      v.trace = to_trace(g, ex.explain(0, f, v.result == VerdictKind::holds));
    } catch (const NoTraceAvailable&) {
    }
  }
  return v;
}

Verdict check(const QuantumTransitionSystem& sys, const CMatrix& rho0, const StateFormula& f,
              const Bindings& bindings, int bound) {
  require_bound(f, bindings);
  BuildOptions options;
  options.bound = bound;
  return check(build_graph(sys, rho0, options), f, bindings);
}

std::vector<SimulationNode> simulate(const QuantumTransitionSystem& sys, const CMatrix& rho0, int depth) {
  if (rho0.rows() != sys.dim() || rho0.cols() != sys.dim()) {
    throw DimensionMismatch("initial state does not match the register size");
  }
  require_density_matrix(rho0, true);
  if (depth < 0) throw BadParameter("simulation depth must be non-negative");
  std::vector<SimulationNode> out{{-1, 0, -1, Configuration{sys.initial(), rho0, 1.0}}};
  std::size_t begin = 0;
  for (int d = 0; d < depth; ++d) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (auto& s : step(sys, out[i].config)) {
        out.push_back({static_cast<int>(i), d + 1, s.transition, std::move(s.config)});
      }
    }
    begin = end;
  }
  return out;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::holds: return "holds";
    case VerdictKind::fails: return "fails";
    case VerdictKind::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Closure c) { return c == Closure::complete ? "complete" : "truncated"; }

}  // namespace qmc
