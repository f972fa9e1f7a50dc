#pragma once

// CTQL model checking over the configuration graph of a quantum transition
// system: breadth-first exploration with state deduplication, then a
// three-valued CTL labelling that stays sound on truncated graphs.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qmc/logic.hpp"
#include "qmc/qts.hpp"

namespace qmc {

/// Hex digest of a density matrix: entries of (rho + rho^dag)/2 rounded to
/// tol().fp_decimals places, hashed with FNV-1a.
std::string fingerprint(const CMatrix& rho);
/// Entrywise agreement within tol().fp.
bool same_state(const CMatrix& a, const CMatrix& b);

enum class Closure { complete, truncated };

struct GraphNode {
  Configuration config;
  std::string digest;
  int depth;
  bool expanded = false;  // successors computed; false marks the frontier
};

struct GraphEdge {
  int to;
  double probability;  // branch probability tr(E(rho))
  int transition;      // -1 for the stutter step of a dead end
};

struct ConfigurationGraph {
  std::vector<GraphNode> nodes;        // nodes[0] is the root
  std::vector<std::vector<GraphEdge>> edges;  // per node, in transition order
  std::vector<std::string> locations;  // names, indexed by Configuration::location
  Closure closure = Closure::complete;
  int bound = 0;

  std::size_t edge_count() const;
};

struct BuildOptions {
  int bound = 64;
  bool dedup = true;
  /// Worker threads for successor computation; 0 reads QMC_THREADS, falling
  /// back to the hardware concurrency.
  unsigned threads = 0;
};

/// Nodes discovered at depth < bound are expanded. Dead ends (no successor
/// with non-negligible probability) get a stutter self-edge so that every
/// path is infinite. The node order is BFS discovery order and does not
/// depend on the thread count.
ConfigurationGraph build_graph(const QuantumTransitionSystem& sys, const CMatrix& rho0,
                               const BuildOptions& options = {});

enum class Truth { no, unknown, yes };

/// Truth value of `f` at every node. Frontier nodes are unknown for next
/// and until operators unless the explored part already decides them.
std::vector<Truth> evaluate(const ConfigurationGraph& g, const StateFormula& f,
                            const Bindings& bindings);

enum class VerdictKind { holds, fails, unknown };

struct TraceStep {
  int node;
  std::string location;
  double probability;  // product of branch probabilities from the root
  std::string digest;
};

struct Trace {
  std::vector<TraceStep> steps;
  /// For an infinite counterexample: the path continues from the last step
  /// back to steps[*loop_back].
  std::optional<std::size_t> loop_back;

  /// Number of transitions taken.
  std::size_t length() const { return steps.empty() ? 0 : steps.size() - 1; }
};

struct Verdict {
  VerdictKind result;
  Closure closure;
  int bound;
  std::size_t nodes;
  std::size_t edges;
  std::optional<Trace> trace;
};

/// Witness for a holding formula or counterexample for a failing one,
/// starting at the root. Throws NoTraceAvailable when `kind` is unknown,
/// does not match the formula's value, or no finite evidence exists
/// (e.g. a holding universal formula).
Trace extract_trace(const ConfigurationGraph& g, const StateFormula& f, const Bindings& bindings,
                    VerdictKind kind);

Verdict check(const ConfigurationGraph& g, const StateFormula& f, const Bindings& bindings);
Verdict check(const QuantumTransitionSystem& sys, const CMatrix& rho0, const StateFormula& f,
              const Bindings& bindings, int bound = 64);

/// Unmerged branch tree to `depth`; children follow their parent.
struct SimulationNode {
  int parent;  // -1 for the root
  int depth;
  int transition;
  Configuration config;
};
std::vector<SimulationNode> simulate(const QuantumTransitionSystem& sys, const CMatrix& rho0,
                                     int depth);

const char* to_string(VerdictKind k);
const char* to_string(Closure c);

}  // namespace qmc
