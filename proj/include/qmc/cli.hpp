#pragma once

// The `qmc` command line: check, reach, simulate and fmt.
//
// Exit codes: 0 every assertion holds, 1 some assertion fails, 2 some
// verdict is unknown (and none fails), 3 any error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmc/linalg.hpp"

namespace qmc {

struct RunConfig {
  std::string model_path;
  std::string assert_path;
  std::string init_ket;      // empty: |0...0>
  std::string init_dm_path;  // density-matrix literal file
  int bound = 64;
  int depth = 5;
  bool json = false;
  bool timings = false;
  bool verify = false;
  int random_qubits = 0;  // reach on a random channel instead of a model
  std::uint64_t seed = 1;
  Tolerances tolerances;
};

int cmd_check(const RunConfig& cfg, std::ostream& out);
int cmd_reach(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_fmt(const RunConfig& cfg, std::ostream& out);

/// Parses `args` (without the program name), runs the subcommand and maps
/// errors to exit code 3 with a diagnostic on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Ket-like text of a vector, e.g. "0.7071067812|00> + 0.7071067812|11>",
/// with the global phase fixed so the largest amplitude is real positive.
std::string format_ket(const CVector& v, int n_qubits);

}  // namespace qmc
