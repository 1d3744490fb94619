#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bpmin/bp.hpp"
#include "bpmin/formula.hpp"

namespace bpmin {

/// Limits for the backtracking searches. max_nodes_expanded is consumed per
/// top-level branch (first node's label and edges), which keeps verdicts
/// independent of thread scheduling; wall_clock_ms is a shared deadline and
/// is the only budget whose exhaustion can race.
struct SearchBudget {
  std::uint64_t max_nodes_expanded = UINT64_MAX;
  std::int64_t wall_clock_ms = INT64_MAX;
  int threads = 1;
};

enum class Verdict { Found, ExhaustedNo, Inconclusive };

struct SearchStats {
  std::uint64_t expanded = 0;
  std::uint64_t prunes = 0;
  std::int64_t elapsed_ms = 0;
};

struct BpSearchOutcome {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<BranchingProgram> witness;
  SearchStats stats;
};

struct FormulaSearchOutcome {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<DeMorganFormula> witness;
  SearchStats stats;
};

/// Streams every branching program with exactly `size` non-sink nodes in
/// reduced canonical form: nodes stored topologically, node 0 the source,
/// every node referenced from below, the two targets of a node distinct,
/// and the numbering lexicographically least among equivalent ones.
/// Size 0 yields the two constant programs. Caps: size <= 8, n_vars <= 6.
/// The visitor returns false to stop early.
void enumerate_bps(int n_vars, int size,
                   const std::function<bool(const BranchingProgram&)>& visit);

/// Least s such that some branching program of size s computes f exactly.
/// Requires a total table within the enumeration caps.
int min_bp_size(const PartialTruthTable& f);

/// Is there a branching program of size <= s agreeing with f on every
/// defined entry? Sizes are tried in increasing order; the witness
/// re-verifies before being returned. Sizes beyond the enumeration cap
/// make a negative answer Inconclusive rather than ExhaustedNo.
BpSearchOutcome mbpsp_star(const PartialTruthTable& f, int s,
                           const SearchBudget& budget = {});

/// Backtracking search for a once-appearance program (every variable
/// labels exactly one node) agreeing with the target on its domain. The
/// search space is exactly the n-node programs, which is complete whenever
/// every extension of the target is sensitive in all variables.
BpSearchOutcome oabp_search(const PartialTruthTable& target,
                            const SearchBudget& budget = {});

struct OabpEnumerationResult {
  bool complete = false;  // whole space visited within budget, not stopped
  SearchStats stats;
};

/// Exhaustive variant: calls the visitor on every agreeing once-appearance
/// program (false stops the enumeration).
OabpEnumerationResult oabp_enumerate(
    const PartialTruthTable& target, const SearchBudget& budget,
    const std::function<bool(const BranchingProgram&)>& on_witness);

/// Search over read-once DeMorgan formulas (on any variable subset) for one
/// agreeing with the target on its domain. Bottom-up over variable subsets
/// with memoized per-subset function sets. Cap n_vars <= 8 (n=8 is heavy:
/// tens of millions of subfunctions).
FormulaSearchOutcome read_once_formula_search(const PartialTruthTable& target,
                                              const SearchBudget& budget = {});

/// Exact deterministic decision-tree depth of a partial function: tables
/// with no 0s or no 1s cost 0, otherwise 1 + best split. Memoized over the
/// 3^n restriction lattice; cap n_vars <= 14.
int query_complexity(const PartialTruthTable& f);

struct ObddMinimizeResult {
  std::vector<int> order;  // variable order, first = root level
  int size = 0;            // reduced-OBDD node count under that order
};

/// Minimum reduced-OBDD size over all variable orders, by dynamic
/// programming over variable subsets counting distinct subfunctions.
/// Requires a total table; cap n_vars <= 12.
ObddMinimizeResult obdd_minimize(const PartialTruthTable& f);

}  // namespace bpmin
