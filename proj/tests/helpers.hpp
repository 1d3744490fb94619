#pragma once

#include <random>
#include <vector>

#include "bpmin/bp.hpp"

namespace bpmin::testing {

// The three-variable multiplexer (y & x) | (z & ~x) as a decision tree:
// root x, x=1 -> y, x=0 -> z.
inline BranchingProgram mux_program() {
  std::vector<BpNode> nodes{
      BpNode{1, EdgeTarget::node(2), EdgeTarget::node(1)},
      BpNode{2, EdgeTarget::sink(Trit::Zero), EdgeTarget::sink(Trit::One)},
      BpNode{3, EdgeTarget::sink(Trit::Zero), EdgeTarget::sink(Trit::One)},
  };
  return BranchingProgram(3, std::move(nodes));
}

inline PartialTruthTable table_of(int n_vars, const char* bits) {
  PartialTruthTable t(n_vars);
  for (std::uint64_t i = 0; i < t.entries(); ++i) t.set(i, trit_from_char(bits[i]));
  return t;
}

// Random canonical program: a spanning parent edge keeps every node
// reachable, remaining edges go anywhere later (or to a sink).
inline BranchingProgram random_bp(std::mt19937& rng, int n_vars, int size,
                                  bool allow_star = false) {
  if (size == 0)
    return BranchingProgram::constant(
        n_vars, static_cast<Trit>(rng() % (allow_star ? 3 : 2)));
  std::vector<BpNode> nodes(size);
  std::vector<std::vector<int>> reserved(size);  // children hung below i
  for (int j = 1; j < size; ++j) {
    for (;;) {
      const int parent = static_cast<int>(rng() % j);
      if (static_cast<int>(reserved[parent].size()) < 2) {
        reserved[parent].push_back(j);
        break;
      }
    }
  }
  for (int i = 0; i < size; ++i) {
    auto random_target = [&]() {
      const int choices = (size - 1 - i) + (allow_star ? 3 : 2);
      const int pick = static_cast<int>(rng() % choices);
      if (pick < size - 1 - i) return EdgeTarget::node(i + 1 + pick);
      return EdgeTarget::sink(static_cast<Trit>(pick - (size - 1 - i)));
    };
    EdgeTarget lo = reserved[i].size() > 0 ? EdgeTarget::node(reserved[i][0])
                                           : random_target();
    EdgeTarget hi = reserved[i].size() > 1 ? EdgeTarget::node(reserved[i][1])
                                           : random_target();
    if (rng() % 2) std::swap(lo, hi);
    nodes[i] = BpNode{static_cast<int>(rng() % n_vars) + 1, lo, hi};
  }
  return BranchingProgram(n_vars, std::move(nodes));
}

inline PartialAssignment random_assignment(std::mt19937& rng, int n_vars,
                                           double assign_probability) {
  PartialAssignment a(n_vars);
  for (int v = 1; v <= n_vars; ++v)
    if (static_cast<double>(rng() % 1000) / 1000.0 < assign_probability)
      a.set(v, rng() % 2 ? Trit::One : Trit::Zero);
  return a;
}

}  // namespace bpmin::testing
