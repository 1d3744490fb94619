#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "bpmin/bp.hpp"
#include "bpmin/bpis.hpp"

namespace bpmin {

struct Lit {
  int var = 0;
  bool negated = false;
  bool operator==(const Lit&) const = default;
};

/// 3-CNF in which every variable occurs in at most 4 clauses.
class Cnf34 {
public:
  Cnf34(int n_vars, std::vector<std::array<Lit, 3>> clauses);

  int n_vars() const { return n_vars_; }
  const std::vector<std::array<Lit, 3>>& clauses() const { return clauses_; }

  bool evaluate_packed(std::uint64_t input) const;  // variable 1 = MSB

private:
  int n_vars_;
  std::vector<std::array<Lit, 3>> clauses_;
};

/// Two-pass layered program computing the graph's gamma function exactly
/// (0/1 on its domain, * elsewhere): pass one narrows the input to one of
/// the six named patterns or "none", pass two decodes the per-half unit
/// chunks and tests the edge set. Every variable is read at most twice on
/// a path.
BranchingProgram encode_gamma_2bp(const BpisInstance& g);

/// Clause-chained program computing the negation of phi: inside a clause
/// each falsified literal advances, the last one accepts; satisfied
/// literals skip to the next clause. If phi(0^n)=1 the one-node program
/// for the first input bit is returned instead.
BranchingProgram sat_to_bp(const Cnf34& phi);

/// Standard DIMACS CNF; rejects non-3 clauses, out-of-range literals, and
/// variables occurring in more than 4 clauses, with located diagnostics.
Cnf34 parse_dimacs(std::string_view text, std::string_view name = "<cnf>");

}  // namespace bpmin
