#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpmin/bp.hpp"
#include "bpmin/bpis.hpp"

namespace bpmin {

// A gamma input is three n-bit blocks (x, y, z). Block variable i sits at
// bit (n - i) of its word, so the 3n-variable table index is
// (x << 2n) | (y << n) | z with x_1 as the most significant bit overall.

/// Packs an MSB-first bit string (leftmost character = variable 1).
std::uint32_t pack_bits(std::string_view s);
std::string unpack_bits(std::uint32_t bits, int n);

constexpr int gamma_x_var(int /*n*/, int i) { return i; }
constexpr int gamma_y_var(int n, int i) { return n + i; }
constexpr int gamma_z_var(int n, int i) { return 2 * n + i; }

constexpr std::uint64_t pack_xyz(int n, std::uint32_t x, std::uint32_t y,
                                 std::uint32_t z) {
  return (std::uint64_t{x} << (2 * n)) | (std::uint64_t{y} << n) | z;
}

enum class GammaCase : std::uint8_t {
  Star = 0,
  XZero = 1,
  XOne = 2,
  ZOne = 3,
  ZZero = 4,
  Y0ZHigh = 5,
  Y0ZLow = 6,
  Edge = 7,
};

std::string gamma_case_name(GammaCase c);

struct GammaEval {
  Trit value = Trit::Star;
  GammaCase matched = GammaCase::Star;
};

/// Case evaluation in listed order (1)-(7), first match wins; star if none.
/// Requires a valid instance with n >= 4 (at n=2 the edge case collides
/// with case (1) under a conflicting value).
GammaEval gamma_eval(const BpisInstance& g, std::uint32_t x, std::uint32_t y,
                     std::uint32_t z);
Trit gamma_value(const BpisInstance& g, std::uint32_t x, std::uint32_t y,
                 std::uint32_t z);

/// Graph-independent restriction to cases (1)-(4); any n >= 1.
GammaEval gamma_prime_eval(int n, std::uint32_t x, std::uint32_t y, std::uint32_t z);
Trit gamma_prime_value(int n, std::uint32_t x, std::uint32_t y, std::uint32_t z);

struct Reduction {
  PartialTruthTable table;
  int bp_size_budget = 0;           // 3n non-sink nodes
  int formula_gate_budget = 0;      // companion 3n-1 gate count, metadata only
};

/// Full 2^{3n} table of the graph's gamma function. Cap n <= 6.
Reduction reduce(const BpisInstance& g);

/// Truth table of the graph-independent gamma restriction on 3n variables.
PartialTruthTable gamma_prime_table(int n);

/// Chain of n three-node blocks, block i computing (x_{pi(i)} | y_i) & z_i,
/// joined disjunctively. Total function extends the gamma restriction; for
/// an independent half-permutation it extends the graph's gamma function.
BranchingProgram canonical_oabp_from_permutation(int n, const HalfPermutationPair& p);

/// Same chain for an arbitrary permutation of [n] (the graph-independent
/// restriction does not constrain the halves). pi[i-1] is the x-index of
/// block i.
BranchingProgram gamma_prime_chain(int n, const std::vector<int>& pi);

/// Target a structure check runs against.
struct GammaTarget {
  int n = 0;
  std::optional<BpisInstance> graph;  // absent: the (1)-(4) restriction

  static GammaTarget prime(int n) { return GammaTarget{n, std::nullopt}; }
  static GammaTarget of_graph(BpisInstance g);
  PartialTruthTable table() const;
};

struct Triplet {
  int x_index = 0;   // a in {x_a, y_b, z_b}
  int yz_index = 0;  // b
  bool operator==(const Triplet&) const = default;
};

struct StructureViolation {
  std::string lemma;   // "order", "or-of-ands", "z-one-chain", "z-zero", ...
  std::string detail;
};

struct StructureReport {
  std::optional<std::vector<Triplet>> triplets;
  std::optional<std::vector<int>> pi;  // pi[b-1] = a
  std::optional<HalfPermutationPair> defined_permutation;
  std::vector<StructureViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Reads the permutation off the stored topological order. Throws
/// std::invalid_argument if B is not an oaBP on 3n variables or disagrees
/// with the target on its domain; a failed decomposition is reported as an
/// "order" violation instead.
StructureReport extract_defined_permutation(const BranchingProgram& b,
                                            const GammaTarget& target);

/// Full structural validation: restriction shapes for x=0^n / z=1^n / z=0^n,
/// triplet order, half preservation and independence (graph targets), and
/// the two-ones property over all 1-paths. Same preconditions as
/// extract_defined_permutation.
StructureReport check_structural_lemmas(const BranchingProgram& b,
                                        const GammaTarget& target);

// Shape validators, also usable standalone (no semantic precondition).

/// B over 2*pairs variables (var i paired with var pairs+i) must be the
/// alternating two-node-per-pair path computing the OR of pairwise ANDs.
std::optional<std::string> validate_or_of_ands_path(const BranchingProgram& b, int pairs);

/// B must be a single path through all its nodes: 0-edges advance (last one
/// to the 0-sink), 1-edges go to the 1-sink.
std::optional<std::string> validate_zero_chain(const BranchingProgram& b);

/// Every source-to-1-sink path must set at least two variables of the
/// triplet it exits from to 1. Requires a clean triplet decomposition.
std::optional<std::string> validate_two_ones(const BranchingProgram& b, int n);

}  // namespace bpmin
