#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpmin/bp.hpp"

namespace bpmin {

/// Binary tree of AND/OR gates over literals; negations live at the leaves.
class DeMorganFormula {
public:
  enum class Kind : std::uint8_t { Leaf, And, Or };

  struct Node {
    Kind kind = Kind::Leaf;
    int var = 0;           // leaves only, 1-based
    bool negated = false;  // leaves only
    int left = -1;         // gates only
    int right = -1;
  };

  static DeMorganFormula literal(int n_vars, int var, bool negated = false);
  static DeMorganFormula gate(Kind kind, const DeMorganFormula& left,
                              const DeMorganFormula& right);

  int n_vars() const { return n_vars_; }
  int root() const { return root_; }
  const Node& node(int id) const { return nodes_[id]; }
  int leaf_count() const;

  bool evaluate_packed(std::uint64_t input) const;  // variable 1 = MSB
  PartialTruthTable truth_table() const;

  /// Occurrence count per variable, indexed 1..n_vars.
  std::vector<int> occurrences() const;

  std::string to_string() const;  // e.g. "(x1 | (~x2 & x3))"

private:
  DeMorganFormula(int n_vars) : n_vars_(n_vars) {}
  int add(const Node& n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }
  int n_vars_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// True iff no variable occurs in more than one leaf.
bool is_read_once_formula(const DeMorganFormula& f);

/// Read-once formula to an equal branching program with one node per leaf
/// and all-distinct labels; throws std::invalid_argument if f is not
/// read-once.
BranchingProgram formula_to_oabp(const DeMorganFormula& f);

}  // namespace bpmin
