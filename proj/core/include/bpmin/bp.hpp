#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bpmin {

/// Three-valued outcome: 0, 1, or undefined (*).
enum class Trit : std::uint8_t { Zero = 0, One = 1, Star = 2 };

char trit_to_char(Trit t);
Trit trit_from_char(char c);

/// Thrown when an input exceeds a documented enumeration/table cap.
class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown by the text-format parsers; message carries "<name>:<line>: ...".
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Destination of a branching-program edge: an inner node id or a sink.
class EdgeTarget {
public:
  EdgeTarget() : raw_(-1) {}
  static EdgeTarget node(int id) {
    if (id < 0) throw std::invalid_argument("EdgeTarget: negative node id");
    return EdgeTarget(id);
  }
  static EdgeTarget sink(Trit value) { return EdgeTarget(-1 - static_cast<int>(value)); }

  bool is_node() const { return raw_ >= 0; }
  bool is_sink() const { return raw_ < 0; }
  int node_id() const { return raw_; }
  Trit sink_value() const { return static_cast<Trit>(-1 - raw_); }

  auto operator<=>(const EdgeTarget&) const = default;

  std::string to_string() const;                 // "S0", "S1", "S*" or the node id
  static EdgeTarget parse(std::string_view text);

private:
  explicit EdgeTarget(int raw) : raw_(raw) {}
  std::int32_t raw_;
};

/// Inner node: queried variable (1-based) plus one target per input letter.
struct BpNode {
  int var = 0;
  EdgeTarget lo;  // taken when the variable reads 0
  EdgeTarget hi;  // taken when the variable reads 1

  bool operator==(const BpNode&) const = default;
};

/// Assignment of {0,1,unset} to variables 1..n_vars.
class PartialAssignment {
public:
  explicit PartialAssignment(int n_vars) : values_(n_vars, Trit::Star) {}

  int n_vars() const { return static_cast<int>(values_.size()); }
  Trit get(int var) const { return values_.at(var - 1); }
  void set(int var, Trit value) { values_.at(var - 1) = value; }
  bool is_assigned(int var) const { return get(var) != Trit::Star; }
  bool is_total() const;
  int assigned_count() const;
  std::vector<int> support() const;

  /// Union of two assignments with disjoint supports.
  PartialAssignment disjoint_union(const PartialAssignment& other) const;

  bool operator==(const PartialAssignment&) const = default;

private:
  std::vector<Trit> values_;
};

/// Length-2^n vector over {0,1,*}; variable 1 is the most significant index bit.
class PartialTruthTable {
public:
  PartialTruthTable(int n_vars, Trit fill = Trit::Star);

  int n_vars() const { return n_vars_; }
  std::uint64_t entries() const { return std::uint64_t{1} << n_vars_; }
  Trit at(std::uint64_t index) const { return values_[index]; }
  void set(std::uint64_t index, Trit value) { values_[index] = value; }

  bool is_total() const;
  std::uint64_t defined_count() const;

  /// Value of a specific variable inside a row index.
  static bool index_bit(std::uint64_t index, int var, int n_vars) {
    return (index >> (n_vars - var)) & 1;
  }

  /// Pointwise restriction: rows consistent with `alpha`, unassigned
  /// variables keep their relative order in the smaller table.
  PartialTruthTable restricted(const PartialAssignment& alpha) const;

  bool operator==(const PartialTruthTable&) const = default;

private:
  int n_vars_;
  std::vector<Trit> values_;
};

/// DAG of variable-labeled binary nodes stored in a topological order:
/// every edge goes to a higher-indexed node or a sink, node 0 is the source,
/// every node is reachable. A size-0 program is a lone sink.
class BranchingProgram {
public:
  /// Validates the canonical form; throws std::invalid_argument on violation.
  BranchingProgram(int n_vars, std::vector<BpNode> nodes);
  /// The source-is-a-sink degenerate program.
  static BranchingProgram constant(int n_vars, Trit value);

  int n_vars() const { return n_vars_; }
  const std::vector<BpNode>& nodes() const { return nodes_; }
  const BpNode& node(int id) const { return nodes_[id]; }
  /// Number of non-sink nodes.
  int size() const { return static_cast<int>(nodes_.size()); }
  bool is_constant() const { return nodes_.empty(); }
  Trit constant_value() const { return constant_; }

  /// True if some edge (or the constant) can produce *.
  bool uses_star() const;

  /// Follow the unique path for a packed input (variable 1 = MSB).
  Trit evaluate_packed(std::uint64_t input) const;
  /// Same for a total assignment.
  Trit evaluate(const PartialAssignment& assignment) const;

  bool operator==(const BranchingProgram&) const = default;

private:
  BranchingProgram() : n_vars_(0), constant_(Trit::Zero) {}
  int n_vars_;
  std::vector<BpNode> nodes_;
  Trit constant_ = Trit::Zero;  // meaningful only when nodes_ is empty
};

/// Exhaustive evaluation; `max_vars` caps the table size.
PartialTruthTable to_truth_table(const BranchingProgram& bp, int max_vars = 20);

/// B|_alpha: drop edges contradicting alpha, contract the agreeing ones,
/// prune unreachable nodes, renumber the surviving variables 1..n-k.
BranchingProgram restrict(const BranchingProgram& bp, const PartialAssignment& alpha);

/// Like restrict() but keeps the original variable space: assigned
/// variables simply disappear from the node list.
BranchingProgram restrict_keep_vars(const BranchingProgram& bp, const PartialAssignment& alpha);

struct ClassReport {
  bool is_oabp = false;                         // all node labels distinct
  int max_reads = 0;                            // read-k bound over all paths
  std::optional<std::vector<int>> obdd_order;   // present iff one order fits every edge
};

ClassReport classify(const BranchingProgram& bp);

/// True iff the program matches the table on every defined entry.
bool agrees_with_table(const BranchingProgram& bp, const PartialTruthTable& table);

// Text formats.
//   bp:  "bp n=<n> sinks=<2|3>" header; "const <S0|S1|S*>" for size-0 programs;
//        otherwise "<id> v=<var> 0=><target> 1=><target>" per node.
//   tt:  "tt n=<n>" header; one line of 2^n characters over "01*".
std::string serialize_bp(const BranchingProgram& bp);
BranchingProgram parse_bp(std::string_view text, std::string_view name = "<bp>");
std::string serialize_tt(const PartialTruthTable& table);
PartialTruthTable parse_tt(std::string_view text, std::string_view name = "<tt>");

}  // namespace bpmin
