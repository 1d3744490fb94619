#include "bpmin/formula.hpp"

#include <algorithm>

namespace bpmin {

DeMorganFormula DeMorganFormula::literal(int n_vars, int var, bool negated) {
  if (var < 1 || var > n_vars)
    throw std::invalid_argument("literal: variable out of range");
  DeMorganFormula f(n_vars);
  f.root_ = f.add(Node{Kind::Leaf, var, negated, -1, -1});
  return f;
}

DeMorganFormula DeMorganFormula::gate(Kind kind, const DeMorganFormula& left,
                                      const DeMorganFormula& right) {
  if (kind == Kind::Leaf) throw std::invalid_argument("gate: kind must be And/Or");
  if (left.n_vars_ != right.n_vars_)
    throw std::invalid_argument("gate: variable counts differ");
  DeMorganFormula f(left.n_vars_);
  f.nodes_ = left.nodes_;
  const int offset = static_cast<int>(f.nodes_.size());
  for (Node n : right.nodes_) {
    if (n.kind != Kind::Leaf) {
      n.left += offset;
      n.right += offset;
    }
    f.nodes_.push_back(n);
  }
  f.root_ = f.add(Node{kind, 0, false, left.root_, right.root_ + offset});
  return f;
}

int DeMorganFormula::leaf_count() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) {
    return n.kind == Kind::Leaf;
  }));
}

bool DeMorganFormula::evaluate_packed(std::uint64_t input) const {
  // Nodes are appended children-first, so a forward pass suffices.
  std::vector<char> value(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.kind) {
      case Kind::Leaf: {
        bool bit = (input >> (n_vars_ - n.var)) & 1;
        value[i] = n.negated ? !bit : bit;
        break;
      }
      case Kind::And:
        value[i] = value[n.left] && value[n.right];
        break;
      case Kind::Or:
        value[i] = value[n.left] || value[n.right];
        break;
    }
  }
  return value[root_];
}

PartialTruthTable DeMorganFormula::truth_table() const {
  PartialTruthTable out(n_vars_);
  for (std::uint64_t idx = 0; idx < out.entries(); ++idx)
    out.set(idx, evaluate_packed(idx) ? Trit::One : Trit::Zero);
  return out;
}

std::vector<int> DeMorganFormula::occurrences() const {
  std::vector<int> count(n_vars_ + 1, 0);
  for (const Node& n : nodes_)
    if (n.kind == Kind::Leaf) ++count[n.var];
  return count;
}

namespace {

void print_node(const DeMorganFormula& f, int id, std::string& out) {
  const auto& n = f.node(id);
  if (n.kind == DeMorganFormula::Kind::Leaf) {
    if (n.negated) out += '~';
    out += 'x';
    out += std::to_string(n.var);
    return;
  }
  out += '(';
  print_node(f, n.left, out);
  out += n.kind == DeMorganFormula::Kind::And ? " & " : " | ";
  print_node(f, n.right, out);
  out += ')';
}

}  // namespace

std::string DeMorganFormula::to_string() const {
  std::string out;
  print_node(*this, root_, out);
  return out;
}

bool is_read_once_formula(const DeMorganFormula& f) {
  auto occ = f.occurrences();
  return std::all_of(occ.begin(), occ.end(), [](int c) { return c <= 1; });
}

namespace {

// Subtree translated to nodes in topological order; sink(0)/sink(1)
// stand for the subtree's 0/1 exits until the caller wires them.
struct OabpBuild {
  std::vector<BpNode> nodes;
};

OabpBuild build_oabp(const DeMorganFormula& f, int id) {
  const auto& n = f.node(id);
  if (n.kind == DeMorganFormula::Kind::Leaf) {
    OabpBuild b;
    EdgeTarget zero = EdgeTarget::sink(Trit::Zero), one = EdgeTarget::sink(Trit::One);
    b.nodes.push_back(n.negated ? BpNode{n.var, one, zero} : BpNode{n.var, zero, one});
    return b;
  }
  OabpBuild left = build_oabp(f, n.left);
  OabpBuild right = build_oabp(f, n.right);
  const int offset = static_cast<int>(left.nodes.size());
  // AND: left's 1-exits fall through to right; OR: left's 0-exits do.
  const Trit redirected =
      n.kind == DeMorganFormula::Kind::And ? Trit::One : Trit::Zero;
  for (BpNode& nd : left.nodes)
    for (EdgeTarget* t : {&nd.lo, &nd.hi})
      if (t->is_sink() && t->sink_value() == redirected)
        *t = EdgeTarget::node(offset);
  for (BpNode& nd : right.nodes)
    for (EdgeTarget* t : {&nd.lo, &nd.hi})
      if (t->is_node()) *t = EdgeTarget::node(t->node_id() + offset);
  left.nodes.insert(left.nodes.end(), right.nodes.begin(), right.nodes.end());
  return left;
}

}  // namespace

BranchingProgram formula_to_oabp(const DeMorganFormula& f) {
  if (!is_read_once_formula(f))
    throw std::invalid_argument("formula_to_oabp: formula is not read-once");
  OabpBuild b = build_oabp(f, f.root());
  return BranchingProgram(f.n_vars(), std::move(b.nodes));
}

}  // namespace bpmin
