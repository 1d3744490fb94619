#include "bpmin/encoders.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bpmin {

Cnf34::Cnf34(int n_vars, std::vector<std::array<Lit, 3>> clauses)
    : n_vars_(n_vars), clauses_(std::move(clauses)) {
  if (n_vars < 1) throw std::invalid_argument("Cnf34: need at least one variable");
  std::vector<int> occurrences(n_vars + 1, 0);
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    for (const Lit& l : clauses_[c]) {
      if (l.var < 1 || l.var > n_vars)
        throw std::invalid_argument("Cnf34: clause " + std::to_string(c + 1) +
                                    " uses variable " + std::to_string(l.var) +
                                    " outside 1.." + std::to_string(n_vars));
      ++occurrences[l.var];
    }
  }
  for (int v = 1; v <= n_vars; ++v)
    if (occurrences[v] > 4)
      throw std::invalid_argument("Cnf34: variable " + std::to_string(v) +
                                  " occurs " + std::to_string(occurrences[v]) +
                                  " times (limit 4)");
}

bool Cnf34::evaluate_packed(std::uint64_t input) const {
  for (const auto& clause : clauses_) {
    bool sat = false;
    for (const Lit& l : clause) {
      const bool bit = (input >> (n_vars_ - l.var)) & 1;
      if (bit != l.negated) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

namespace {

// ---- encode_gamma_2bp ------------------------------------------------
//
// Node space, in emission order (all edges point strictly forward):
//   group 0: pass-1 pattern tracking, levels 0..3n-1, state = 6 alive bits
//   groups 1..5: the per-pattern value chains (OR-of-ANDs, OR(z), OR(x|y),
//                OR over the first / second half of x)
//   group 6: pass-2 chunk decoding, levels 0..3n-1
// Pattern bits: 1 x=0^n, 2 x=1^n, 4 z=1^n, 8 z=0^n, 16 z=1^h 0^h & y=0^n,
// 32 z=0^h 1^h & y=0^n.

struct NodeRef {
  int group = 0;
  int level = 0;
  std::uint32_t state = 0;
  auto operator<=>(const NodeRef&) const = default;
};

enum class VarKind { X, Y, Z };

struct VarAt {
  VarKind kind;
  int i;  // 1-based within the block
};

VarAt var_at(int t) {  // t = 0..3n-1 in the x1,y1,z1,... order
  const int i = t / 3 + 1;
  switch (t % 3) {
    case 0: return {VarKind::X, i};
    case 1: return {VarKind::Y, i};
    default: return {VarKind::Z, i};
  }
}

int var_number(int n, VarAt v) {
  switch (v.kind) {
    case VarKind::X: return v.i;
    case VarKind::Y: return n + v.i;
    case VarKind::Z: return 2 * n + v.i;
  }
  return 0;
}

// Pass-2 state: current-half single-zero position of x and single-one
// position of z (0 = none yet), plus the locked first-half (k, j).
struct Pass2State {
  int k = 0, j = 0, curx = 0, curz = 0;
  std::uint32_t pack() const {
    return static_cast<std::uint32_t>(k) | (static_cast<std::uint32_t>(j) << 8) |
           (static_cast<std::uint32_t>(curx) << 16) |
           (static_cast<std::uint32_t>(curz) << 24);
  }
  static Pass2State unpack(std::uint32_t s) {
    return Pass2State{static_cast<int>(s & 0xff), static_cast<int>((s >> 8) & 0xff),
                      static_cast<int>((s >> 16) & 0xff),
                      static_cast<int>((s >> 24) & 0xff)};
  }
};

struct Builder {
  const BpisInstance& g;
  int n, h;
  std::map<NodeRef, int> ids;       // discovery registry
  std::vector<NodeRef> pending;     // BFS queue
  std::map<NodeRef, std::pair<NodeRef, NodeRef>> node_edges;  // symbolic lo/hi
  std::map<NodeRef, EdgeTarget> sink_lo, sink_hi;             // resolved sinks

  // Sinks are encoded as group -1 with state 0/1/2.
  static NodeRef sink(Trit t) { return NodeRef{-1, 0, static_cast<std::uint32_t>(t)}; }
  static bool is_sink(const NodeRef& r) { return r.group < 0; }

  explicit Builder(const BpisInstance& graph) : g(graph), n(graph.n()), h(graph.n() / 2) {}

  void reach(const NodeRef& r) {
    if (is_sink(r)) return;
    if (ids.emplace(r, 0).second) pending.push_back(r);
  }

  NodeRef merge_target(std::uint32_t mask) const {
    if (mask & 1) return NodeRef{1, 0, 0};
    if (mask & 2) return NodeRef{2, 0, 0};
    if (mask & 4) return NodeRef{3, 0, 0};
    if (mask & 8) return sink(Trit::Zero);
    if (mask & 16) return NodeRef{4, 0, 0};
    if (mask & 32) return NodeRef{5, 0, 0};
    return NodeRef{6, 0, Pass2State{}.pack()};
  }

  std::uint32_t pass1_step(std::uint32_t mask, int t, bool bit) const {
    const VarAt v = var_at(t);
    std::uint32_t out = mask;
    switch (v.kind) {
      case VarKind::X:
        if (bit) out &= ~1u; else out &= ~2u;
        break;
      case VarKind::Y:
        if (bit) out &= ~(16u | 32u);
        break;
      case VarKind::Z:
        if (bit) out &= ~8u; else out &= ~4u;
        if (bit != (v.i <= h)) out &= ~16u;
        if (bit != (v.i > h)) out &= ~32u;
        break;
    }
    return out;
  }

  NodeRef pass1_next(std::uint32_t mask, int t, bool bit) const {
    const std::uint32_t next = pass1_step(mask, t, bit);
    if (t + 1 == 3 * n) return merge_target(next);
    return NodeRef{0, t + 1, next};
  }

  // The value chains; `pos` indexes the chain's own read sequence.
  std::pair<NodeRef, NodeRef> chain_edges(int group, int pos) const {
    const NodeRef s0 = sink(Trit::Zero), s1 = sink(Trit::One);
    switch (group) {
      case 1: {  // OR of y_i & z_i, nodes y_1,z_1,..,y_n,z_n
        const bool is_y = pos % 2 == 0;
        const int i = pos / 2 + 1;
        const NodeRef skip = i < n ? NodeRef{1, pos + (is_y ? 2 : 1), 0} : s0;
        if (is_y) return {skip, NodeRef{1, pos + 1, 0}};
        return {skip, s1};
      }
      case 2: {  // OR of z_i
        const NodeRef next = pos + 1 < n ? NodeRef{2, pos + 1, 0} : s0;
        return {next, s1};
      }
      case 3: {  // OR of x_i | y_i, nodes x_1,y_1,..,x_n,y_n
        const NodeRef next = pos + 1 < 2 * n ? NodeRef{3, pos + 1, 0} : s0;
        return {next, s1};
      }
      case 4: {  // OR of x_1..x_h
        const NodeRef next = pos + 1 < h ? NodeRef{4, pos + 1, 0} : s0;
        return {next, s1};
      }
      case 5: {  // OR of x_{h+1}..x_n
        const NodeRef next = pos + 1 < h ? NodeRef{5, pos + 1, 0} : s0;
        return {next, s1};
      }
      default:
        throw std::logic_error("chain_edges: bad group");
    }
  }

  int chain_var(int group, int pos) const {
    switch (group) {
      case 1: return var_number(n, {pos % 2 == 0 ? VarKind::Y : VarKind::Z, pos / 2 + 1});
      case 2: return var_number(n, {VarKind::Z, pos + 1});
      case 3: return var_number(n, {pos % 2 == 0 ? VarKind::X : VarKind::Y, pos / 2 + 1});
      case 4: return var_number(n, {VarKind::X, pos + 1});
      case 5: return var_number(n, {VarKind::X, h + pos + 1});
      default: throw std::logic_error("chain_var: bad group");
    }
  }

  NodeRef pass2_next(std::uint32_t packed, int t, bool bit) const {
    Pass2State s = Pass2State::unpack(packed);
    const VarAt v = var_at(t);
    const int pos_in_half = v.i <= h ? v.i : v.i - h;
    switch (v.kind) {
      case VarKind::X:
        if (!bit) {
          if (s.curx) return sink(Trit::Star);
          s.curx = pos_in_half;
        }
        break;
      case VarKind::Y:
        if (bit) return sink(Trit::Star);
        break;
      case VarKind::Z:
        if (bit) {
          if (s.curz) return sink(Trit::Star);
          s.curz = pos_in_half;
        }
        break;
    }
    // Completing z_h locks (k, j); completing z_n resolves the edge test.
    if (var_at(t).kind == VarKind::Z && v.i == h) {
      if (!s.curx || !s.curz) return sink(Trit::Star);
      s.k = s.curx;
      s.j = s.curz;
      s.curx = s.curz = 0;
    }
    if (t + 1 == 3 * n) {
      if (!s.curx || !s.curz) return sink(Trit::Star);
      const bool hit = g.has_edge(GridVertex{s.j, s.k}, GridVertex{h + s.curz, h + s.curx});
      return sink(hit ? Trit::One : Trit::Star);
    }
    return NodeRef{6, t + 1, s.pack()};
  }

  BranchingProgram build() {
    const NodeRef root{0, 0, 63};
    reach(root);
    for (std::size_t q = 0; q < pending.size(); ++q) {
      const NodeRef r = pending[q];
      NodeRef lo, hi;
      if (r.group == 0) {
        lo = pass1_next(r.state, r.level, false);
        hi = pass1_next(r.state, r.level, true);
      } else if (r.group == 6) {
        lo = pass2_next(r.state, r.level, false);
        hi = pass2_next(r.state, r.level, true);
      } else {
        std::tie(lo, hi) = chain_edges(r.group, r.level);
      }
      node_edges[r] = {lo, hi};
      reach(lo);
      reach(hi);
    }

    // std::map iteration order over (group, level, state) is the topological
    // emission order.
    int next_id = 0;
    for (auto& [ref, id] : ids) id = next_id++;
    std::vector<BpNode> nodes(ids.size());
    for (const auto& [ref, edges] : node_edges) {
      auto target = [&](const NodeRef& r) {
        if (is_sink(r)) return EdgeTarget::sink(static_cast<Trit>(r.state));
        return EdgeTarget::node(ids.at(r));
      };
      int var = 0;
      if (ref.group == 0 || ref.group == 6)
        var = var_number(n, var_at(ref.level));
      else
        var = chain_var(ref.group, ref.level);
      nodes[ids.at(ref)] = BpNode{var, target(edges.first), target(edges.second)};
    }
    return BranchingProgram(3 * n, std::move(nodes));
  }
};

}  // namespace

BranchingProgram encode_gamma_2bp(const BpisInstance& g) {
  if (g.n() < 4 || g.n() % 2 != 0)
    throw std::invalid_argument("encode_gamma_2bp: requires even n >= 4");
  auto violations = g.validate();
  if (!violations.empty())
    throw std::invalid_argument("encode_gamma_2bp: invalid instance: " +
                                violations.front());
  return Builder(g).build();
}

BranchingProgram sat_to_bp(const Cnf34& phi) {
  if (!phi.evaluate_packed(0)) {
    // Normal clause chain.
    const int m = static_cast<int>(phi.clauses().size());
    std::vector<BpNode> nodes;
    nodes.reserve(3 * m);
    for (int c = 0; c < m; ++c) {
      const auto& clause = phi.clauses()[c];
      const EdgeTarget next_clause =
          c + 1 < m ? EdgeTarget::node(3 * (c + 1)) : EdgeTarget::sink(Trit::Zero);
      for (int pos = 0; pos < 3; ++pos) {
        const Lit& l = clause[pos];
        const EdgeTarget on_false =
            pos < 2 ? EdgeTarget::node(3 * c + pos + 1) : EdgeTarget::sink(Trit::One);
        BpNode node;
        node.var = l.var;
        if (l.negated) {
          node.hi = on_false;      // literal ~x falsified by x=1
          node.lo = next_clause;
        } else {
          node.lo = on_false;
          node.hi = next_clause;
        }
        nodes.push_back(node);
      }
    }
    if (nodes.empty()) return BranchingProgram::constant(phi.n_vars(), Trit::Zero);
    return BranchingProgram(phi.n_vars(), std::move(nodes));
  }
  // phi(0^n)=1: the identity program on the first bit keeps the image
  // non-constant exactly when phi is satisfiable.
  std::vector<BpNode> nodes{
      BpNode{1, EdgeTarget::sink(Trit::Zero), EdgeTarget::sink(Trit::One)}};
  return BranchingProgram(phi.n_vars(), std::move(nodes));
}

Cnf34 parse_dimacs(std::string_view text, std::string_view name) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ParseError(std::string(name) + ":" + std::to_string(lineno) + ": " + what);
  };

  int n_vars = -1, n_clauses = -1;
  std::vector<std::array<Lit, 3>> clauses;
  std::vector<Lit> current;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      if (n_vars >= 0) fail("duplicate header");
      std::istringstream hl(line);
      std::string p, fmt;
      if (!(hl >> p >> fmt >> n_vars >> n_clauses) || fmt != "cnf" || n_vars < 1 ||
          n_clauses < 0)
        fail("malformed header, expected 'p cnf <vars> <clauses>'");
      continue;
    }
    if (n_vars < 0) fail("clause before header");
    std::istringstream cl(line);
    long lit;
    while (cl >> lit) {
      if (lit == 0) {
        if (current.size() != 3)
          fail("clause " + std::to_string(clauses.size() + 1) + " has " +
               std::to_string(current.size()) + " literals (need exactly 3)");
        clauses.push_back({current[0], current[1], current[2]});
        current.clear();
        continue;
      }
      const long v = lit < 0 ? -lit : lit;
      if (v > n_vars)
        fail("literal " + std::to_string(lit) + " out of range for " +
             std::to_string(n_vars) + " variables");
      current.push_back(Lit{static_cast<int>(v), lit < 0});
    }
  }
  if (n_vars < 0) {
    lineno = 1;
    fail("missing header");
  }
  if (!current.empty()) fail("unterminated clause at end of input");
  if (static_cast<int>(clauses.size()) != n_clauses)
    fail("header announces " + std::to_string(n_clauses) + " clauses, found " +
         std::to_string(clauses.size()));
  try {
    return Cnf34(n_vars, std::move(clauses));
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  throw std::logic_error("unreachable");
}

}  // namespace bpmin
