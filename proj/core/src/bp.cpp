#include "bpmin/bp.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace bpmin {

char trit_to_char(Trit t) {
  switch (t) {
    case Trit::Zero: return '0';
    case Trit::One: return '1';
    case Trit::Star: return '*';
  }
  throw std::invalid_argument("bad trit");
}

Trit trit_from_char(char c) {
  switch (c) {
    case '0': return Trit::Zero;
    case '1': return Trit::One;
    case '*': return Trit::Star;
  }
  throw std::invalid_argument(std::string("bad trit character '") + c + "'");
}

std::string EdgeTarget::to_string() const {
  if (is_node()) return std::to_string(raw_);
  switch (sink_value()) {
    case Trit::Zero: return "S0";
    case Trit::One: return "S1";
    case Trit::Star: return "S*";
  }
  throw std::invalid_argument("bad sink");
}

EdgeTarget EdgeTarget::parse(std::string_view text) {
  if (text == "S0") return sink(Trit::Zero);
  if (text == "S1") return sink(Trit::One);
  if (text == "S*") return sink(Trit::Star);
  int id = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec != std::errc() || ptr != text.data() + text.size() || id < 0)
    throw std::invalid_argument("bad edge target '" + std::string(text) + "'");
  return node(id);
}

bool PartialAssignment::is_total() const {
  return std::none_of(values_.begin(), values_.end(),
                      [](Trit t) { return t == Trit::Star; });
}

int PartialAssignment::assigned_count() const {
  return static_cast<int>(std::count_if(values_.begin(), values_.end(),
                                        [](Trit t) { return t != Trit::Star; }));
}

std::vector<int> PartialAssignment::support() const {
  std::vector<int> out;
  for (int v = 1; v <= n_vars(); ++v)
    if (is_assigned(v)) out.push_back(v);
  return out;
}

PartialAssignment PartialAssignment::disjoint_union(const PartialAssignment& other) const {
  if (n_vars() != other.n_vars())
    throw std::invalid_argument("disjoint_union: variable counts differ");
  PartialAssignment out(n_vars());
  for (int v = 1; v <= n_vars(); ++v) {
    Trit a = get(v), b = other.get(v);
    if (a != Trit::Star && b != Trit::Star)
      throw std::invalid_argument("disjoint_union: overlapping support at variable " +
                                  std::to_string(v));
    out.set(v, a != Trit::Star ? a : b);
  }
  return out;
}

PartialTruthTable::PartialTruthTable(int n_vars, Trit fill) : n_vars_(n_vars) {
  if (n_vars < 0 || n_vars > 30)
    throw std::invalid_argument("PartialTruthTable: unsupported variable count");
  values_.assign(std::uint64_t{1} << n_vars, fill);
}

bool PartialTruthTable::is_total() const {
  return std::none_of(values_.begin(), values_.end(),
                      [](Trit t) { return t == Trit::Star; });
}

std::uint64_t PartialTruthTable::defined_count() const {
  return static_cast<std::uint64_t>(std::count_if(
      values_.begin(), values_.end(), [](Trit t) { return t != Trit::Star; }));
}

PartialTruthTable PartialTruthTable::restricted(const PartialAssignment& alpha) const {
  if (alpha.n_vars() != n_vars_)
    throw std::invalid_argument("restricted: variable counts differ");
  std::vector<int> free_vars;
  for (int v = 1; v <= n_vars_; ++v)
    if (!alpha.is_assigned(v)) free_vars.push_back(v);
  const int m = static_cast<int>(free_vars.size());
  PartialTruthTable out(m);
  std::uint64_t base = 0;
  for (int v = 1; v <= n_vars_; ++v)
    if (alpha.get(v) == Trit::One) base |= std::uint64_t{1} << (n_vars_ - v);
  for (std::uint64_t sub = 0; sub < out.entries(); ++sub) {
    std::uint64_t idx = base;
    for (int j = 0; j < m; ++j)
      if ((sub >> (m - 1 - j)) & 1) idx |= std::uint64_t{1} << (n_vars_ - free_vars[j]);
    out.set(sub, at(idx));
  }
  return out;
}

BranchingProgram::BranchingProgram(int n_vars, std::vector<BpNode> nodes)
    : n_vars_(n_vars), nodes_(std::move(nodes)) {
  if (n_vars < 0) throw std::invalid_argument("BranchingProgram: negative n_vars");
  const int s = static_cast<int>(nodes_.size());
  if (s == 0) throw std::invalid_argument("BranchingProgram: use constant() for size 0");
  std::vector<char> referenced(s, 0);
  referenced[0] = 1;
  for (int i = 0; i < s; ++i) {
    const BpNode& nd = nodes_[i];
    if (nd.var < 1 || nd.var > n_vars)
      throw std::invalid_argument("BranchingProgram: node " + std::to_string(i) +
                                  " queries variable " + std::to_string(nd.var) +
                                  " outside 1.." + std::to_string(n_vars));
    for (EdgeTarget t : {nd.lo, nd.hi}) {
      if (t.is_node()) {
        if (t.node_id() <= i || t.node_id() >= s)
          throw std::invalid_argument("BranchingProgram: edge from node " +
                                      std::to_string(i) + " to " +
                                      std::to_string(t.node_id()) +
                                      " breaks the topological order");
        referenced[t.node_id()] = 1;
      }
    }
  }
  // Ascending edges + an in-edge from below give reachability from node 0.
  for (int i = 1; i < s; ++i)
    if (!referenced[i])
      throw std::invalid_argument("BranchingProgram: node " + std::to_string(i) +
                                  " is unreachable");
}

BranchingProgram BranchingProgram::constant(int n_vars, Trit value) {
  BranchingProgram bp;
  bp.n_vars_ = n_vars;
  bp.constant_ = value;
  return bp;
}

bool BranchingProgram::uses_star() const {
  if (is_constant()) return constant_ == Trit::Star;
  for (const BpNode& nd : nodes_)
    for (EdgeTarget t : {nd.lo, nd.hi})
      if (t.is_sink() && t.sink_value() == Trit::Star) return true;
  return false;
}

Trit BranchingProgram::evaluate_packed(std::uint64_t input) const {
  if (is_constant()) return constant_;
  EdgeTarget cur = EdgeTarget::node(0);
  while (cur.is_node()) {
    const BpNode& nd = nodes_[cur.node_id()];
    const bool bit = (input >> (n_vars_ - nd.var)) & 1;
    cur = bit ? nd.hi : nd.lo;
  }
  return cur.sink_value();
}

Trit BranchingProgram::evaluate(const PartialAssignment& assignment) const {
  if (assignment.n_vars() != n_vars_)
    throw std::invalid_argument("evaluate: variable counts differ");
  if (!assignment.is_total())
    throw std::invalid_argument("evaluate: assignment is not total");
  std::uint64_t packed = 0;
  for (int v = 1; v <= n_vars_; ++v)
    if (assignment.get(v) == Trit::One) packed |= std::uint64_t{1} << (n_vars_ - v);
  return evaluate_packed(packed);
}

PartialTruthTable to_truth_table(const BranchingProgram& bp, int max_vars) {
  if (bp.n_vars() > max_vars)
    throw ResourceLimitError("to_truth_table: " + std::to_string(bp.n_vars()) +
                             " variables exceed the cap of " + std::to_string(max_vars));
  PartialTruthTable out(bp.n_vars());
  for (std::uint64_t idx = 0; idx < out.entries(); ++idx)
    out.set(idx, bp.evaluate_packed(idx));
  return out;
}

namespace {

// Resolves a target through nodes whose variable alpha assigns.
EdgeTarget resolve_through(const std::vector<BpNode>& nodes, EdgeTarget t,
                           const PartialAssignment& alpha) {
  while (t.is_node()) {
    const BpNode& nd = nodes[t.node_id()];
    Trit a = alpha.get(nd.var);
    if (a == Trit::Star) break;
    t = a == Trit::One ? nd.hi : nd.lo;
  }
  return t;
}

BranchingProgram restrict_impl(const BranchingProgram& bp, const PartialAssignment& alpha,
                               bool renumber_vars) {
  if (alpha.n_vars() != bp.n_vars())
    throw std::invalid_argument("restrict: variable counts differ");

  std::vector<int> var_map(bp.n_vars() + 1, 0);
  int next = 0;
  for (int v = 1; v <= bp.n_vars(); ++v)
    if (!alpha.is_assigned(v)) var_map[v] = renumber_vars ? ++next : v;
  const int out_vars = renumber_vars ? next : bp.n_vars();

  if (bp.is_constant()) return BranchingProgram::constant(out_vars, bp.constant_value());

  EdgeTarget source = resolve_through(bp.nodes(), EdgeTarget::node(0), alpha);
  if (source.is_sink()) return BranchingProgram::constant(out_vars, source.sink_value());

  // Reachable surviving nodes, in the original (topological) order.
  const int s = bp.size();
  std::vector<char> reach(s, 0);
  reach[source.node_id()] = 1;
  for (int i = source.node_id(); i < s; ++i) {
    if (!reach[i]) continue;
    const BpNode& nd = bp.node(i);
    for (EdgeTarget t : {resolve_through(bp.nodes(), nd.lo, alpha),
                         resolve_through(bp.nodes(), nd.hi, alpha)})
      if (t.is_node()) reach[t.node_id()] = 1;
  }
  std::vector<int> new_id(s, -1);
  int count = 0;
  for (int i = 0; i < s; ++i)
    if (reach[i]) new_id[i] = count++;

  std::vector<BpNode> nodes;
  nodes.reserve(count);
  for (int i = 0; i < s; ++i) {
    if (!reach[i]) continue;
    const BpNode& nd = bp.node(i);
    auto map_target = [&](EdgeTarget t) {
      t = resolve_through(bp.nodes(), t, alpha);
      return t.is_node() ? EdgeTarget::node(new_id[t.node_id()]) : t;
    };
    nodes.push_back(BpNode{var_map[nd.var], map_target(nd.lo), map_target(nd.hi)});
  }
  return BranchingProgram(out_vars, std::move(nodes));
}

}  // namespace

BranchingProgram restrict(const BranchingProgram& bp, const PartialAssignment& alpha) {
  return restrict_impl(bp, alpha, /*renumber_vars=*/true);
}

BranchingProgram restrict_keep_vars(const BranchingProgram& bp,
                                    const PartialAssignment& alpha) {
  return restrict_impl(bp, alpha, /*renumber_vars=*/false);
}

ClassReport classify(const BranchingProgram& bp) {
  ClassReport report;
  const int s = bp.size();
  const int n = bp.n_vars();

  std::vector<int> label_count(n + 1, 0);
  for (const BpNode& nd : bp.nodes()) ++label_count[nd.var];
  report.is_oabp =
      std::all_of(label_count.begin(), label_count.end(), [](int c) { return c <= 1; });

  // max_reads: per variable, the longest chain of v-labeled nodes on a path,
  // by a reverse-topological DP (no path enumeration).
  report.max_reads = 0;
  std::vector<int> best(s, 0);
  for (int v = 1; v <= n; ++v) {
    if (label_count[v] == 0) continue;
    for (int i = s - 1; i >= 0; --i) {
      const BpNode& nd = bp.node(i);
      int follow = 0;
      for (EdgeTarget t : {nd.lo, nd.hi})
        if (t.is_node()) follow = std::max(follow, best[t.node_id()]);
      best[i] = follow + (nd.var == v ? 1 : 0);
    }
    report.max_reads = std::max(report.max_reads, s == 0 ? 0 : best[0]);
  }

  // OBDD check: one total order respected on every node->node edge. Kahn
  // with a smallest-variable tie-break; a cycle (incl. repeats) means none.
  std::vector<std::vector<char>> succ(n + 1, std::vector<char>(n + 1, 0));
  bool repeat_edge = false;
  for (const BpNode& nd : bp.nodes())
    for (EdgeTarget t : {nd.lo, nd.hi})
      if (t.is_node()) {
        int u = nd.var, w = bp.node(t.node_id()).var;
        if (u == w) repeat_edge = true;
        succ[u][w] = 1;
      }
  if (!repeat_edge) {
    std::vector<int> indeg(n + 1, 0);
    for (int u = 1; u <= n; ++u)
      for (int w = 1; w <= n; ++w)
        if (u != w && succ[u][w]) ++indeg[w];
    std::vector<char> placed(n + 1, 0);
    std::vector<int> order;
    for (int step = 0; step < n; ++step) {
      int pick = -1;
      for (int v = 1; v <= n; ++v)
        if (!placed[v] && indeg[v] == 0) { pick = v; break; }
      if (pick < 0) break;
      placed[pick] = 1;
      order.push_back(pick);
      for (int w = 1; w <= n; ++w)
        if (!placed[w] && succ[pick][w]) --indeg[w];
    }
    if (static_cast<int>(order.size()) == n) report.obdd_order = std::move(order);
  }
  return report;
}

bool agrees_with_table(const BranchingProgram& bp, const PartialTruthTable& table) {
  if (bp.n_vars() != table.n_vars()) return false;
  for (std::uint64_t idx = 0; idx < table.entries(); ++idx) {
    const Trit want = table.at(idx);
    if (want != Trit::Star && bp.evaluate_packed(idx) != want) return false;
  }
  return true;
}

std::string serialize_bp(const BranchingProgram& bp) {
  std::ostringstream out;
  out << "bp n=" << bp.n_vars() << " sinks=" << (bp.uses_star() ? 3 : 2) << "\n";
  if (bp.is_constant()) {
    out << "const " << EdgeTarget::sink(bp.constant_value()).to_string() << "\n";
    return out.str();
  }
  for (int i = 0; i < bp.size(); ++i) {
    const BpNode& nd = bp.node(i);
    out << i << " v=" << nd.var << " 0=>" << nd.lo.to_string() << " 1=>"
        << nd.hi.to_string() << "\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void parse_fail(std::string_view name, int line, const std::string& what) {
  throw ParseError(std::string(name) + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_int_field(std::string_view name, int line, const std::string& tok,
                    std::string_view key) {
  if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 ||
      tok[key.size()] != '=')
    parse_fail(name, line, "expected " + std::string(key) + "=<int>, got '" + tok + "'");
  int value = 0;
  const char* first = tok.data() + key.size() + 1;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    parse_fail(name, line, "bad integer in '" + tok + "'");
  return value;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.emplace_back(text.substr(pos));
      break;
    }
    lines.emplace_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

BranchingProgram parse_bp(std::string_view text, std::string_view name) {
  auto lines = split_lines(text);
  if (lines.empty()) parse_fail(name, 1, "empty input");
  auto header = tokenize(lines[0]);
  if (header.size() != 3 || header[0] != "bp")
    parse_fail(name, 1, "expected header 'bp n=<n> sinks=<2|3>'");
  const int n = parse_int_field(name, 1, header[1], "n");
  const int sinks = parse_int_field(name, 1, header[2], "sinks");
  if (sinks != 2 && sinks != 3) parse_fail(name, 1, "sinks must be 2 or 3");
  const bool allow_star = sinks == 3;

  if (lines.size() == 2) {
    auto toks = tokenize(lines[1]);
    if (toks.size() == 2 && toks[0] == "const") {
      EdgeTarget t = EdgeTarget::parse(toks[1]);
      if (!t.is_sink()) parse_fail(name, 2, "const line needs a sink");
      if (t.sink_value() == Trit::Star && !allow_star)
        parse_fail(name, 2, "S* with sinks=2");
      return BranchingProgram::constant(n, t.sink_value());
    }
  }

  std::vector<BpNode> nodes;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const int lineno = static_cast<int>(li) + 1;
    auto toks = tokenize(lines[li]);
    if (toks.empty()) continue;
    if (toks.size() != 4)
      parse_fail(name, lineno, "expected '<id> v=<var> 0=><t> 1=><t>'");
    int id = 0;
    auto [ptr, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), id);
    if (ec != std::errc() || ptr != toks[0].data() + toks[0].size())
      parse_fail(name, lineno, "bad node id '" + toks[0] + "'");
    if (id != static_cast<int>(nodes.size()))
      parse_fail(name, lineno, "node id " + std::to_string(id) +
                                   " out of sequence (expected " +
                                   std::to_string(nodes.size()) + ")");
    const int var = parse_int_field(name, lineno, toks[1], "v");
    auto parse_edge = [&](const std::string& tok, std::string_view key) {
      if (tok.compare(0, key.size(), key) != 0)
        parse_fail(name, lineno, "expected " + std::string(key) + "<target>");
      EdgeTarget t = [&] {
        try {
          return EdgeTarget::parse(std::string_view(tok).substr(key.size()));
        } catch (const std::invalid_argument& e) {
          parse_fail(name, lineno, e.what());
        }
      }();
      if (t.is_sink() && t.sink_value() == Trit::Star && !allow_star)
        parse_fail(name, lineno, "S* with sinks=2");
      return t;
    };
    nodes.push_back(BpNode{var, parse_edge(toks[2], "0=>"), parse_edge(toks[3], "1=>")});
  }
  if (nodes.empty()) parse_fail(name, 2, "no nodes and no const line");
  try {
    return BranchingProgram(n, std::move(nodes));
  } catch (const std::invalid_argument& e) {
    parse_fail(name, 1, e.what());
  }
}

std::string serialize_tt(const PartialTruthTable& table) {
  std::string out = "tt n=" + std::to_string(table.n_vars()) + "\n";
  out.reserve(out.size() + table.entries() + 1);
  for (std::uint64_t i = 0; i < table.entries(); ++i) out += trit_to_char(table.at(i));
  out += "\n";
  return out;
}

PartialTruthTable parse_tt(std::string_view text, std::string_view name) {
  auto lines = split_lines(text);
  if (lines.empty()) parse_fail(name, 1, "empty input");
  auto header = tokenize(lines[0]);
  if (header.size() != 2 || header[0] != "tt")
    parse_fail(name, 1, "expected header 'tt n=<n>'");
  const int n = parse_int_field(name, 1, header[1], "n");
  if (n < 0 || n > 24) parse_fail(name, 1, "unsupported variable count");
  if (lines.size() != 2) parse_fail(name, 2, "expected exactly one value line");
  const std::string& row = lines[1];
  PartialTruthTable table(n);
  if (row.size() != table.entries())
    parse_fail(name, 2, "expected " + std::to_string(table.entries()) +
                            " characters, got " + std::to_string(row.size()));
  for (std::uint64_t i = 0; i < table.entries(); ++i) {
    try {
      table.set(i, trit_from_char(row[i]));
    } catch (const std::invalid_argument& e) {
      parse_fail(name, 2, e.what());
    }
  }
  return table;
}

}  // namespace bpmin
