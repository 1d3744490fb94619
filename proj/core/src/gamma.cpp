#include "bpmin/gamma.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace bpmin {

std::uint32_t pack_bits(std::string_view s) {
  if (s.size() > 31) throw std::invalid_argument("pack_bits: too many bits");
  std::uint32_t out = 0;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument(std::string("pack_bits: bad character '") + c + "'");
    out = (out << 1) | static_cast<std::uint32_t>(c == '1');
  }
  return out;
}

std::string unpack_bits(std::uint32_t bits, int n) {
  std::string out(n, '0');
  for (int i = 0; i < n; ++i)
    if ((bits >> (n - 1 - i)) & 1) out[i] = '1';
  return out;
}

std::string gamma_case_name(GammaCase c) {
  switch (c) {
    case GammaCase::Star: return "*";
    case GammaCase::XZero: return "1";
    case GammaCase::XOne: return "2";
    case GammaCase::ZOne: return "3";
    case GammaCase::ZZero: return "4";
    case GammaCase::Y0ZHigh: return "5";
    case GammaCase::Y0ZLow: return "6";
    case GammaCase::Edge: return "7";
  }
  return "?";
}

namespace {

Trit bit_to_trit(bool b) { return b ? Trit::One : Trit::Zero; }

// Decodes a half-word with exactly one set bit to its 1-based index
// (variable i of the half sits at bit h-i), or 0 if the shape is wrong.
int single_one_index(std::uint32_t half_bits, int h) {
  if (std::popcount(half_bits) != 1) return 0;
  return h - std::countr_zero(half_bits);
}

void check_gamma_n(int n) {
  if (n == 2)
    throw std::domain_error(
        "gamma is not well-defined at n=2: the edge inputs of case (7) have "
        "x = e-bar e-bar = 0^n and collide with case (1) under a conflicting "
        "value; n >= 4 is required");
  if (n < 4 || n % 2 != 0)
    throw std::domain_error("gamma requires even n >= 4, got n=" + std::to_string(n));
}

}  // namespace

GammaEval gamma_prime_eval(int n, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  if (n < 1 || n > 31) throw std::invalid_argument("gamma_prime: bad n");
  const std::uint32_t full = (n == 31) ? 0x7fffffffu : ((1u << n) - 1);
  if ((x | y | z) & ~full) throw std::invalid_argument("gamma_prime: bits beyond n");
  if (x == 0) return {bit_to_trit((y & z) != 0), GammaCase::XZero};
  if (x == full) return {bit_to_trit(z != 0), GammaCase::XOne};
  if (z == full) return {bit_to_trit((x | y) != 0), GammaCase::ZOne};
  if (z == 0) return {Trit::Zero, GammaCase::ZZero};
  return {Trit::Star, GammaCase::Star};
}

Trit gamma_prime_value(int n, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  return gamma_prime_eval(n, x, y, z).value;
}

GammaEval gamma_eval(const BpisInstance& g, std::uint32_t x, std::uint32_t y,
                     std::uint32_t z) {
  const int n = g.n();
  check_gamma_n(n);
  GammaEval prime = gamma_prime_eval(n, x, y, z);
  if (prime.matched != GammaCase::Star) return prime;

  const int h = n / 2;
  const std::uint32_t halfmask = (1u << h) - 1;
  if (y == 0 && z == (halfmask << h))
    return {bit_to_trit((x >> h) != 0), GammaCase::Y0ZHigh};
  if (y == 0 && z == halfmask)
    return {bit_to_trit((x & halfmask) != 0), GammaCase::Y0ZLow};

  if (y == 0) {
    // Case (7): x = e-bar_k e-bar_k', z = e_j e_j' for an edge
    // ((j,k),(h+j',h+k')).
    const int k = single_one_index((x >> h) ^ halfmask, h);
    const int kp = single_one_index((x & halfmask) ^ halfmask, h);
    const int j = single_one_index(z >> h, h);
    const int jp = single_one_index(z & halfmask, h);
    if (k && kp && j && jp &&
        g.has_edge(GridVertex{j, k}, GridVertex{h + jp, h + kp}))
      return {Trit::One, GammaCase::Edge};
  }
  return {Trit::Star, GammaCase::Star};
}

Trit gamma_value(const BpisInstance& g, std::uint32_t x, std::uint32_t y,
                 std::uint32_t z) {
  return gamma_eval(g, x, y, z).value;
}

Reduction reduce(const BpisInstance& g) {
  const int n = g.n();
  check_gamma_n(n);
  if (n > 6)
    throw ResourceLimitError("reduce: full tables are capped at n=6, got n=" +
                             std::to_string(n));
  auto violations = g.validate();
  if (!violations.empty())
    throw std::invalid_argument("reduce: invalid instance: " + violations.front());

  Reduction out{PartialTruthTable(3 * n), 3 * n, 3 * n - 1};
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t x = 0; x <= full; ++x)
    for (std::uint32_t y = 0; y <= full; ++y)
      for (std::uint32_t z = 0; z <= full; ++z)
        out.table.set(pack_xyz(n, x, y, z), gamma_value(g, x, y, z));
  return out;
}

PartialTruthTable gamma_prime_table(int n) {
  if (n > 6) throw ResourceLimitError("gamma_prime_table: capped at n=6");
  PartialTruthTable table(3 * n);
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t x = 0; x <= full; ++x)
    for (std::uint32_t y = 0; y <= full; ++y)
      for (std::uint32_t z = 0; z <= full; ++z)
        table.set(pack_xyz(n, x, y, z), gamma_prime_value(n, x, y, z));
  return table;
}

BranchingProgram gamma_prime_chain(int n, const std::vector<int>& pi) {
  if (n < 1) throw std::invalid_argument("gamma_prime_chain: n must be positive");
  if (static_cast<int>(pi.size()) != n)
    throw std::invalid_argument("gamma_prime_chain: permutation size mismatch");
  std::vector<char> seen(n + 1, 0);
  for (int v : pi) {
    if (v < 1 || v > n || seen[v])
      throw std::invalid_argument("gamma_prime_chain: not a permutation of [n]");
    seen[v] = 1;
  }

  std::vector<BpNode> nodes;
  nodes.reserve(3 * n);
  for (int i = 1; i <= n; ++i) {
    const int base = 3 * (i - 1);
    const EdgeTarget fail =
        i < n ? EdgeTarget::node(base + 3) : EdgeTarget::sink(Trit::Zero);
    const EdgeTarget one = EdgeTarget::sink(Trit::One);
    // (x | y) & z: x=1 and y=1 both continue to z; z=1 accepts.
    nodes.push_back(BpNode{gamma_x_var(n, pi[i - 1]), EdgeTarget::node(base + 1),
                           EdgeTarget::node(base + 2)});
    nodes.push_back(BpNode{gamma_y_var(n, i), fail, EdgeTarget::node(base + 2)});
    nodes.push_back(BpNode{gamma_z_var(n, i), fail, one});
  }
  return BranchingProgram(3 * n, std::move(nodes));
}

BranchingProgram canonical_oabp_from_permutation(int n, const HalfPermutationPair& p) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("canonical_oabp_from_permutation: n must be even >= 2");
  if (p.n() != n)
    throw std::invalid_argument("canonical_oabp_from_permutation: permutation size mismatch");
  return gamma_prime_chain(n, p.pi_vector());
}

GammaTarget GammaTarget::of_graph(BpisInstance g) {
  GammaTarget t;
  t.n = g.n();
  t.graph = std::move(g);
  return t;
}

PartialTruthTable GammaTarget::table() const {
  return graph ? reduce(*graph).table : gamma_prime_table(n);
}

namespace {

enum class VarKind { X, Y, Z };

VarKind var_kind(int var, int n) {
  if (var <= n) return VarKind::X;
  if (var <= 2 * n) return VarKind::Y;
  return VarKind::Z;
}

int var_index(int var, int n) {
  if (var <= n) return var;
  if (var <= 2 * n) return var - n;
  return var - 2 * n;
}

std::string describe_window(const BranchingProgram& b, int base) {
  std::ostringstream out;
  out << "nodes " << base << ".." << base + 2 << " query variables";
  for (int i = base; i < base + 3; ++i) out << " " << b.node(i).var;
  return out.str();
}

std::optional<std::vector<Triplet>> decompose(const BranchingProgram& b, int n,
                                              std::vector<StructureViolation>* out) {
  std::vector<Triplet> triplets;
  for (int t = 0; t < n; ++t) {
    const int base = 3 * t;
    int x = 0, y = 0, z = 0;
    for (int i = base; i < base + 3; ++i) {
      const int var = b.node(i).var;
      switch (var_kind(var, n)) {
        case VarKind::X: x = var_index(var, n); break;
        case VarKind::Y: y = var_index(var, n); break;
        case VarKind::Z: z = var_index(var, n); break;
      }
    }
    if (x == 0 || y == 0 || z == 0 || y != z) {
      if (out)
        out->push_back({"order", "window " + std::to_string(t) + " is not an " +
                                     "xyz-triplet: " + describe_window(b, base)});
      return std::nullopt;
    }
    triplets.push_back(Triplet{x, y});
  }
  return triplets;
}

void require_semantic_agreement(const BranchingProgram& b, const GammaTarget& target) {
  const PartialTruthTable table = target.table();
  if (b.n_vars() != table.n_vars())
    throw std::invalid_argument("structure check: variable count mismatch");
  for (std::uint64_t idx = 0; idx < table.entries(); ++idx) {
    const Trit want = table.at(idx);
    if (want == Trit::Star) continue;
    if (b.evaluate_packed(idx) != want)
      throw std::invalid_argument(
          "structure check: program disagrees with the target at index " +
          std::to_string(idx));
  }
}

void require_oabp_shape(const BranchingProgram& b, int n) {
  if (n < 1 || b.n_vars() != 3 * n)
    throw std::invalid_argument("structure check: expected 3n variables");
  if (b.size() != 3 * n)
    throw std::invalid_argument("structure check: expected exactly 3n nodes, got " +
                                std::to_string(b.size()));
  if (!classify(b).is_oabp)
    throw std::invalid_argument("structure check: program is not an oaBP");
}

PartialAssignment block_assignment(int n, VarKind kind, Trit value) {
  PartialAssignment alpha(3 * n);
  for (int i = 1; i <= n; ++i) {
    const int var = kind == VarKind::X   ? gamma_x_var(n, i)
                    : kind == VarKind::Y ? gamma_y_var(n, i)
                                         : gamma_z_var(n, i);
    alpha.set(var, value);
  }
  return alpha;
}

}  // namespace

std::optional<std::string> validate_or_of_ands_path(const BranchingProgram& b,
                                                    int pairs) {
  if (b.n_vars() != 2 * pairs) return "expected a program on 2n variables";
  if (b.size() != 2 * pairs)
    return "expected 2n nodes, got " + std::to_string(b.size());
  const EdgeTarget zero = EdgeTarget::sink(Trit::Zero);
  const EdgeTarget one = EdgeTarget::sink(Trit::One);
  std::vector<char> used(pairs + 1, 0);
  EdgeTarget cur = EdgeTarget::node(0);
  for (int i = 1; i <= pairs; ++i) {
    if (!cur.is_node()) return "path ends early at block " + std::to_string(i);
    const BpNode& a = b.node(cur.node_id());
    if (!a.hi.is_node())
      return "first node of block " + std::to_string(i) + " has 1-edge to a sink";
    const BpNode& bn = b.node(a.hi.node_id());
    const int ai = a.var <= pairs ? a.var : a.var - pairs;
    const int bi = bn.var <= pairs ? bn.var : bn.var - pairs;
    if (ai != bi || a.var == bn.var)
      return "block " + std::to_string(i) + " pairs variables " +
             std::to_string(a.var) + " and " + std::to_string(bn.var);
    if (used[ai]) return "pair index " + std::to_string(ai) + " repeats";
    used[ai] = 1;
    if (bn.hi != one)
      return "second node of block " + std::to_string(i) + " lacks a 1-edge to the 1-sink";
    if (a.lo != bn.lo)
      return "block " + std::to_string(i) + " fail edges do not advance together";
    if (i == pairs && a.lo != zero)
      return "last block does not fail to the 0-sink";
    cur = bn.lo;
  }
  if (cur != zero) return "path does not terminate in the 0-sink";
  return std::nullopt;
}

std::optional<std::string> validate_zero_chain(const BranchingProgram& b) {
  if (b.size() != b.n_vars())
    return "expected one node per variable, got " + std::to_string(b.size());
  const EdgeTarget zero = EdgeTarget::sink(Trit::Zero);
  const EdgeTarget one = EdgeTarget::sink(Trit::One);
  EdgeTarget cur = EdgeTarget::node(0);
  for (int step = 0; step < b.size(); ++step) {
    if (!cur.is_node()) return "0-edge path ends early at step " + std::to_string(step);
    const BpNode& nd = b.node(cur.node_id());
    if (nd.hi != one)
      return "node " + std::to_string(cur.node_id()) + " has a 1-edge not going to the 1-sink";
    cur = nd.lo;
  }
  if (cur != zero) return "0-edge path does not terminate in the 0-sink";
  return std::nullopt;
}

std::optional<std::string> validate_two_ones(const BranchingProgram& b, int n) {
  auto triplets = decompose(b, n, nullptr);
  if (!triplets) return "no triplet decomposition";

  // Depth-first over all 1-paths; ids within one triplet share id/3.
  struct Frame {
    EdgeTarget target;
    std::vector<std::pair<int, bool>> trail;  // (node id, chosen bit)
  };
  std::vector<Frame> stack;
  stack.push_back({EdgeTarget::node(0), {}});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.target.is_sink()) {
      if (f.target.sink_value() != Trit::One) continue;
      const int last = f.trail.back().first;
      const int block = last / 3;
      int ones = 0;
      for (auto [id, bit] : f.trail)
        if (id / 3 == block && bit) ++ones;
      if (ones < 2) {
        std::ostringstream out;
        out << "1-path exits triplet " << block << " with " << ones
            << " one-assignment(s); path:";
        for (auto [id, bit] : f.trail) out << " x" << b.node(id).var << "=" << bit;
        return out.str();
      }
      continue;
    }
    const int id = f.target.node_id();
    for (bool bit : {false, true}) {
      Frame g = f;
      g.trail.emplace_back(id, bit);
      g.target = bit ? b.node(id).hi : b.node(id).lo;
      stack.push_back(std::move(g));
    }
  }
  return std::nullopt;
}

StructureReport extract_defined_permutation(const BranchingProgram& b,
                                            const GammaTarget& target) {
  require_oabp_shape(b, target.n);
  require_semantic_agreement(b, target);

  StructureReport report;
  report.triplets = decompose(b, target.n, &report.violations);
  if (!report.triplets) return report;

  const int n = target.n;
  std::vector<int> pi(n, 0);
  std::vector<char> seen(n + 1, 0);
  for (const Triplet& t : *report.triplets) {
    if (seen[t.x_index] || pi[t.yz_index - 1] != 0) {
      report.violations.push_back(
          {"order", "triplet indices repeat; mapping is not a permutation"});
      return report;
    }
    seen[t.x_index] = 1;
    pi[t.yz_index - 1] = t.x_index;
  }
  report.pi = pi;

  const int h = n / 2;
  bool halves = true;
  for (int i = 1; i <= n; ++i)
    if ((i <= h) != (pi[i - 1] <= h)) halves = false;
  if (halves) {
    std::vector<int> s1(pi.begin(), pi.begin() + h), s2(pi.begin() + h, pi.end());
    report.defined_permutation = HalfPermutationPair(std::move(s1), std::move(s2));
  }
  return report;
}

StructureReport check_structural_lemmas(const BranchingProgram& b,
                                        const GammaTarget& target) {
  StructureReport report = extract_defined_permutation(b, target);
  const int n = target.n;

  // (a) x = 0^n leaves the alternating OR-of-ANDs path on the yz pairs.
  {
    BranchingProgram r = restrict(b, block_assignment(n, VarKind::X, Trit::Zero));
    if (auto msg = validate_or_of_ands_path(r, n))
      report.violations.push_back({"or-of-ands", *msg});
  }
  // (b) z = 1^n leaves the all-variables 0-edge chain.
  {
    BranchingProgram r = restrict(b, block_assignment(n, VarKind::Z, Trit::One));
    if (auto msg = validate_zero_chain(r))
      report.violations.push_back({"z-one-chain", *msg});
  }
  // (c) z = 0^n makes the 1-sink unreachable.
  {
    BranchingProgram r = restrict(b, block_assignment(n, VarKind::Z, Trit::Zero));
    bool one_reachable = r.is_constant() && r.constant_value() == Trit::One;
    for (const BpNode& nd : r.nodes())
      for (EdgeTarget t : {nd.lo, nd.hi})
        if (t == EdgeTarget::sink(Trit::One)) one_reachable = true;
    if (one_reachable)
      report.violations.push_back({"z-zero", "1-sink reachable under z=0^n"});
  }
  // (d) handled by the decomposition above.
  // (e) graph targets: the defined permutation certifies the instance.
  if (target.graph && report.pi) {
    if (!report.defined_permutation) {
      report.violations.push_back({"halves", "permutation crosses the halves of [n]"});
    } else if (!is_independent_permutation(*target.graph, *report.defined_permutation)) {
      report.violations.push_back(
          {"independence", "defined permutation selects both endpoints of an edge"});
    }
  }
  // (f) two-ones over all 1-paths.
  if (report.triplets) {
    if (auto msg = validate_two_ones(b, n))
      report.violations.push_back({"two-ones", *msg});
  }
  return report;
}

}  // namespace bpmin
