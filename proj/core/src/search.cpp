#include "bpmin/search.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <unordered_set>

namespace bpmin {

namespace {

constexpr int kMaxEnumSize = 8;
constexpr int kMaxEnumVars = 6;

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
      .count();
}

struct EnumState {
  int n_vars = 0;
  int size = 0;
  std::vector<BpNode> nodes;
  std::vector<int> in_edges;
  const std::function<bool(const BranchingProgram&)>* visit = nullptr;
  bool stopped = false;
};

// All topological renumberings, compared lazily against the original
// serialization; true iff some renumbering is strictly smaller.
bool has_smaller_renumbering(const std::vector<BpNode>& nodes) {
  const int s = static_cast<int>(nodes.size());
  std::vector<std::vector<int>> preds(s);
  for (int i = 0; i < s; ++i)
    for (EdgeTarget t : {nodes[i].lo, nodes[i].hi})
      if (t.is_node()) preds[t.node_id()].push_back(i);

  std::vector<int> new_id(s, -1), order;  // order[p] = old node at position p
  order.reserve(s);
  bool smaller = false;

  auto compare_complete = [&]() {
    // Rebuild the serialization under new_id and compare tuple-wise.
    for (int p = 0; p < s && !smaller; ++p) {
      const BpNode& mine = nodes[order[p]];
      auto map_target = [&](EdgeTarget t) {
        return t.is_node() ? EdgeTarget::node(new_id[t.node_id()]) : t;
      };
      const BpNode renum{mine.var, map_target(mine.lo), map_target(mine.hi)};
      const BpNode& orig = nodes[p];
      if (renum.var != orig.var) {
        if (renum.var < orig.var) smaller = true;
        return;
      }
      if (renum.lo != orig.lo) {
        if (renum.lo < orig.lo) smaller = true;
        return;
      }
      if (renum.hi != orig.hi) {
        if (renum.hi < orig.hi) smaller = true;
        return;
      }
    }
  };

  std::function<void()> place = [&]() {
    if (smaller) return;
    const int p = static_cast<int>(order.size());
    if (p == s) {
      compare_complete();
      return;
    }
    for (int cand = 0; cand < s; ++cand) {
      if (new_id[cand] >= 0) continue;
      bool ready = std::all_of(preds[cand].begin(), preds[cand].end(),
                               [&](int q) { return new_id[q] >= 0; });
      if (!ready) continue;
      new_id[cand] = p;
      order.push_back(cand);
      place();
      order.pop_back();
      new_id[cand] = -1;
      if (smaller) return;
    }
  };
  place();
  return smaller;
}

void enum_node(EnumState& st, int i) {
  if (st.stopped) return;
  if (i == st.size) {
    if (has_smaller_renumbering(st.nodes)) return;
    BranchingProgram bp(st.n_vars, st.nodes);
    if (!(*st.visit)(bp)) st.stopped = true;
    return;
  }
  if (i > 0 && st.in_edges[i] == 0) return;  // nothing below can reach it anymore

  auto targets_after = [&](int from) {
    std::vector<EdgeTarget> out;
    out.push_back(EdgeTarget::sink(Trit::Zero));
    out.push_back(EdgeTarget::sink(Trit::One));
    for (int j = from + 1; j < st.size; ++j) out.push_back(EdgeTarget::node(j));
    return out;
  };
  const auto targets = targets_after(i);

  for (int var = 1; var <= st.n_vars; ++var) {
    for (EdgeTarget lo : targets) {
      for (EdgeTarget hi : targets) {
        if (lo == hi) continue;  // redundant node; never needed for a minimum
        st.nodes[i] = BpNode{var, lo, hi};
        for (EdgeTarget t : {lo, hi})
          if (t.is_node()) ++st.in_edges[t.node_id()];
        enum_node(st, i + 1);
        for (EdgeTarget t : {lo, hi})
          if (t.is_node()) --st.in_edges[t.node_id()];
        if (st.stopped) return;
      }
    }
  }
}

}  // namespace

void enumerate_bps(int n_vars, int size,
                   const std::function<bool(const BranchingProgram&)>& visit) {
  if (size < 0 || size > kMaxEnumSize || n_vars < 0 || n_vars > kMaxEnumVars)
    throw ResourceLimitError("enumerate_bps: caps are size<=8 and n_vars<=6");
  if (size == 0) {
    if (visit(BranchingProgram::constant(n_vars, Trit::Zero)))
      visit(BranchingProgram::constant(n_vars, Trit::One));
    return;
  }
  if (n_vars == 0) return;  // no labels available
  EnumState st;
  st.n_vars = n_vars;
  st.size = size;
  st.nodes.resize(size);
  st.in_edges.assign(size, 0);
  st.visit = &visit;
  enum_node(st, 0);
}

int min_bp_size(const PartialTruthTable& f) {
  if (!f.is_total()) throw std::invalid_argument("min_bp_size: table must be total");
  if (f.n_vars() > kMaxEnumVars)
    throw ResourceLimitError("min_bp_size: n_vars exceeds the enumeration cap");
  for (int s = 0; s <= kMaxEnumSize; ++s) {
    bool found = false;
    enumerate_bps(f.n_vars(), s, [&](const BranchingProgram& bp) {
      if (agrees_with_table(bp, f)) {
        found = true;
        return false;
      }
      return true;
    });
    if (found) return s;
  }
  throw ResourceLimitError("min_bp_size: no program within the size cap of 8");
}

BpSearchOutcome mbpsp_star(const PartialTruthTable& f, int s, const SearchBudget& budget) {
  if (s < 0) throw std::invalid_argument("mbpsp_star: negative size bound");
  if (f.n_vars() > kMaxEnumVars)
    throw ResourceLimitError("mbpsp_star: n_vars exceeds the enumeration cap");
  const auto start = Clock::now();
  BpSearchOutcome out;
  const int s_max = std::min(s, kMaxEnumSize);
  bool budget_hit = false;
  for (int size = 0; size <= s_max && !out.witness; ++size) {
    enumerate_bps(f.n_vars(), size, [&](const BranchingProgram& bp) {
      ++out.stats.expanded;
      if (out.stats.expanded > budget.max_nodes_expanded ||
          ((out.stats.expanded & 1023) == 0 && ms_since(start) > budget.wall_clock_ms)) {
        budget_hit = true;
        return false;
      }
      if (agrees_with_table(bp, f)) {
        out.witness = bp;
        return false;
      }
      return true;
    });
    if (budget_hit) break;
  }
  out.stats.elapsed_ms = ms_since(start);
  if (out.witness)
    out.verdict = Verdict::Found;
  else if (budget_hit || s > kMaxEnumSize)
    out.verdict = Verdict::Inconclusive;
  else
    out.verdict = Verdict::ExhaustedNo;
  return out;
}

int query_complexity(const PartialTruthTable& f) {
  const int n = f.n_vars();
  if (n > 14) throw ResourceLimitError("query_complexity: cap is n_vars<=14");

  std::vector<std::uint64_t> pow3(n + 1, 1);
  for (int i = 1; i <= n; ++i) pow3[i] = pow3[i - 1] * 3;
  std::vector<std::int8_t> memo(pow3[n], -1);

  // State: per-variable digit 0=unset, 1=assigned zero, 2=assigned one.
  // Table row bits for assigned variables live in `base`; `free_mask` holds
  // the index bits of the unassigned ones.
  struct Ctx {
    const PartialTruthTable& f;
    int n;
    const std::vector<std::uint64_t>& pow3;
    std::vector<std::int8_t>& memo;
  } ctx{f, n, pow3, memo};

  std::function<int(std::uint64_t, std::uint64_t, std::uint64_t)> solve =
      [&](std::uint64_t key, std::uint64_t base, std::uint64_t free_mask) -> int {
    if (ctx.memo[key] >= 0) return ctx.memo[key];
    bool has0 = false, has1 = false;
    // Enumerate subsets of free_mask (the standard descending-submask walk,
    // including 0) to scan the restricted rows.
    std::uint64_t sub = free_mask;
    while (true) {
      const Trit t = ctx.f.at(base | sub);
      has0 |= t == Trit::Zero;
      has1 |= t == Trit::One;
      if (has0 && has1) break;
      if (sub == 0) break;
      sub = (sub - 1) & free_mask;
    }
    if (!has0 || !has1) {
      ctx.memo[key] = 0;
      return 0;
    }
    int best = ctx.n + 1;
    for (int v = 1; v <= ctx.n; ++v) {
      const std::uint64_t bit = std::uint64_t{1} << (ctx.n - v);
      if (!(free_mask & bit)) continue;
      const std::uint64_t k0 = key + 1 * ctx.pow3[v - 1];
      const std::uint64_t k1 = key + 2 * ctx.pow3[v - 1];
      const int d0 = solve(k0, base, free_mask & ~bit);
      if (d0 + 1 >= best) continue;  // max(d0,d1)+1 can only be worse
      const int d1 = solve(k1, base | bit, free_mask & ~bit);
      best = std::min(best, 1 + std::max(d0, d1));
    }
    ctx.memo[key] = static_cast<std::int8_t>(best);
    return best;
  };

  return solve(0, 0, (std::uint64_t{1} << n) - 1);
}

namespace {

// Subfunction of f after assigning the variables in `mask` according to
// `assignment` (bits in table-index positions), packed over the remaining
// variables in ascending order.
std::vector<std::uint64_t> extract_subfunction(const PartialTruthTable& f,
                                               std::uint64_t var_mask,
                                               std::uint64_t assignment,
                                               const std::vector<int>& free_bits) {
  const int m = static_cast<int>(free_bits.size());
  const std::uint64_t rows = std::uint64_t{1} << m;
  std::vector<std::uint64_t> out((rows + 63) / 64, 0);
  for (std::uint64_t r = 0; r < rows; ++r) {
    std::uint64_t idx = assignment;
    for (int j = 0; j < m; ++j)
      if ((r >> (m - 1 - j)) & 1) idx |= std::uint64_t{1} << free_bits[j];
    (void)var_mask;
    if (f.at(idx) == Trit::One) out[r >> 6] |= std::uint64_t{1} << (r & 63);
  }
  return out;
}

bool subfunction_depends_on(const std::vector<std::uint64_t>& h, int m, int pos) {
  // pos: 0-based position among the m remaining variables, MSB side.
  const std::uint64_t rows = std::uint64_t{1} << m;
  const std::uint64_t bit = std::uint64_t{1} << (m - 1 - pos);
  for (std::uint64_t r = 0; r < rows; ++r) {
    if (r & bit) continue;
    const bool a = (h[r >> 6] >> (r & 63)) & 1;
    const std::uint64_t r2 = r | bit;
    const bool b = (h[r2 >> 6] >> (r2 & 63)) & 1;
    if (a != b) return true;
  }
  return false;
}

}  // namespace

ObddMinimizeResult obdd_minimize(const PartialTruthTable& f) {
  const int n = f.n_vars();
  if (!f.is_total()) throw std::invalid_argument("obdd_minimize: table must be total");
  if (n > 12) throw ResourceLimitError("obdd_minimize: cap is n_vars<=12");

  const std::uint32_t full = (n == 0) ? 0 : ((1u << n) - 1);
  std::vector<int> g(std::size_t{1} << n, INT32_MAX);
  std::vector<int> choice(std::size_t{1} << n, 0);
  g[0] = 0;

  // Masks use bit (v-1) for variable v; table indices use bit (n-v).
  for (std::uint32_t t = 0; t <= full; ++t) {
    if (g[t] == INT32_MAX) continue;

    std::vector<int> assigned_bits, free_bits, free_vars;
    for (int v = 1; v <= n; ++v) {
      if (t & (1u << (v - 1)))
        assigned_bits.push_back(n - v);
      else {
        free_bits.push_back(n - v);
        free_vars.push_back(v);
      }
    }
    const int k = static_cast<int>(assigned_bits.size());
    const int m = n - k;

    // Distinct subfunctions under all 2^k assignments of t's variables.
    std::vector<std::vector<std::uint64_t>> subs;
    subs.reserve(std::size_t{1} << k);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
      std::uint64_t assignment = 0;
      for (int j = 0; j < k; ++j)
        if ((a >> j) & 1) assignment |= std::uint64_t{1} << assigned_bits[j];
      subs.push_back(extract_subfunction(f, t, assignment, free_bits));
    }
    std::sort(subs.begin(), subs.end());
    subs.erase(std::unique(subs.begin(), subs.end()), subs.end());

    for (int p = 0; p < m; ++p) {
      const int v = free_vars[p];
      int cost = 0;
      for (const auto& h : subs)
        if (subfunction_depends_on(h, m, p)) ++cost;
      const std::uint32_t next = t | (1u << (v - 1));
      if (g[t] + cost < g[next]) {
        g[next] = g[t] + cost;
        choice[next] = v;
      }
    }
    if (full == 0) break;
  }

  ObddMinimizeResult out;
  out.size = g[full];
  std::uint32_t cur = full;
  while (cur != 0) {
    out.order.push_back(choice[cur]);
    cur &= ~(1u << (choice[cur] - 1));
  }
  std::reverse(out.order.begin(), out.order.end());
  return out;
}

}  // namespace bpmin
