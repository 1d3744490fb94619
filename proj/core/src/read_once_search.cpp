#include <algorithm>
#include <array>
#include <bit>
#include <chrono>

#include "bpmin/search.hpp"

namespace bpmin {

namespace {

using Clock = std::chrono::steady_clock;

// Function over <=8 variables as a 256-bit truth mask in table-index order.
struct FuncMask {
  std::array<std::uint64_t, 4> w{};
  friend FuncMask operator&(const FuncMask& a, const FuncMask& b) {
    FuncMask r;
    for (int i = 0; i < 4; ++i) r.w[i] = a.w[i] & b.w[i];
    return r;
  }
  friend FuncMask operator|(const FuncMask& a, const FuncMask& b) {
    FuncMask r;
    for (int i = 0; i < 4; ++i) r.w[i] = a.w[i] | b.w[i];
    return r;
  }
  auto operator<=>(const FuncMask&) const = default;
};

struct Searcher {
  const PartialTruthTable& target;
  int n;
  std::uint64_t rows;
  FuncMask need0, need1;  // defined-0 / defined-1 rows
  std::vector<std::vector<FuncMask>> sets;  // per exact variable subset
  SearchStats stats;
  const SearchBudget& budget;
  Clock::time_point start;
  bool budget_hit = false;

  Searcher(const PartialTruthTable& t, const SearchBudget& b)
      : target(t), n(t.n_vars()), rows(t.entries()), budget(b), start(Clock::now()) {
    for (std::uint64_t r = 0; r < rows; ++r) {
      if (t.at(r) == Trit::Zero) need0.w[r >> 6] |= std::uint64_t{1} << (r & 63);
      if (t.at(r) == Trit::One) need1.w[r >> 6] |= std::uint64_t{1} << (r & 63);
    }
    sets.resize(std::size_t{1} << n);
  }

  bool consistent(const FuncMask& f) const {
    for (int i = 0; i < 4; ++i)
      if ((f.w[i] & need0.w[i]) || (need1.w[i] & ~f.w[i])) return false;
    return true;
  }

  bool over_budget() {
    if (stats.expanded > budget.max_nodes_expanded) return budget_hit = true;
    if ((stats.expanded & 16383) == 0) {
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
              .count();
      if (ms > budget.wall_clock_ms) return budget_hit = true;
    }
    return false;
  }

  FuncMask literal_mask(int var, bool negated) const {
    FuncMask f;
    for (std::uint64_t r = 0; r < rows; ++r) {
      const bool bit = (r >> (n - var)) & 1;
      if (bit != negated) f.w[r >> 6] |= std::uint64_t{1} << (r & 63);
    }
    return f;
  }

  // The target admits a formula over subset S only if rows equal on S never
  // carry conflicting defined values.
  bool subset_admissible(std::uint32_t s) const {
    std::uint64_t proj_mask = 0;
    for (int v = 1; v <= n; ++v)
      if (s & (1u << (v - 1))) proj_mask |= std::uint64_t{1} << (n - v);
    std::vector<Trit> seen(std::size_t{1} << std::popcount(proj_mask), Trit::Star);
    for (std::uint64_t r = 0; r < rows; ++r) {
      const Trit t = target.at(r);
      if (t == Trit::Star) continue;
      // Compress the S-bits of r.
      std::uint64_t key = 0, k = 0;
      for (int b = n - 1; b >= 0; --b) {
        if (!(proj_mask & (std::uint64_t{1} << b))) continue;
        key |= ((r >> b) & 1) << k;
        ++k;
      }
      if (seen[key] == Trit::Star)
        seen[key] = t;
      else if (seen[key] != t)
        return false;
    }
    return true;
  }

  void build(std::uint32_t s) {
    auto& out = sets[s];
    if (std::popcount(s) == 1) {
      const int var = std::countr_zero(s) + 1;
      out.push_back(literal_mask(var, false));
      out.push_back(literal_mask(var, true));
      std::sort(out.begin(), out.end());
      return;
    }
    const std::uint32_t low = s & (s - 1) ? (s & -s) : s;
    // Splits with the lowest variable pinned to the left side.
    for (std::uint32_t t = (s - 1) & s; t; t = (t - 1) & s) {
      if (!(t & low)) continue;
      const std::uint32_t u = s ^ t;
      if (u == 0) continue;
      for (const FuncMask& g : sets[t])
        for (const FuncMask& h : sets[u]) {
          stats.expanded += 2;
          out.push_back(g & h);
          out.push_back(g | h);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  // Finds some (g, h, op) decomposition of `goal` over subset s, or a
  // literal; rebuilds the witness formula recursively.
  DeMorganFormula realize(std::uint32_t s, const FuncMask& goal) const {
    if (std::popcount(s) == 1) {
      const int var = std::countr_zero(s) + 1;
      for (bool neg : {false, true})
        if (literal_mask(var, neg) == goal) return DeMorganFormula::literal(n, var, neg);
      throw std::logic_error("read-once realize: literal mismatch");
    }
    const std::uint32_t low = s & -s;
    for (std::uint32_t t = (s - 1) & s; t; t = (t - 1) & s) {
      if (!(t & low)) continue;
      const std::uint32_t u = s ^ t;
      if (u == 0) continue;
      for (const FuncMask& g : sets[t])
        for (const FuncMask& h : sets[u]) {
          if ((g & h) == goal)
            return DeMorganFormula::gate(DeMorganFormula::Kind::And, realize(t, g),
                                         realize(u, h));
          if ((g | h) == goal)
            return DeMorganFormula::gate(DeMorganFormula::Kind::Or, realize(t, g),
                                         realize(u, h));
        }
    }
    throw std::logic_error("read-once realize: no decomposition");
  }
};

}  // namespace

FormulaSearchOutcome read_once_formula_search(const PartialTruthTable& target,
                                              const SearchBudget& budget) {
  const int n = target.n_vars();
  if (n < 1 || n > 8)
    throw ResourceLimitError("read_once_formula_search: cap is 1..8 variables");

  FormulaSearchOutcome out;
  Searcher sr(target, budget);

  std::vector<std::uint32_t> subsets;
  for (std::uint32_t s = 1; s < (1u << n); ++s) subsets.push_back(s);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::uint32_t a, std::uint32_t b) {
                     return std::popcount(a) < std::popcount(b);
                   });

  std::vector<char> admissible(std::size_t{1} << n, 0);
  for (std::uint32_t s : subsets) admissible[s] = sr.subset_admissible(s);

  for (std::uint32_t s : subsets) {
    // A subset is worth building if it can appear inside an admissible one.
    bool useful = false;
    for (std::uint32_t sup = s; sup < (1u << n) && !useful; sup = (sup + 1) | s)
      useful = admissible[sup];
    if (!useful) continue;
    sr.build(s);
    if (sr.over_budget()) break;
    if (!admissible[s]) continue;
    for (const FuncMask& f : sr.sets[s]) {
      if (sr.consistent(f)) {
        DeMorganFormula witness = sr.realize(s, f);
        if (!is_read_once_formula(witness))
          throw std::logic_error("read-once search produced a repeating witness");
        for (std::uint64_t r = 0; r < target.entries(); ++r) {
          const Trit want = target.at(r);
          if (want != Trit::Star &&
              (witness.evaluate_packed(r) ? Trit::One : Trit::Zero) != want)
            throw std::logic_error("read-once search produced a non-agreeing witness");
        }
        out.witness = std::move(witness);
        break;
      }
    }
    if (out.witness) break;
  }

  out.stats = sr.stats;
  out.stats.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - sr.start)
          .count();
  if (out.witness)
    out.verdict = Verdict::Found;
  else if (sr.budget_hit)
    out.verdict = Verdict::Inconclusive;
  else
    out.verdict = Verdict::ExhaustedNo;
  return out;
}

}  // namespace bpmin
