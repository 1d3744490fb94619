#include <atomic>
#include <bit>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

#include "bpmin/search.hpp"

namespace bpmin {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kEvenMasks[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
    0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull,
};

// Slot-edge encoding: >=0 is a future slot, -1/-2 the 0-/1-sink.
constexpr int kSink0 = -1;
constexpr int kSink1 = -2;

EdgeTarget decode(int t) {
  if (t >= 0) return EdgeTarget::node(t);
  return EdgeTarget::sink(t == kSink0 ? Trit::Zero : Trit::One);
}

// out(a) = in(a with index bit p forced to alpha); both halves of every
// 2^{p+1} block receive the selected half.
void restrict_mask(const std::uint64_t* in, std::uint64_t* out, int words, int p,
                   bool alpha) {
  if (p >= 6) {
    const int half = 1 << (p - 6);
    for (int base = 0; base < words; base += 2 * half) {
      const std::uint64_t* src = in + base + (alpha ? half : 0);
      std::memcpy(out + base, src, sizeof(std::uint64_t) * half);
      std::memcpy(out + base + half, src, sizeof(std::uint64_t) * half);
    }
  } else {
    const int stride = 1 << p;
    const std::uint64_t m = kEvenMasks[p];
    for (int w = 0; w < words; ++w) {
      if (alpha) {
        const std::uint64_t t = in[w] & ~m;
        out[w] = t | (t >> stride);
      } else {
        const std::uint64_t t = in[w] & m;
        out[w] = t | (t << stride);
      }
    }
  }
}

bool any_bit(const std::uint64_t* a, int words) {
  for (int w = 0; w < words; ++w)
    if (a[w]) return true;
  return false;
}

struct TaskOutcome {
  bool node_budget_hit = false;
  bool time_budget_hit = false;
  SearchStats stats;
};

// One depth-first worker over the n! label orders x edge wirings, with a
// per-frontier-slot requirement table (what the subprogram rooted there
// must still produce, quotient by the variables read so far).
class OabpDfs {
 public:
  OabpDfs(const PartialTruthTable& target, const SearchBudget& budget,
          Clock::time_point deadline_start, std::atomic<bool>& stop,
          const std::function<bool(const BranchingProgram&)>& emit)
      : target_(target),
        n_(target.n_vars()),
        words_(static_cast<int>((target.entries() + 63) / 64)),
        budget_(budget),
        start_(deadline_start),
        stop_(stop),
        emit_(emit) {
    req0_.assign(static_cast<std::size_t>(n_) * words_, 0);
    req1_.assign(static_cast<std::size_t>(n_) * words_, 0);
    in_edges_.assign(n_, 0);
    labels_.assign(n_, 0);
    lo_.assign(n_, kSink0);
    hi_.assign(n_, kSink0);
    used_ = 0;
    scratch_.assign(static_cast<std::size_t>(n_) * 4 * words_, 0);
    saved_.assign(static_cast<std::size_t>(n_) * 4 * words_, 0);
    saved_slot_.assign(static_cast<std::size_t>(n_) * 2, -1);
    for (std::uint64_t a = 0; a < target.entries(); ++a) {
      if (target.at(a) == Trit::Zero) req0_[a >> 6] |= std::uint64_t{1} << (a & 63);
      if (target.at(a) == Trit::One) req1_[a >> 6] |= std::uint64_t{1} << (a & 63);
    }
    in_edges_[0] = 1;  // the source
  }

  /// Runs one top-level branch (slot 0 fully fixed). Returns its outcome.
  TaskOutcome run_task(int label0, int e0, int e1) {
    out_ = TaskOutcome{};
    if (apply_root(label0, e0, e1)) {
      dfs(1);
      undo_edge(0, 1);
      undo_edge(0, 0);
    }
    return out_;
  }

 private:
  std::uint64_t* req0(int slot) { return req0_.data() + static_cast<std::size_t>(slot) * words_; }
  std::uint64_t* req1(int slot) { return req1_.data() + static_cast<std::size_t>(slot) * words_; }
  std::uint64_t* scratch(int level, int k) {
    return scratch_.data() + (static_cast<std::size_t>(level) * 4 + k) * words_;
  }
  std::uint64_t* save_buf(int level, int k) {
    return saved_.data() + (static_cast<std::size_t>(level) * 4 + k * 2) * words_;
  }

  bool over_budget() {
    if (out_.stats.expanded > budget_.max_nodes_expanded) {
      out_.node_budget_hit = true;
      return true;
    }
    if ((out_.stats.expanded & 8191) == 0) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          Clock::now() - start_)
                          .count();
      if (ms > budget_.wall_clock_ms) {
        out_.time_budget_hit = true;
        return true;
      }
    }
    return false;
  }

  // Edge application: checks feasibility, meets the restricted requirement
  // into a slot (saving the old content), or validates a sink edge.
  bool apply_edge(int level, int which, int target, const std::uint64_t* rn0,
                  const std::uint64_t* rn1) {
    saved_slot_[static_cast<std::size_t>(level) * 2 + which] = -1;
    if (target == kSink0) return !any_bit(rn1, words_);
    if (target == kSink1) return !any_bit(rn0, words_);
    std::uint64_t* t0 = req0(target);
    std::uint64_t* t1 = req1(target);
    for (int w = 0; w < words_; ++w)
      if ((t0[w] | rn0[w]) & (t1[w] | rn1[w])) return false;
    std::uint64_t* s = save_buf(level, which);
    std::memcpy(s, t0, sizeof(std::uint64_t) * words_);
    std::memcpy(s + words_, t1, sizeof(std::uint64_t) * words_);
    saved_slot_[static_cast<std::size_t>(level) * 2 + which] = target;
    for (int w = 0; w < words_; ++w) {
      t0[w] |= rn0[w];
      t1[w] |= rn1[w];
    }
    ++in_edges_[target];
    return true;
  }

  void undo_edge(int level, int which) {
    const int slot = saved_slot_[static_cast<std::size_t>(level) * 2 + which];
    if (slot < 0) return;
    std::uint64_t* s = save_buf(level, which);
    std::memcpy(req0(slot), s, sizeof(std::uint64_t) * words_);
    std::memcpy(req1(slot), s + words_, sizeof(std::uint64_t) * words_);
    --in_edges_[slot];
    saved_slot_[static_cast<std::size_t>(level) * 2 + which] = -1;
  }

  bool apply_root(int label0, int e0, int e1) {
    labels_[0] = label0;
    lo_[0] = e0;
    hi_[0] = e1;
    used_ = 1u << (label0 - 1);
    const int p = n_ - label0;
    restrict_mask(req0(0), scratch(0, 0), words_, p, false);
    restrict_mask(req1(0), scratch(0, 1), words_, p, false);
    restrict_mask(req0(0), scratch(0, 2), words_, p, true);
    restrict_mask(req1(0), scratch(0, 3), words_, p, true);
    ++out_.stats.expanded;
    if (!apply_edge(0, 0, e0, scratch(0, 0), scratch(0, 1))) {
      ++out_.stats.prunes;
      return false;
    }
    if (!apply_edge(0, 1, e1, scratch(0, 2), scratch(0, 3))) {
      undo_edge(0, 0);
      ++out_.stats.prunes;
      return false;
    }
    return true;
  }

  void emit_witness() {
    std::vector<BpNode> nodes(n_);
    for (int i = 0; i < n_; ++i)
      nodes[i] = BpNode{labels_[i], decode(lo_[i]), decode(hi_[i])};
    BranchingProgram bp(n_, std::move(nodes));
    if (!agrees_with_table(bp, target_))
      throw std::logic_error("oabp search produced a non-agreeing witness");
    if (!emit_(bp)) stop_.store(true, std::memory_order_relaxed);
  }

  void dfs(int i) {
    if (stop_.load(std::memory_order_relaxed)) return;
    if (i == n_) {
      emit_witness();
      return;
    }
    if (in_edges_[i] == 0) {  // no remaining edge can reach this slot
      ++out_.stats.prunes;
      return;
    }
    for (int var = 1; var <= n_; ++var) {
      if (used_ & (1u << (var - 1))) continue;
      used_ |= 1u << (var - 1);
      labels_[i] = var;
      const int p = n_ - var;
      std::uint64_t* r0n0 = scratch(i, 0);
      std::uint64_t* r0n1 = scratch(i, 1);
      std::uint64_t* r1n0 = scratch(i, 2);
      std::uint64_t* r1n1 = scratch(i, 3);
      restrict_mask(req0(i), r0n0, words_, p, false);
      restrict_mask(req1(i), r0n1, words_, p, false);
      restrict_mask(req0(i), r1n0, words_, p, true);
      restrict_mask(req1(i), r1n1, words_, p, true);

      for (int e0 = kSink1; e0 < n_; ++e0) {
        if (e0 >= 0 && e0 <= i) continue;
        for (int e1 = kSink1; e1 < n_; ++e1) {
          if (e1 == e0) continue;  // a node with equal targets reads a dead variable
          if (e1 >= 0 && e1 <= i) continue;
          ++out_.stats.expanded;
          if (over_budget()) {
            used_ &= ~(1u << (var - 1));
            return;
          }
          if (!apply_edge(i, 0, e0, r0n0, r0n1)) {
            ++out_.stats.prunes;
            continue;
          }
          if (!apply_edge(i, 1, e1, r1n0, r1n1)) {
            undo_edge(i, 0);
            ++out_.stats.prunes;
            continue;
          }
          lo_[i] = e0;
          hi_[i] = e1;
          dfs(i + 1);
          undo_edge(i, 1);
          undo_edge(i, 0);
          if (stop_.load(std::memory_order_relaxed) || out_.node_budget_hit ||
              out_.time_budget_hit) {
            used_ &= ~(1u << (var - 1));
            return;
          }
        }
      }
      used_ &= ~(1u << (var - 1));
    }
  }

  const PartialTruthTable& target_;
  int n_;
  int words_;
  SearchBudget budget_;
  Clock::time_point start_;
  std::atomic<bool>& stop_;
  const std::function<bool(const BranchingProgram&)>& emit_;

  std::vector<std::uint64_t> req0_, req1_, scratch_, saved_;
  std::vector<int> in_edges_, labels_, lo_, hi_;
  std::vector<int> saved_slot_;
  std::uint32_t used_ = 0;
  TaskOutcome out_;
};

struct EngineResult {
  bool any_node_budget_hit = false;
  bool any_time_budget_hit = false;
  bool stopped_by_emit = false;
  SearchStats stats;
};

EngineResult run_engine(const PartialTruthTable& target, const SearchBudget& budget,
                        const std::function<bool(const BranchingProgram&)>& emit) {
  const int n = target.n_vars();
  if (n < 1 || n > 20)
    throw ResourceLimitError("oabp search supports 1..20 variables");
  if (budget.threads < 1 || budget.wall_clock_ms <= 0 || budget.max_nodes_expanded == 0)
    throw std::invalid_argument("oabp search: budget fields must be positive");

  struct Task {
    int label, e0, e1;
  };
  std::vector<Task> tasks;
  for (int var = 1; var <= n; ++var)
    for (int e0 = kSink1; e0 < n; ++e0) {
      if (e0 == 0) continue;
      for (int e1 = kSink1; e1 < n; ++e1) {
        if (e1 == 0 || e1 == e0) continue;
        tasks.push_back({var, e0, e1});
      }
    }

  const auto start = Clock::now();
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> next{0};
  std::mutex merge_mu;
  EngineResult result;

  std::mutex emit_mu;
  const std::function<bool(const BranchingProgram&)> guarded_emit =
      [&](const BranchingProgram& bp) {
        std::lock_guard<std::mutex> lock(emit_mu);
        bool keep_going = emit(bp);
        if (!keep_going) result.stopped_by_emit = true;
        return keep_going;
      };

  auto worker = [&]() {
    OabpDfs dfs(target, budget, start, stop, guarded_emit);
    for (;;) {
      const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= tasks.size() || stop.load(std::memory_order_relaxed)) break;
      TaskOutcome out = dfs.run_task(tasks[t].label, tasks[t].e0, tasks[t].e1);
      std::lock_guard<std::mutex> lock(merge_mu);
      result.stats.expanded += out.stats.expanded;
      result.stats.prunes += out.stats.prunes;
      result.any_node_budget_hit |= out.node_budget_hit;
      result.any_time_budget_hit |= out.time_budget_hit;
    }
  };

  const int thread_count = std::min<int>(budget.threads, static_cast<int>(tasks.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  result.stats.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  return result;
}

}  // namespace

BpSearchOutcome oabp_search(const PartialTruthTable& target, const SearchBudget& budget) {
  BpSearchOutcome out;
  std::optional<BranchingProgram> witness;
  EngineResult r = run_engine(target, budget, [&](const BranchingProgram& bp) {
    if (!witness) witness = bp;
    return false;  // stop at the first witness
  });
  out.stats = r.stats;
  out.witness = std::move(witness);
  if (out.witness)
    out.verdict = Verdict::Found;
  else if (r.any_node_budget_hit || r.any_time_budget_hit)
    out.verdict = Verdict::Inconclusive;
  else
    out.verdict = Verdict::ExhaustedNo;
  return out;
}

OabpEnumerationResult oabp_enumerate(
    const PartialTruthTable& target, const SearchBudget& budget,
    const std::function<bool(const BranchingProgram&)>& on_witness) {
  EngineResult r = run_engine(target, budget, on_witness);
  OabpEnumerationResult out;
  out.stats = r.stats;
  out.complete = !r.any_node_budget_hit && !r.any_time_budget_hit && !r.stopped_by_emit;
  return out;
}

}  // namespace bpmin
