#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpmin/search.hpp"

namespace bpmin {

/// Verification campaign parameters. `level` is one of "lemmas-n2",
/// "theorem-n4", "theorem-n6-sampled". The seed drives the random graph
/// sample and is required for the theorem levels.
struct CampaignConfig {
  std::string level;
  std::uint64_t seed = 0;
  SearchBudget budget;     // per-graph search budget; threads drive
                           // graph-level parallelism
  int graphs = 200;        // random graphs in addition to the two extremes
  double edge_probability = 0.5;
};

struct CampaignReport {
  std::string level;
  std::vector<std::string> lines;  // body, one key=value record per line
  int graphs_total = 0;
  int yes_found = 0;
  int no_exhausted = 0;
  int yes_exhausted = 0;  // disagreement
  int no_found = 0;       // disagreement
  int inconclusive = 0;
  int lemma_violations = 0;
  int forward_failures = 0;

  int disagreements() const { return yes_exhausted + no_found; }
  bool ok() const {
    return disagreements() == 0 && inconclusive == 0 && lemma_violations == 0 &&
           forward_failures == 0;
  }
  /// 0 ok, 3 disagreement/violation, 4 inconclusive-beyond-budget.
  int exit_code() const;

  /// key=value body plus a one-object JSON summary; the timestamp header
  /// line is the only non-deterministic output and can be omitted.
  std::string to_text(bool with_timestamp = true) const;
};

CampaignReport run_campaign(const CampaignConfig& config);

}  // namespace bpmin
