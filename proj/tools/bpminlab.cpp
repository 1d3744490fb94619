#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bpmin/bp.hpp"
#include "bpmin/bpis.hpp"
#include "bpmin/campaign.hpp"
#include "bpmin/encoders.hpp"
#include "bpmin/gamma.hpp"
#include "bpmin/search.hpp"

namespace {

using namespace bpmin;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << content;
}

int default_threads() {
  if (const char* env = std::getenv("BPMINLAB_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Found: return "found";
    case Verdict::ExhaustedNo: return "exhausted_no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

// Accepts either artifact format by its header token.
PartialTruthTable load_table(const std::string& path) {
  const std::string text = read_file(path);
  if (text.rfind("bp", 0) == 0) return to_truth_table(parse_bp(text, path));
  return parse_tt(text, path);
}

struct CommonOpts {
  std::string graph, in, out;
  int n = 0, s = 0;
  std::uint64_t seed = 0;
  std::int64_t budget_ms = INT64_MAX;
  std::uint64_t budget_nodes = UINT64_MAX;
  int threads = default_threads();
  std::string level;
  int graphs = 200;
  double p = 0.5;
};

SearchBudget make_budget(const CommonOpts& o) {
  SearchBudget b;
  b.wall_clock_ms = o.budget_ms;
  b.max_nodes_expanded = o.budget_nodes;
  b.threads = o.threads;
  return b;
}

int run(int argc, char** argv) {
  CLI::App app{"branching-program minimization lab"};
  app.require_subcommand(1);
  CommonOpts o;

  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget-ms", o.budget_ms, "wall-clock budget in milliseconds");
    cmd->add_option("--budget-nodes", o.budget_nodes,
                    "node-expansion budget per top-level branch");
    cmd->add_option("--threads", o.threads, "worker threads (env BPMINLAB_THREADS)");
  };

  auto* reduce_cmd = app.add_subcommand("reduce", "graph -> partial truth table");
  reduce_cmd->add_option("--graph", o.graph)->required();
  reduce_cmd->add_option("--out", o.out)->required();

  auto* gamma_cmd = app.add_subcommand("gamma-eval", "evaluate the graph function");
  gamma_cmd->add_option("--graph", o.graph)->required();
  std::string xs, ys, zs;
  gamma_cmd->add_option("x", xs, "x bits, variable 1 first")->required();
  gamma_cmd->add_option("y", ys)->required();
  gamma_cmd->add_option("z", zs)->required();

  auto* solve_cmd = app.add_subcommand("solve-bpis", "brute-force the instance");
  solve_cmd->add_option("--graph", o.graph)->required();

  auto* oabp_cmd = app.add_subcommand("oabp-search", "once-appearance program search");
  oabp_cmd->add_option("--in", o.in)->required();
  oabp_cmd->add_option("--out", o.out, "write the witness program here");
  add_budget(oabp_cmd);

  auto* minimize_cmd =
      app.add_subcommand("minimize", "decide whether size <= s suffices");
  minimize_cmd->add_option("--in", o.in, "bp or tt file")->required();
  minimize_cmd->add_option("--s", o.s)->required();
  add_budget(minimize_cmd);

  auto* mbpsp_cmd = app.add_subcommand("mbpsp-star", "partial-table size decision");
  mbpsp_cmd->add_option("--in", o.in)->required();
  mbpsp_cmd->add_option("--s", o.s)->required();
  mbpsp_cmd->add_option("--out", o.out, "write the witness program here");
  add_budget(mbpsp_cmd);

  auto* obdd_cmd = app.add_subcommand("obdd-min", "exact minimum OBDD size");
  obdd_cmd->add_option("--in", o.in)->required();

  auto* qc_cmd = app.add_subcommand("query-complexity", "decision-tree depth");
  qc_cmd->add_option("--in", o.in)->required();

  auto* enc_cmd = app.add_subcommand("encode-2bp", "graph -> exact read-2 program");
  enc_cmd->add_option("--graph", o.graph)->required();
  enc_cmd->add_option("--out", o.out)->required();

  auto* sat_cmd = app.add_subcommand("sat2bp", "DIMACS (3,4)-CNF -> program for ~phi");
  sat_cmd->add_option("--in", o.in)->required();
  sat_cmd->add_option("--out", o.out)->required();

  auto* verify_cmd = app.add_subcommand("verify", "run a verification campaign");
  verify_cmd->add_option("--level", o.level)->required()->check(
      CLI::IsMember({"lemmas-n2", "theorem-n4", "theorem-n6-sampled"}));
  auto* seed_opt = verify_cmd->add_option("--seed", o.seed, "campaign seed");
  verify_cmd->add_option("--graphs", o.graphs, "random graphs to sample");
  verify_cmd->add_option("--p", o.p, "edge probability");
  verify_cmd->add_option("--out", o.out, "also write the report here");
  add_budget(verify_cmd);

  CLI11_PARSE(app, argc, argv);

  if (reduce_cmd->parsed()) {
    const BpisInstance g = parse_bpis(read_file(o.graph), o.graph);
    const Reduction red = reduce(g);
    write_file(o.out, serialize_tt(red.table));
    std::ostringstream meta;
    meta << "meta n=" << g.n() << " s_bp=" << red.bp_size_budget
         << " s_formula_gates=" << red.formula_gate_budget << " graph=" << o.graph
         << "\n";
    write_file(o.out + ".meta", meta.str());
    std::cout << "entries=" << red.table.entries()
              << " defined=" << red.table.defined_count() << " s=" << red.bp_size_budget
              << "\n";
    return 0;
  }
  if (gamma_cmd->parsed()) {
    const BpisInstance g = parse_bpis(read_file(o.graph), o.graph);
    const GammaEval e =
        gamma_eval(g, pack_bits(xs), pack_bits(ys), pack_bits(zs));
    std::cout << "value=" << trit_to_char(e.value) << " case=" << gamma_case_name(e.matched)
              << "\n";
    return 0;
  }
  if (solve_cmd->parsed()) {
    const BpisInstance g = parse_bpis(read_file(o.graph), o.graph);
    const auto witness = solve_bpis(g);
    if (!witness) {
      std::cout << "bpis=no\n";
    } else {
      std::cout << "bpis=yes pi=";
      const auto pi = witness->pi_vector();
      for (std::size_t i = 0; i < pi.size(); ++i)
        std::cout << (i ? " " : "") << pi[i];
      std::cout << "\n";
    }
    return 0;
  }
  if (oabp_cmd->parsed()) {
    const PartialTruthTable table = load_table(o.in);
    const BpSearchOutcome r = oabp_search(table, make_budget(o));
    std::cout << "verdict=" << verdict_name(r.verdict)
              << " expanded=" << r.stats.expanded << " prunes=" << r.stats.prunes
              << " elapsed_ms=" << r.stats.elapsed_ms << "\n";
    if (r.witness && !o.out.empty()) write_file(o.out, serialize_bp(*r.witness));
    return 0;
  }
  if (minimize_cmd->parsed() || mbpsp_cmd->parsed()) {
    const PartialTruthTable table = load_table(o.in);
    const BpSearchOutcome r = mbpsp_star(table, o.s, make_budget(o));
    std::cout << "verdict=" << verdict_name(r.verdict);
    if (r.witness) std::cout << " witness_size=" << r.witness->size();
    std::cout << "\n";
    if (r.witness && !o.out.empty()) write_file(o.out, serialize_bp(*r.witness));
    return 0;
  }
  if (obdd_cmd->parsed()) {
    const ObddMinimizeResult r = obdd_minimize(load_table(o.in));
    std::cout << "size=" << r.size << " order=";
    for (std::size_t i = 0; i < r.order.size(); ++i)
      std::cout << (i ? " " : "") << r.order[i];
    std::cout << "\n";
    return 0;
  }
  if (qc_cmd->parsed()) {
    std::cout << "qc=" << query_complexity(load_table(o.in)) << "\n";
    return 0;
  }
  if (enc_cmd->parsed()) {
    const BpisInstance g = parse_bpis(read_file(o.graph), o.graph);
    const BranchingProgram bp = encode_gamma_2bp(g);
    write_file(o.out, serialize_bp(bp));
    std::cout << "nodes=" << bp.size() << " reads=" << classify(bp).max_reads << "\n";
    return 0;
  }
  if (sat_cmd->parsed()) {
    const Cnf34 phi = parse_dimacs(read_file(o.in), o.in);
    const BranchingProgram bp = sat_to_bp(phi);
    write_file(o.out, serialize_bp(bp));
    std::cout << "nodes=" << bp.size() << "\n";
    return 0;
  }
  if (verify_cmd->parsed()) {
    if (o.level != "lemmas-n2" && seed_opt->count() == 0) {
      std::cerr << "verify: --seed is required for random campaigns\n";
      return 2;
    }
    CampaignConfig config;
    config.level = o.level;
    config.seed = o.seed;
    config.budget = make_budget(o);
    config.graphs = o.graphs;
    config.edge_probability = o.p;
    const CampaignReport report = run_campaign(config);
    const std::string text = report.to_text();
    std::cout << text;
    if (!o.out.empty()) write_file(o.out, text);
    return report.exit_code();
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
