#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bpmin/bp.hpp"
#include "bpmin/formula.hpp"
#include "helpers.hpp"

using namespace bpmin;
using bpmin::testing::mux_program;
using bpmin::testing::random_assignment;
using bpmin::testing::random_bp;
using bpmin::testing::table_of;

namespace {

PartialAssignment assign(int n, std::initializer_list<std::pair<int, Trit>> parts) {
  PartialAssignment a(n);
  for (auto [v, t] : parts) a.set(v, t);
  return a;
}

}  // namespace

TEST_CASE("evaluate follows the unique path") {
  const BranchingProgram g = mux_program();
  CHECK(g.evaluate(assign(3, {{1, Trit::One}, {2, Trit::One}, {3, Trit::Zero}})) ==
        Trit::One);
  CHECK(g.evaluate(assign(3, {{1, Trit::Zero}, {2, Trit::One}, {3, Trit::Zero}})) ==
        Trit::Zero);
  const BranchingProgram zero = BranchingProgram::constant(3, Trit::Zero);
  CHECK(zero.evaluate(assign(3, {{1, Trit::One}, {2, Trit::Zero}, {3, Trit::One}})) ==
        Trit::Zero);
}

TEST_CASE("to_truth_table of the multiplexer") {
  CHECK(to_truth_table(mux_program()) == table_of(3, "01010011"));
  CHECK(to_truth_table(BranchingProgram::constant(2, Trit::Zero)) ==
        table_of(2, "0000"));
  const BranchingProgram x1(
      1, {BpNode{1, EdgeTarget::sink(Trit::Zero), EdgeTarget::sink(Trit::One)}});
  CHECK(to_truth_table(x1) == table_of(1, "01"));
  CHECK_THROWS_AS(to_truth_table(mux_program(), 2), ResourceLimitError);
}

TEST_CASE("restrict the multiplexer") {
  const BranchingProgram g = mux_program();
  SUBCASE("y=0 z=1 leaves ~x") {
    const BranchingProgram r = restrict(g, assign(3, {{2, Trit::Zero}, {3, Trit::One}}));
    CHECK(r.n_vars() == 1);
    CHECK(r.size() == 1);
    CHECK(to_truth_table(r) == table_of(1, "10"));
  }
  SUBCASE("empty support keeps the program") {
    CHECK(restrict(g, PartialAssignment(3)) == g);
  }
  SUBCASE("x=1 leaves the y node") {
    const BranchingProgram r = restrict(g, assign(3, {{1, Trit::One}}));
    CHECK(r.size() == 1);
    CHECK(r.node(0).var == 1);  // y, renumbered
    CHECK(to_truth_table(r) == table_of(2, "0011"));
  }
  SUBCASE("total assignment collapses to a constant") {
    const BranchingProgram r =
        restrict(g, assign(3, {{1, Trit::One}, {2, Trit::One}, {3, Trit::Zero}}));
    CHECK(r.is_constant());
    CHECK(r.constant_value() == Trit::One);
  }
}

TEST_CASE("restriction commutes with truth tables") {
  std::mt19937 rng(7001);
  for (int round = 0; round < 300; ++round) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int size = static_cast<int>(rng() % 7);
    const BranchingProgram bp = random_bp(rng, n, size, round % 3 == 0);
    const PartialAssignment alpha = random_assignment(rng, n, 0.4);
    CHECK(to_truth_table(restrict(bp, alpha)) ==
          to_truth_table(bp).restricted(alpha));
  }
}

TEST_CASE("sequential restriction equals the union restriction") {
  std::mt19937 rng(7002);
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const BranchingProgram bp = random_bp(rng, n, 1 + rng() % 6);
    const PartialAssignment a = random_assignment(rng, n, 0.3);
    PartialAssignment b(n);
    for (int v = 1; v <= n; ++v)
      if (!a.is_assigned(v) && rng() % 3 == 0)
        b.set(v, rng() % 2 ? Trit::One : Trit::Zero);

    // b expressed inside restrict(bp, a)'s renumbered variable space.
    std::vector<int> remaining;
    for (int v = 1; v <= n; ++v)
      if (!a.is_assigned(v)) remaining.push_back(v);
    PartialAssignment b_reindexed(static_cast<int>(remaining.size()));
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (b.is_assigned(remaining[i]))
        b_reindexed.set(static_cast<int>(i) + 1, b.get(remaining[i]));

    CHECK(to_truth_table(restrict(restrict(bp, a), b_reindexed)) ==
          to_truth_table(restrict(bp, a.disjoint_union(b))));
  }
}

TEST_CASE("classify") {
  SUBCASE("multiplexer is a once-appearance tree") {
    const ClassReport r = classify(mux_program());
    CHECK(r.is_oabp);
    CHECK(r.max_reads == 1);
    REQUIRE(r.obdd_order.has_value());
    CHECK((*r.obdd_order == std::vector<int>{1, 2, 3} ||
           *r.obdd_order == std::vector<int>{1, 3, 2}));
  }
  SUBCASE("repeated variable on a path") {
    const BranchingProgram twice(
        2, {BpNode{1, EdgeTarget::node(1), EdgeTarget::sink(Trit::One)},
            BpNode{1, EdgeTarget::sink(Trit::Zero), EdgeTarget::sink(Trit::One)}});
    const ClassReport r = classify(twice);
    CHECK_FALSE(r.is_oabp);
    CHECK(r.max_reads == 2);
    CHECK_FALSE(r.obdd_order.has_value());
  }
  SUBCASE("read-once but no global order") {
    const BranchingProgram conflict(
        3, {BpNode{3, EdgeTarget::node(1), EdgeTarget::node(3)},
            BpNode{1, EdgeTarget::node(2), EdgeTarget::sink(Trit::One)},
            BpNode{2, EdgeTarget::sink(Trit::Zero), EdgeTarget::sink(Trit::One)},
            BpNode{2, EdgeTarget::node(4), EdgeTarget::sink(Trit::One)},
            BpNode{1, EdgeTarget::sink(Trit::Zero), EdgeTarget::sink(Trit::One)}});
    const ClassReport r = classify(conflict);
    CHECK_FALSE(r.is_oabp);
    CHECK(r.max_reads == 1);
    CHECK_FALSE(r.obdd_order.has_value());
  }
}

TEST_CASE("read-once recognition") {
  const int n = 3;
  auto x = [&](int v) { return DeMorganFormula::literal(n, v); };
  auto nx = [&](int v) { return DeMorganFormula::literal(n, v, true); };
  using K = DeMorganFormula::Kind;
  const auto read_once =
      DeMorganFormula::gate(K::Or, x(1), DeMorganFormula::gate(K::And, nx(2), x(3)));
  CHECK(is_read_once_formula(read_once));
  const auto repeating = DeMorganFormula::gate(
      K::Or, DeMorganFormula::gate(K::And, x(1), x(2)),
      DeMorganFormula::gate(K::And, nx(1), x(3)));
  CHECK_FALSE(is_read_once_formula(repeating));
  CHECK(is_read_once_formula(x(2)));
}

TEST_CASE("formula_to_oabp") {
  const int n = 3;
  auto x = [&](int v) { return DeMorganFormula::literal(n, v); };
  auto nx = [&](int v) { return DeMorganFormula::literal(n, v, true); };
  using K = DeMorganFormula::Kind;

  SUBCASE("x | (~y & z)") {
    const auto f =
        DeMorganFormula::gate(K::Or, x(1), DeMorganFormula::gate(K::And, nx(2), x(3)));
    const BranchingProgram bp = formula_to_oabp(f);
    CHECK(bp.size() == 3);
    CHECK(classify(bp).is_oabp);
    CHECK(to_truth_table(bp) == f.truth_table());
  }
  SUBCASE("single negated literal swaps the sinks") {
    const BranchingProgram bp = formula_to_oabp(DeMorganFormula::literal(1, 1, true));
    CHECK(bp.size() == 1);
    CHECK(to_truth_table(bp) == table_of(1, "10"));
  }
  SUBCASE("repeating formula is rejected") {
    const auto repeating = DeMorganFormula::gate(K::And, x(1), x(1));
    CHECK_THROWS_AS(formula_to_oabp(repeating), std::invalid_argument);
  }
}

TEST_CASE("formula_to_oabp on random read-once trees") {
  std::mt19937 rng(7003);
  using K = DeMorganFormula::Kind;
  for (int round = 0; round < 200; ++round) {
    const int n = 1 + static_cast<int>(rng() % 10);
    std::vector<int> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = i + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    const int leaves = 1 + static_cast<int>(rng() % n);
    std::vector<DeMorganFormula> forest;
    for (int i = 0; i < leaves; ++i)
      forest.push_back(DeMorganFormula::literal(n, vars[i], rng() % 2 == 0));
    while (forest.size() > 1) {
      const int a = static_cast<int>(rng() % forest.size());
      DeMorganFormula fa = forest[a];
      forest.erase(forest.begin() + a);
      const int b = static_cast<int>(rng() % forest.size());
      DeMorganFormula fb = forest[b];
      forest.erase(forest.begin() + b);
      forest.push_back(
          DeMorganFormula::gate(rng() % 2 ? K::And : K::Or, fa, fb));
    }
    const DeMorganFormula& f = forest.front();
    REQUIRE(is_read_once_formula(f));
    const BranchingProgram bp = formula_to_oabp(f);
    CHECK(classify(bp).is_oabp);
    CHECK(bp.size() == f.leaf_count());
    CHECK(to_truth_table(bp) == f.truth_table());
  }
}

TEST_CASE("bp text format round-trip") {
  std::mt19937 rng(7004);
  for (int round = 0; round < 200; ++round) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const BranchingProgram bp = random_bp(rng, n, rng() % 7, round % 2 == 0);
    const std::string text = serialize_bp(bp);
    CHECK(parse_bp(text) == bp);
  }
  const PartialTruthTable t = table_of(2, "01*1");
  CHECK(parse_tt(serialize_tt(t)) == t);
}

TEST_CASE("bp parser diagnostics") {
  CHECK_THROWS_WITH_AS(parse_bp("bp n=2 sinks=2\n", "f.bp"),
                       doctest::Contains("f.bp:2"), ParseError);
  CHECK_THROWS_AS(parse_bp("bp n=2 sinks=2\n0 v=1 0=>S0 1=>S*\n", "f.bp"), ParseError);
  CHECK_THROWS_AS(parse_bp("bp n=2 sinks=2\n0 v=1 0=>0 1=>S1\n", "f.bp"), ParseError);
  CHECK_THROWS_AS(parse_tt("tt n=2\n01\n", "f.tt"), ParseError);
  CHECK_THROWS_AS(parse_tt("tt n=1\n0x\n", "f.tt"), ParseError);
  const BranchingProgram c = parse_bp("bp n=3 sinks=3\nconst S*\n");
  CHECK(c.is_constant());
  CHECK(c.constant_value() == Trit::Star);
}

TEST_CASE("assignment plumbing") {
  PartialAssignment a(4);
  a.set(1, Trit::One);
  a.set(3, Trit::Zero);
  PartialAssignment b(4);
  b.set(2, Trit::Zero);
  const PartialAssignment u = a.disjoint_union(b);
  CHECK(u.support() == std::vector<int>{1, 2, 3});
  b.set(1, Trit::Zero);
  CHECK_THROWS_AS(a.disjoint_union(b), std::invalid_argument);
}
