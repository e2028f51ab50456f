#include <doctest.h>

#include <algorithm>
#include <set>

#include <cdp/engine.hpp>
#include <cdp/oracle.hpp>

#include "support/random_instance.hpp"

using namespace cdp;

namespace {

std::vector<std::vector<std::int64_t>> raw(const std::vector<Valuation>& vs) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& v : vs) out.push_back(v.values());
  return out;
}

std::vector<std::vector<std::int64_t>> sorted_raw(std::vector<Valuation> vs) {
  std::sort(vs.begin(), vs.end());
  return raw(vs);
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("root propagation narrows bounds") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 10));
    inst.add_constraint(inst.ref(x) < 4);
    Solver s(inst);
    CHECK_FALSE(s.failed());
    CHECK(s.current_values(x) == std::vector<std::int64_t>{1, 2, 3});
  }

  TEST_CASE("contradictory conjunction fails at the root") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 2));
    inst.add_constraint(ex::conj({ex::eq(inst.ref(x), ex::lit(1)), ex::eq(inst.ref(x), ex::lit(2))}));
    Solver s(inst);
    CHECK(s.failed());
    CHECK_FALSE(s.next_solution());
  }

  TEST_CASE("supported values survive") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 2));
    VarId y = inst.add_var("y", Domain::interval(0, 2));
    inst.add_constraint(inst.ref(x) + inst.ref(y) >= 2);
    Solver s(inst);
    CHECK(s.current_values(x) == std::vector<std::int64_t>{0, 1, 2});
    CHECK(s.current_values(y) == std::vector<std::int64_t>{0, 1, 2});
  }

  TEST_CASE("enumeration order without constraints") {
    Instance inst;
    inst.add_var("x", Domain::interval(1, 3));
    Solver s(inst);
    CHECK(s.next_solution()->values() == std::vector<std::int64_t>{1});
    CHECK(s.next_solution()->values() == std::vector<std::int64_t>{2});
    CHECK(s.next_solution()->values() == std::vector<std::int64_t>{3});
    CHECK_FALSE(s.next_solution());
    CHECK_FALSE(s.next_solution());
  }

  TEST_CASE("clause propagation picks the first model") {
    Instance inst;
    VarId a = inst.add_var("x1", Domain::boolean());
    VarId b = inst.add_var("x2", Domain::boolean());
    inst.add_constraint(inst.ref(a) || inst.ref(b));
    Solver s(inst);
    CHECK(s.next_solution()->values() == std::vector<std::int64_t>{0, 1});
    CHECK(enumerate_all(inst, 100).size() == 3);
  }

  TEST_CASE("x < y enumeration") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 3));
    VarId y = inst.add_var("y", Domain::interval(1, 3));
    inst.add_constraint(inst.ref(x) < inst.ref(y));
    auto all = enumerate_all(inst, 100);
    CHECK(raw(all) == std::vector<std::vector<std::int64_t>>{{1, 2}, {1, 3}, {2, 3}});
  }

  TEST_CASE("unsatisfiable instance enumerates nothing") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 3));
    inst.add_constraint(inst.ref(x) > 5);
    CHECK(enumerate_all(inst, 10).empty());
  }

  TEST_CASE("zero variables give one empty solution") {
    Instance inst;
    Solver s(inst);
    auto first = s.next_solution();
    REQUIRE(first);
    CHECK(first->size() == 0);
    CHECK_FALSE(s.next_solution());
  }

  TEST_CASE("constraint added after a leaf closes the rest of the tree") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 3));
    Solver s(inst);
    CHECK(s.next_solution()->values() == std::vector<std::int64_t>{1});
    s.add_constraint(inst.ref(x) < 2);
    CHECK_FALSE(s.next_solution());
  }

  TEST_CASE("improving objective nogoods") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 4));
    VarId y = inst.add_var("y", Domain::interval(0, 4));
    inst.add_constraint(inst.ref(x) + inst.ref(y) >= 3);
    const Expr f = ex::mul(2, inst.ref(x)) - inst.ref(y);
    SearchConfig cfg;
    cfg.val_order = ValOrder::max_first;
    Solver s(inst, cfg);
    std::vector<std::int64_t> seen;
    while (auto sol = s.next_solution()) {
      const std::int64_t v = evaluate_int(f, *sol);
      if (!seen.empty()) CHECK(v < seen.back());
      seen.push_back(v);
      s.add_constraint(f < v);
    }
    CHECK(seen.back() == -4);
  }

  TEST_CASE("node limit is reported distinctly") {
    Instance inst;
    for (int i = 0; i < 10; ++i) inst.add_var("x" + std::to_string(i), Domain::interval(0, 3));
    SearchConfig cfg;
    cfg.node_limit = 5;
    Solver s(inst, cfg);
    CHECK_THROWS_AS(
        [&] {
          while (s.next_solution()) {
          }
        }(),
        LimitExceeded);
    CHECK_THROWS_AS(s.next_solution(), Error);
  }

  TEST_CASE("enumerate_all honours its limit") {
    Instance inst;
    inst.add_var("x", Domain::interval(1, 5));
    CHECK_THROWS_AS(enumerate_all(inst, 4), LimitExceeded);
    CHECK(enumerate_all(inst, 5).size() == 5);
  }

  TEST_CASE("wide domains are rejected") {
    Instance inst;
    inst.add_var("x", Domain::interval(0, std::int64_t{1} << 21));
    CHECK_THROWS_AS(Solver{inst}, ModelError);
  }

  TEST_CASE("variable and value orders") {
    Instance inst;
    VarId a = inst.add_var("a", Domain::interval(0, 3));
    VarId b = inst.add_var("b", Domain::interval(0, 1));
    SearchConfig ff;
    ff.var_order = VarOrder::first_fail;
    ff.val_order = ValOrder::max_first;
    Solver s(inst, ff);
    // b has the smaller domain and is branched first, largest value first.
    CHECK(s.next_solution()->values() == std::vector<std::int64_t>{3, 1});
    CHECK(s.next_solution()->values() == std::vector<std::int64_t>{2, 1});

    SearchConfig pref;
    pref.val_order = ValOrder::preferred;
    pref.preferences[a] = {2, 0};
    pref.var_order = VarOrder::explicit_list;
    pref.explicit_order = {b};
    auto all = enumerate_all(inst, 100, pref);
    CHECK(raw(all).front() == std::vector<std::int64_t>{2, 0});
    CHECK(raw(all)[1] == std::vector<std::int64_t>{0, 0});
    CHECK(raw(all)[2] == std::vector<std::int64_t>{1, 0});
  }

  TEST_CASE("engine agrees with brute-force filtering on random instances") {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
      Rng rng(seed);
      Instance inst = testing::random_instance(rng);
      SearchConfig cfg;
      cfg.var_order = static_cast<VarOrder>(seed % 2);
      cfg.val_order = static_cast<ValOrder>(seed % 3 == 2 ? 0 : seed % 3);
      auto got = enumerate_all(inst, 1u << 20, cfg);
      for (const auto& v : got) REQUIRE(check(inst, v));
      CAPTURE(seed);
      REQUIRE(sorted_raw(got) == raw(brute_solutions_serial(inst, 1u << 20)));
    }
  }

  TEST_CASE("incremental constraints match a restart") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
      Rng rng(seed * 7919);
      testing::InstanceShape shape;
      shape.max_vars = 5;
      Instance inst = testing::random_instance(rng, shape);
      Solver s(inst);
      std::vector<Valuation> before;
      std::vector<Expr> added;
      const auto cut = rng.below(4);
      for (std::uint64_t i = 0; i < cut; ++i) {
        auto sol = s.next_solution();
        if (!sol) break;
        before.push_back(*sol);
      }
      const auto extra = rng.between(1, 2);
      for (std::int64_t i = 0; i < extra; ++i) {
        added.push_back(testing::random_constraint(rng, inst));
        s.add_constraint(added.back());
      }
      std::vector<Valuation> after;
      while (auto sol = s.next_solution()) after.push_back(*sol);

      Instance full = inst;
      for (const Expr& c : added) full.add_constraint(c);
      std::vector<Valuation> expected;
      for (const Valuation& v : brute_solutions_serial(full, 1u << 20))
        if (std::find(before.begin(), before.end(), v) == before.end()) expected.push_back(v);
      CAPTURE(seed);
      CHECK(sorted_raw(after) == raw(expected));
    }
  }

  TEST_CASE("pruned values have no support") {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
      Rng rng(seed * 31);
      testing::InstanceShape shape;
      shape.max_vars = 5;
      Instance inst = testing::random_instance(rng, shape);
      Solver s(inst);
      if (s.failed()) {
        CHECK(brute_solutions_serial(inst, 1u << 20).empty());
        continue;
      }
      for (const VarDecl& d : inst.vars()) {
        const auto live = s.current_values(d.id);
        for (std::int64_t v : d.domain.values()) {
          if (std::find(live.begin(), live.end(), v) != live.end()) continue;
          Instance forced = inst;
          forced.add_constraint(ex::eq(forced.ref(d.id), ex::lit(v)));
          CAPTURE(seed);
          CHECK(brute_solutions_serial(forced, 1u << 20).empty());
        }
      }
    }
  }
}
