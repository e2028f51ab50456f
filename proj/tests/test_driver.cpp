#include <doctest.h>

#include <algorithm>

#include <cdp/driver.hpp>
#include <cdp/oracle.hpp>

#include "support/random_instance.hpp"

using namespace cdp;

namespace {

std::vector<std::vector<std::int64_t>> raw(const std::vector<Valuation>& vs) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& v : vs) out.push_back(v.values());
  return out;
}

std::vector<Valuation> run_cdp(const Instance& inst, const DominanceSpec* spec, const SearchConfig& config = {}) {
  CDPRun run = solve_forward(inst, spec, config);
  REQUIRE_FALSE(run.truncated);
  return backward_pass(run, spec);
}

SearchConfig max_first() {
  SearchConfig c;
  c.val_order = ValOrder::max_first;
  return c;
}

SearchConfig random_config(Rng& rng, const Instance& inst) {
  SearchConfig c;
  c.var_order = rng.chance(1, 2) ? VarOrder::input : VarOrder::first_fail;
  switch (rng.below(3)) {
    case 0: c.val_order = ValOrder::min_first; break;
    case 1: c.val_order = ValOrder::max_first; break;
    default:
      c.val_order = ValOrder::preferred;
      for (const VarDecl& d : inst.vars()) {
        auto vals = d.domain.values();
        rng.shuffle(vals);
        c.preferences[d.id] = vals;
      }
  }
  return c;
}

}  // namespace

TEST_SUITE("driver") {
  TEST_CASE("minimizing a single variable") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 3));
    const DominanceSpec spec{TotalOrder{inst.ref(x)}, {}};
    CDPRun run = solve_forward(inst, &spec, {});
    CHECK(raw(run.forward) == std::vector<std::vector<std::int64_t>>{{1}});
    CHECK(run.stats.nogoods == 1);

    CDPRun down = solve_forward(inst, &spec, max_first());
    CHECK(raw(down.forward) == std::vector<std::vector<std::int64_t>>{{3}, {2}, {1}});
    CHECK(raw(backward_pass(down, &spec)) == std::vector<std::vector<std::int64_t>>{{1}});
    CHECK(down.stats.nogoods == down.forward.size());
  }

  TEST_CASE("pareto front") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 2));
    VarId y = inst.add_var("y", Domain::interval(0, 2));
    inst.add_constraint(inst.ref(x) + inst.ref(y) >= 2);
    const DominanceSpec spec{Pareto{{inst.ref(x), inst.ref(y)}}, {}};
    auto final_set = run_cdp(inst, &spec, max_first());
    std::sort(final_set.begin(), final_set.end());
    CHECK(raw(final_set) == std::vector<std::vector<std::int64_t>>{{0, 2}, {1, 1}, {2, 0}});
  }

  TEST_CASE("backward pass removes later-dominated solutions") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 2));
    VarId y = inst.add_var("y", Domain::interval(1, 2));
    const DominanceSpec spec{Pareto{{inst.ref(x), inst.ref(y)}}, {}};
    CDPRun run = solve_forward(inst, &spec, max_first());
    REQUIRE(run.forward.front() == Valuation({2, 2}));
    const auto kept = backward_pass(run, &spec);
    CHECK(std::find(kept.begin(), kept.end(), Valuation({2, 2})) == kept.end());
    CHECK(raw(kept) == std::vector<std::vector<std::int64_t>>{{1, 1}});

    const DominanceSpec total{TotalOrder{inst.ref(x) + inst.ref(y)}, {}};
    CDPRun t = solve_forward(inst, &total, max_first());
    const auto last = backward_pass(t, &total);
    REQUIRE(last.size() == 1);
    CHECK(last.front() == t.forward.back());
  }

  TEST_CASE("no spec enumerates every solution") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 3));
    inst.add_constraint(ex::ne(inst.ref(x), ex::lit(2)));
    CDPRun run = solve_forward(inst, nullptr, {});
    CHECK(raw(backward_pass(run, nullptr)) == std::vector<std::vector<std::int64_t>>{{0}, {1}, {3}});
    CHECK(run.stats.nogoods == 0);
  }

  TEST_CASE("brute-force full solutions") {
    Instance inst;
    VarId a = inst.add_var("x1", Domain::boolean());
    VarId b = inst.add_var("x2", Domain::boolean());
    inst.add_constraint(inst.ref(a) || inst.ref(b));
    const DominanceSpec spec{SubsetMin{{a, b}}, {}};
    CHECK(raw(brute_force_full_solution(inst, &spec, 100)) == std::vector<std::vector<std::int64_t>>{{0, 1}, {1, 0}});
    CHECK(brute_force_full_solution(inst, nullptr, 100).size() == 3);
    const DominanceSpec custom{CustomNogood{ex::sol(inst.ref(a)) < inst.ref(a)}, {}};
    CHECK_THROWS_AS(brute_force_full_solution(inst, &custom, 100), ModelError);
    CHECK_THROWS_AS(brute_force_full_solution(inst, &spec, 3), LimitExceeded);
  }

  TEST_CASE("property checker examples") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 2));
    VarId y = inst.add_var("y", Domain::interval(0, 2));
    inst.add_constraint(inst.ref(x) + inst.ref(y) >= 2);
    const DominanceSpec spec{Pareto{{inst.ref(x), inst.ref(y)}}, {}};
    const std::vector<Valuation> front{Valuation({0, 2}), Valuation({1, 1}), Valuation({2, 0})};
    PropertyReport ok = check_properties(front, inst, &spec, 1000);
    CHECK(ok.complete);
    CHECK(ok.domination_free);
    CHECK(ok.equivalence_free);

    auto with_dominated = front;
    with_dominated.push_back(Valuation({2, 1}));
    PropertyReport bad = check_properties(with_dominated, inst, &spec, 1000);
    CHECK(bad.complete);
    CHECK_FALSE(bad.domination_free);
    REQUIRE(bad.domination);
    CHECK(strictly_dominates(spec, with_dominated[bad.domination->first], with_dominated[bad.domination->second]));

    PropertyReport missing = check_properties({front[0], front[2]}, inst, &spec, 1000);
    CHECK_FALSE(missing.complete);
    REQUIRE(missing.uncovered);
    CHECK(*missing.uncovered == Valuation({1, 1}));

    const DominanceSpec total{TotalOrder{inst.ref(x) + inst.ref(y)}, {}};
    PropertyReport eq = check_properties(front, inst, &total, 1000);
    CHECK(eq.complete);
    CHECK(eq.domination_free);
    CHECK_FALSE(eq.equivalence_free);
    CHECK(eq.equivalence);

    PropertyReport outside = check_properties({Valuation({0, 0})}, inst, &spec, 1000);
    CHECK(outside.non_solutions == std::vector<std::size_t>{0});
  }

  TEST_CASE("forward and backward passes yield complete, domination-free sets") {
    for (testing::Family f : testing::all_families()) {
      for (NogoodMode mode : {NogoodMode::equivalence_free, NogoodMode::with_equivalence}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
          Rng rng(seed * 31 + static_cast<std::uint64_t>(f) * 3 + static_cast<std::uint64_t>(mode));
          testing::InstanceShape shape;
          shape.max_vars = 5;
          Instance inst = testing::random_instance_for(rng, f, shape);
          const DominanceSpec spec = testing::random_spec(rng, inst, f, mode);
          const SearchConfig config = random_config(rng, inst);
          CDPRun run = solve_forward(inst, &spec, config);
          REQUIRE_FALSE(run.truncated);
          CHECK(run.stats.nogoods == run.forward.size());
          run.final_set = backward_pass(run, &spec);
          const PropertyReport r = check_properties(run.final_set, inst, &spec, 1u << 20);
          CAPTURE(testing::family_name(f));
          CAPTURE(seed);
          CHECK(r.complete);
          CHECK(r.domination_free);
          CHECK(r.non_solutions.empty());
          if (mode == NogoodMode::equivalence_free) CHECK(r.equivalence_free);
          const auto oracle = brute_force_full_solution(inst, &spec, 1u << 20);
          CHECK(same_class_family(run.final_set, oracle, &spec));
        }
      }
    }
  }

  TEST_CASE("truncated runs") {
    Instance inst;
    for (int i = 0; i < 4; ++i) inst.add_var("x" + std::to_string(i), Domain::interval(0, 3));
    RunLimits limits;
    limits.solutions = 5;
    CDPRun run = solve_forward(inst, nullptr, {}, limits);
    CHECK(run.truncated);
    CHECK(run.forward.size() == 5);
    CHECK_THROWS_AS(backward_pass(run, nullptr), Error);

    SearchConfig tight;
    tight.node_limit = 3;
    CDPRun nodes = solve_forward(inst, nullptr, tight);
    CHECK(nodes.truncated);
    CHECK_FALSE(nodes.truncation.empty());
  }

  TEST_CASE("run report keys") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 3));
    const DominanceSpec spec{TotalOrder{inst.ref(x)}, {}};
    CDPRun run = solve_forward(inst, &spec, max_first());
    run.final_set = backward_pass(run, &spec);
    const Json j = run_report(run, inst, check_properties(run.final_set, inst, &spec, 100));
    CHECK(j.contains("solutions"));
    CHECK(j["final_set"].size() == 1);
    CHECK(j["final_set"][0]["x"] == 1);
    CHECK(j["properties"]["complete"] == true);
    CHECK(j["stats"]["nogoods"] == 3);
    CHECK(run_report(run, inst, std::nullopt)["properties"].is_null());
  }
}
