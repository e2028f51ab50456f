#include <doctest.h>

#include <algorithm>
#include <limits>

#include <cdp/oracle.hpp>

#include "support/random_instance.hpp"

using namespace cdp;

TEST_SUITE("oracle") {
  TEST_CASE("solutions in canonical order") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 2));
    VarId y = inst.add_var("y", Domain::interval(0, 2));
    inst.add_constraint(inst.ref(x) + inst.ref(y) >= 2);
    const auto sols = brute_solutions_serial(inst, 100);
    REQUIRE(sols.size() == 6);
    CHECK(sols.front() == Valuation({0, 2}));
    CHECK(sols.back() == Valuation({2, 2}));
    CHECK(std::is_sorted(sols.begin(), sols.end()));
  }

  TEST_CASE("serial and parallel agree") {
    for (testing::Family f : testing::all_families()) {
      for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed * 7 + static_cast<std::uint64_t>(f));
        Instance inst = testing::random_instance_for(rng, f);
        const DominanceSpec spec = testing::random_spec(rng, inst, f);
        const auto serial = brute_solutions_serial(inst, 1u << 20);
        CHECK(serial == brute_solutions_parallel(inst, 1u << 20));
        CHECK(undominated_serial(spec, serial) == undominated_parallel(spec, serial));
      }
    }
  }

  TEST_CASE("undominated members") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 2));
    VarId y = inst.add_var("y", Domain::interval(0, 2));
    inst.add_constraint(inst.ref(x) + inst.ref(y) >= 2);
    const DominanceSpec spec{Pareto{{inst.ref(x), inst.ref(y)}}, {}};
    const auto front = undominated_serial(spec, brute_solutions_serial(inst, 100));
    CHECK(front == std::vector<Valuation>{Valuation({0, 2}), Valuation({1, 1}), Valuation({2, 0})});
  }

  TEST_CASE("limits") {
    Instance inst;
    for (int i = 0; i < 5; ++i) inst.add_var("x" + std::to_string(i), Domain::interval(0, 9));
    CHECK(search_space_size(inst) == 100000);
    CHECK_THROWS_AS(brute_solutions_serial(inst, 99999), LimitExceeded);
    CHECK_THROWS_AS(brute_solutions_parallel(inst, 99999), LimitExceeded);

    Instance huge;
    for (int i = 0; i < 8; ++i) huge.add_var("h" + std::to_string(i), Domain::interval(0, 1 << 20));
    CHECK(search_space_size(huge) == std::numeric_limits<std::uint64_t>::max());
    CHECK(search_space_size(Instance{}) == 1);
    CHECK(brute_solutions_serial(Instance{}, 10).size() == 1);
  }
}
