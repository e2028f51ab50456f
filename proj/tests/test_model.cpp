#include <doctest.h>

#include <limits>

#include <cdp/model.hpp>

#include "support/random_instance.hpp"

using namespace cdp;

TEST_SUITE("model") {
  TEST_CASE("domains") {
    CHECK(Domain::boolean().values() == std::vector<std::int64_t>{0, 1});
    CHECK(Domain::interval(2, 4).size() == 3);
    CHECK_THROWS_AS(Domain::interval(3, 2), ModelError);
    CHECK(Domain::set({5, 1, 5, 3}).values() == std::vector<std::int64_t>{1, 3, 5});
    CHECK_THROWS_AS(Domain::set({}), ModelError);
    CHECK(Domain::set({1, 3}).contains(3));
    CHECK_FALSE(Domain::set({1, 3}).contains(2));
  }

  TEST_CASE("variable names are unique") {
    Instance inst;
    inst.add_var("x", Domain::boolean());
    CHECK_THROWS_AS(inst.add_var("x", Domain::boolean()), ModelError);
  }

  TEST_CASE("evaluate arithmetic") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 9));
    CHECK(evaluate_int(inst.ref(x) + 2, Valuation({3})) == 5);
  }

  TEST_CASE("strict improvement against sol") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 9));
    const Expr nogood = inst.ref(x) < ex::sol(inst.ref(x));
    const Valuation s({5});
    CHECK(holds(nogood, Valuation({4}), &s));
    CHECK_FALSE(holds(nogood, Valuation({5}), &s));
    CHECK_THROWS_AS(holds(nogood, Valuation({4})), EvalError);
  }

  TEST_CASE("exists over an array with sol references") {
    Instance inst;
    std::vector<VarId> b;
    for (int i = 1; i <= 3; ++i) b.push_back(inst.add_var("B" + std::to_string(i), Domain::boolean()));
    auto arr = inst.add_array("B", 1, b);
    const Expr body = ex::at(arr, ex::loop(0)) < ex::sol(ex::at(arr, ex::loop(0)));
    const Expr e = ex::exists_over(0, 1, 3, body);
    const Valuation point({1, 0, 1});
    const Valuation sol({1, 1, 1});
    // i = 2 gives 0 < 1.
    CHECK(holds(e, point, &sol));
    CHECK_FALSE(holds(e, sol, &point));
    CHECK(holds(flatten(e), point, &sol));
  }

  TEST_CASE("check") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 2));
    inst.add_constraint(ex::eq(inst.ref(x), ex::lit(1)));
    CHECK(check(inst, Valuation({1})));
    CHECK_FALSE(check(inst, Valuation({2})));
    CHECK_FALSE(check(inst, Valuation({7})));
    CHECK_THROWS_AS(check(inst, Valuation(std::vector<std::int64_t>{})), EvalError);

    Instance clause;
    VarId a = clause.add_var("x1", Domain::boolean());
    VarId b = clause.add_var("x2", Domain::boolean());
    clause.add_constraint(clause.ref(a) || clause.ref(b));
    CHECK_FALSE(check(clause, Valuation({0, 0})));
    CHECK(check(clause, Valuation({0, 1})));
  }

  TEST_CASE("ill-formed constraints are rejected") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 2));
    CHECK_THROWS_AS(inst.add_constraint(inst.ref(x) + 1), ModelError);
    CHECK_THROWS_AS(inst.add_constraint(inst.ref(x) < ex::sol(inst.ref(x))), ModelError);
    CHECK_THROWS_AS(inst.add_constraint(ex::var(VarId{7}) < 1), ModelError);
    CHECK_THROWS_AS(type_of(ex::conj({ex::lit(1), ex::boolean(true)})), ModelError);
  }

  TEST_CASE("overflow is an error") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 1));
    const Expr big = ex::mul(std::numeric_limits<std::int64_t>::max(), inst.ref(x)) + 1;
    CHECK_THROWS_AS(evaluate(big, Valuation({1})), EvalError);
  }

  TEST_CASE("substitute_sol replaces references by values") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(0, 9));
    VarId y = inst.add_var("y", Domain::interval(0, 9));
    const Expr f = inst.ref(x) + ex::mul(2, inst.ref(y));
    const Expr t = f < ex::sol(f);
    const Expr inst_t = substitute_sol(t, Valuation({1, 2}));
    CHECK_FALSE(contains_sol(inst_t));
    for (std::int64_t a = 0; a <= 9; ++a)
      for (std::int64_t b = 0; b <= 9; ++b) CHECK(holds(inst_t, Valuation({a, b})) == (a + 2 * b < 5));
  }

  TEST_CASE("negated comparison equals the swapped strict comparison") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      Rng rng(seed);
      Instance inst = testing::random_instance(rng);
      const Expr a = testing::random_linear(rng, inst, 3);
      const Expr b = testing::random_linear(rng, inst, 3);
      for (int k = 0; k < 10; ++k) {
        std::vector<std::int64_t> vals;
        for (const VarDecl& d : inst.vars()) {
          const auto dv = d.domain.values();
          vals.push_back(dv[rng.below(dv.size())]);
        }
        const Valuation p(vals);
        CHECK(holds(ex::lnot(ex::le(a, b)), p) == holds(ex::lt(b, a), p));
        CHECK(evaluate(ex::le(a, b), p) == evaluate(ex::le(a, b), p));
      }
    }
  }

  TEST_CASE("check is the conjunction of the constraints") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      Rng rng(seed + 1000);
      Instance inst = testing::random_instance(rng);
      for (int k = 0; k < 10; ++k) {
        std::vector<std::int64_t> vals;
        for (const VarDecl& d : inst.vars()) {
          const auto dv = d.domain.values();
          vals.push_back(dv[rng.below(dv.size())]);
        }
        const Valuation p(vals);
        bool all = true;
        for (const Expr& c : inst.constraints()) all = all && holds(c, p);
        CHECK(check(inst, p) == all);
      }
    }
  }

  TEST_CASE("simplify preserves values") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      Rng rng(seed + 5000);
      Instance inst = testing::random_instance(rng);
      const Expr c = testing::random_constraint(rng, inst);
      const Expr s = simplify(c);
      std::vector<std::int64_t> vals;
      for (const VarDecl& d : inst.vars()) {
        const auto dv = d.domain.values();
        vals.push_back(dv[rng.below(dv.size())]);
      }
      CHECK(holds(c, Valuation(vals)) == holds(s, Valuation(vals)));
    }
  }
}
