#include <doctest.h>

#include <cmath>

#include <cdp/cpnet.hpp>

#include "support/fixtures.hpp"
#include "support/random_instance.hpp"

using namespace cdp;

namespace {

using Outcome = std::vector<std::int64_t>;

CPNet chain3() { return parse_cpnet(testing::read_fixture("chain3.cpnet")); }

std::vector<Outcome> outcomes(const CPNet& net) {
  std::vector<Outcome> out{Outcome{}};
  for (const CPNetVar& v : net.vars) {
    std::vector<Outcome> next;
    for (const Outcome& o : out)
      for (std::uint32_t x = 0; x < v.domain_size; ++x) {
        Outcome e = o;
        e.push_back(x);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST_SUITE("cpnet") {
  TEST_CASE("three-variable fixture") {
    const CPNet net = chain3();
    CHECK_NOTHROW(validate(net));
    REQUIRE(net.size() == 3);
    CHECK(net.vars[0].rows == std::vector<std::vector<std::uint32_t>>{{1, 0}});
    CHECK(net.vars[1].parents == std::vector<std::uint32_t>{0});
    CHECK(net.vars[2].rows[2] == std::vector<std::uint32_t>{1, 2, 0});
    CHECK(outcome_count(net) == 18);
    CHECK(to_text(net) == testing::read_fixture("chain3.cpnet"));
  }

  TEST_CASE("validation errors") {
    CPNet cycle;
    cycle.vars.push_back(CPNetVar{2, {1}, {{0, 1}, {0, 1}}});
    cycle.vars.push_back(CPNetVar{2, {0}, {{0, 1}, {1, 0}}});
    CHECK_THROWS_WITH_AS(validate(cycle), doctest::Contains("cycle"), ModelError);

    CPNet bad_row;
    bad_row.vars.push_back(CPNetVar{2, {}, {{0, 0}}});
    CHECK_THROWS_WITH_AS(validate(bad_row), doctest::Contains("permutation"), ModelError);

    CPNet missing;
    missing.vars.push_back(CPNetVar{2, {}, {{0, 1}}});
    missing.vars.push_back(CPNetVar{2, {0}, {{0, 1}}});
    CHECK_THROWS_AS(validate(missing), ModelError);

    CHECK_THROWS(parse_cpnet("cpnet 1\nvar 2 parents\n0 1\n1 0\n"));
    CHECK_THROWS(parse_cpnet("cpnet 2\nvar 2 parents\n0 1\n"));
  }

  TEST_CASE("local dominance on the fixture") {
    const CPNet net = chain3();
    CHECK(local_dominates(net, {1, 2, 1}, {1, 2, 2}));
    CHECK(local_dominates(net, {1, 2, 1}, {0, 1, 0}));
    CHECK_FALSE(local_dominates(net, {0, 2, 1}, {1, 2, 1}));
    CHECK(local_dominates(net, {0, 1, 0}, {0, 1, 0}));
  }

  TEST_CASE("compiled nogood matches the definition on the fixture") {
    const CPNet net = chain3();
    const auto all = outcomes(net);
    for (const Outcome& s : all) {
      const Expr ng = compile_local_nogood(net, s);
      for (const Outcome& p : all)
        REQUIRE(holds(ng, Valuation(p)) == (s != p && !local_dominates(net, s, p)));
    }
  }

  TEST_CASE("compiled nogood expansion") {
    const CPNet net = chain3();
    // S = (1,2,2): under V2 = 2 the row is 1 > 2 > 0, so V3 = 1 stays allowed and V3 = 0 is cut.
    const Expr ng = compile_local_nogood(net, {1, 2, 2});
    CHECK(holds(ng, Valuation({1, 2, 1})));
    CHECK_FALSE(holds(ng, Valuation({1, 2, 0})));
    CHECK_FALSE(holds(ng, Valuation({1, 2, 2})));
    // S = (1,2,1) is most preferred everywhere and locally dominates every outcome.
    const Expr best = compile_local_nogood(net, {1, 2, 1});
    for (const Outcome& p : outcomes(net)) CHECK_FALSE(holds(best, Valuation(p)));
  }

  TEST_CASE("traditional dominance") {
    const CPNet net = chain3();
    CHECK(trad_dominates(net, {1, 2, 1}, {1, 2, 2}));
    CHECK_FALSE(trad_dominates(net, {1, 2, 2}, {1, 2, 1}));
    CHECK_FALSE(trad_dominates(net, {0, 1, 0}, {0, 1, 0}));
    // (1,2,1) is the unique undominated outcome.
    for (const Outcome& o : outcomes(net))
      if (o != Outcome{1, 2, 1}) CHECK(trad_dominates(net, {1, 2, 1}, o));
    CHECK_THROWS_AS(trad_dominates(net, {1, 2, 1}, {1, 2, 2}, 10), LimitExceeded);
  }

  TEST_CASE("traditional dominance implies local dominance when every parent is a root") {
    std::uint64_t sufficient_gaps = 0;
    std::uint64_t nets = 0;
    for (std::uint64_t seed = 1; seed <= 200 && nets < 30; ++seed) {
      const auto n = static_cast<std::uint32_t>(2 + seed % 4);
      const CPNet net = random_net(n, std::min<std::uint32_t>(2, n - 1), seed);
      bool shallow = true;
      for (const CPNetVar& v : net.vars)
        for (std::uint32_t p : v.parents) shallow = shallow && net.vars[p].parents.empty();
      if (!shallow) continue;
      ++nets;
      const auto all = outcomes(net);
      for (const Outcome& o : all)
        for (const Outcome& o2 : all) {
          const bool trad = trad_dominates(net, o, o2);
          const bool local = o != o2 && local_dominates(net, o, o2);
          if (trad) REQUIRE(local);
          if (local && !trad) ++sufficient_gaps;
        }
    }
    CHECK(nets == 30);
    CHECK(sufficient_gaps > 0);
  }

  TEST_CASE("a grandparent flip breaks necessity") {
    // V1, V2 roots preferring 1; V3 depends on (V1, V2); V0 depends on (V1, V3).
    const CPNet net = parse_cpnet(
        "cpnet 4\n"
        "var 2 parents 1 3\n1 0\n0 1\n1 0\n1 0\n"
        "var 2 parents\n1 0\n"
        "var 2 parents\n1 0\n"
        "var 2 parents 1 2\n1 0\n0 1\n0 1\n0 1\n");
    const Outcome from{1, 0, 0, 0};
    const Outcome to{0, 0, 1, 0};
    // Improving flips: V3 -> 1, V0 -> 0, V2 -> 1, V3 -> 0.
    const std::vector<Outcome> path{from, {1, 0, 0, 1}, {0, 0, 0, 1}, {0, 0, 1, 1}, to};
    for (std::size_t k = 1; k < path.size(); ++k) {
      std::uint32_t changed = 0;
      for (std::uint32_t v = 0; v < 4; ++v)
        if (path[k][v] != path[k - 1][v]) changed = v;
      REQUIRE(preferred(cpt_row(net, changed, path[k - 1]), path[k][changed], path[k - 1][changed]));
    }
    CHECK(trad_dominates(net, to, from));
    CHECK_FALSE(local_dominates(net, to, from));
  }

  TEST_CASE("no vacuous pairs and asymmetry on distinct pairs") {
    std::uint64_t vacuous = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const auto n = static_cast<std::uint32_t>(1 + seed % 5);
      const CPNet net = random_net(n, std::min<std::uint32_t>(3, n - 1), seed, CptStyle::random,
                                   static_cast<std::uint32_t>(2 + seed % 2));
      const auto all = outcomes(net);
      for (const Outcome& o : all)
        for (const Outcome& o2 : all) {
          if (o == o2) continue;
          if (vacuous_pair(net, o, o2)) ++vacuous;
          CHECK_FALSE((local_dominates(net, o, o2) && local_dominates(net, o2, o)));
        }
    }
    CHECK(vacuous == 0);
  }

  TEST_CASE("random nets") {
    const CPNet single = random_net(1, 0, 5);
    REQUIRE(single.size() == 1);
    CHECK(single.vars[0].parents.empty());
    CHECK(single.vars[0].rows.size() == 1);
    CHECK(random_net(10, 4, 42) == random_net(10, 4, 42));
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const CPNet net = random_net(static_cast<std::uint32_t>(1 + seed % 8), static_cast<std::uint32_t>(seed % 4), seed,
                                   seed % 2 ? CptStyle::photo : CptStyle::random, 3);
      CHECK_NOTHROW(validate(net));
      CHECK(parse_cpnet(to_text(net)) == net);
      bool has_root = false;
      for (const CPNetVar& v : net.vars) has_root = has_root || v.parents.empty();
      CHECK(has_root);
    }
  }

  TEST_CASE("photo preferences favour the parents' average position") {
    const CPNet net = random_net(6, 2, 1, CptStyle::photo);
    for (std::uint32_t v = 0; v < net.size(); ++v) {
      const CPNetVar& var = net.vars[v];
      CHECK(var.domain_size == 6);
      if (var.parents.empty()) continue;
      Outcome o(net.size(), 0);
      for (std::size_t k = 0; k < var.parents.size(); ++k) o[var.parents[k]] = static_cast<std::int64_t>(k * 2 + 1);
      const auto& row = cpt_row(net, v, o);
      double avg = 0;
      for (std::uint32_t p : var.parents) avg += static_cast<double>(o[p]);
      avg /= static_cast<double>(var.parents.size());
      for (std::size_t k = 1; k < row.size(); ++k)
        CHECK(std::abs(row[k - 1] - avg) <= std::abs(row[k] - avg) + 1e-9);
    }
  }
}
