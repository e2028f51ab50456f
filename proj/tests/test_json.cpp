#include <doctest.h>

#include <sstream>

#include <cdp/json_io.hpp>

#include "support/random_instance.hpp"

using namespace cdp;

TEST_SUITE("json") {
  TEST_CASE("instances round-trip") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Rng rng(seed);
      Instance inst = testing::random_instance(rng);
      std::ostringstream out;
      write_instance(out, inst);
      std::istringstream in(out.str());
      Instance back = read_instance(in);
      REQUIRE(back.size() == inst.size());
      for (std::size_t i = 0; i < inst.size(); ++i) {
        CHECK(back.vars()[i].name == inst.vars()[i].name);
        CHECK(back.vars()[i].domain == inst.vars()[i].domain);
      }
      REQUIRE(back.constraints().size() == inst.constraints().size());
      for (std::size_t c = 0; c < inst.constraints().size(); ++c)
        CHECK(structurally_equal(back.constraints()[c], inst.constraints()[c]));
      std::ostringstream again;
      write_instance(again, back);
      CHECK(again.str() == out.str());
    }
  }

  TEST_CASE("one object per line") {
    Instance inst;
    VarId x = inst.add_var("x", Domain::interval(1, 3));
    VarId b = inst.add_var("b", Domain::boolean());
    inst.add_constraint(ex::implies(inst.ref(b), inst.ref(x) > 1));
    std::ostringstream out;
    write_instance(out, inst);
    const std::string text = out.str();
    CHECK(text.find("\"vars\"") != std::string::npos);
    CHECK(text.find("\"constraints\"") != std::string::npos);
    std::istringstream lines(text);
    std::string line;
    int var_lines = 0;
    while (std::getline(lines, line))
      if (line.find("\"name\"") != std::string::npos) ++var_lines;
    CHECK(var_lines == 2);
  }

  TEST_CASE("valuations") {
    Instance inst;
    inst.add_var("x", Domain::interval(1, 3));
    inst.add_var("b", Domain::boolean());
    const Valuation v({2, 1});
    const Json j = valuation_to_json(v, inst);
    CHECK(j.dump() == R"({"assignment":{"x":2,"b":1}})");
    CHECK(valuation_from_json(j, inst) == v);
    CHECK(valuation_from_json(Json::parse(R"({"x":2,"b":true})"), inst) == v);
    CHECK_THROWS_AS(valuation_from_json(Json::parse(R"({"x":2})"), inst), ModelError);
    CHECK_THROWS_AS(valuation_from_json(Json::parse(R"({"x":2,"b":0,"z":1})"), inst), ModelError);
  }
}
