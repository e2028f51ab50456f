#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <cdp/cli.hpp>
#include <cdp/cpnet.hpp>
#include <cdp/json_io.hpp>

#include "support/fixtures.hpp"

using namespace cdp;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fx(const char* name) { return testing::fixture_path(name); }

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("cdp-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<std::string> sorted_dumps(const Json& arr) {
  std::vector<std::string> out;
  for (const Json& a : arr) out.push_back(a.dump());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve reports minimal correction subsets") {
    const Result r = cli({"solve", fx("mcs.cdp"), "--backward"});
    REQUIRE(r.code == 0);
    const Json j = r.json();
    std::vector<std::vector<int>> mcs;
    for (const Json& m : j["final_set"]) {
      std::vector<int> c;
      for (int i = 1; i <= 3; ++i)
        if (m["B[" + std::to_string(i) + "]"] == 0) c.push_back(i);
      mcs.push_back(c);
    }
    std::sort(mcs.begin(), mcs.end());
    CHECK(mcs == std::vector<std::vector<int>>{{1}, {2}});
  }

  TEST_CASE("solve minimize and unsat") {
    const Result r = cli({"solve", fx("min.cdp"), "--backward", "--verify"});
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["final_set"].size() == 1);
    CHECK(j["properties"]["domination_free"] == true);
    const Result text = cli({"solve", fx("min.cdp"), "--emit", "text", "--backward"});
    CHECK(text.out.find("% complete") == std::string::npos);
    CHECK(text.out.find("=") != std::string::npos);

    const Result u = cli({"solve", fx("unsat.cdp")});
    CHECK(u.code == 0);
    CHECK(u.json()["final_set"] == Json::array());
  }

  TEST_CASE("oracle with a dominance selector") {
    const Result r = cli({"oracle", fx("pareto.cdp"), "--dominance", "pareto:x,y"});
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["final_set"].size() == 3);
    CHECK(j["properties"]["complete"] == true);
    CHECK(j["stats"].contains("millis"));
    CHECK(cli({"oracle", fx("pareto.cdp"), "--dominance", "pareto:x,y", "--serial"}).json()["final_set"] ==
          j["final_set"]);
  }

  TEST_CASE("oracle refuses a custom nogood") {
    const Result r = cli({"oracle", fx("mcs.cdp")});
    CHECK(r.code == 2);
    CHECK(r.err.find("check") != std::string::npos);
  }

  TEST_CASE("oracle and solve agree on the fixtures") {
    const std::vector<std::vector<std::string>> cases = {
        {fx("min.cdp")},
        {fx("pareto.cdp"), "--dominance", "pareto:x,y"},
        {fx("lex.cdp"), "--dominance", "lex:cost,x[1]"},
        {fx("pareto.cdp"), "--dominance", "max:x - y"},
        {fx("lex.cdp"), "--dominance", "subset-max:x"},
    };
    for (const auto& c : cases) {
      std::vector<std::string> solve{"solve"}, oracle{"oracle"};
      solve.insert(solve.end(), c.begin(), c.end());
      oracle.insert(oracle.end(), c.begin(), c.end());
      solve.insert(solve.end(), {"--backward", "--verify", "--mode", "complete"});
      const Result s = cli(solve);
      const Result o = cli(oracle);
      CAPTURE(c.back());
      if (c.back() == "subset-max:x") {
        CHECK(s.code == 2);
        continue;
      }
      REQUIRE(s.code == 0);
      REQUIRE(o.code == 0);
      const Json sj = s.json();
      CHECK(sj["properties"]["complete"] == true);
      CHECK(sj["properties"]["domination_free"] == true);
      CHECK(sj["final_set"].size() == o.json()["final_set"].size());
    }
  }

  TEST_CASE("check") {
    const std::string set = fx("pareto_set.json");
    const Result ok = cli({"check", fx("pareto.cdp"), "--dominance", "pareto:x,y", "--set", set});
    CHECK(ok.code == 0);
    CHECK(ok.json()["complete"] == true);

    TempDir dir("check");
    Json doc = Json::parse(slurp(set));
    Json& members = doc.is_object() ? doc["final_set"] : doc;
    Json extra = members;
    extra.push_back(Json{{"x", 2}, {"y", 2}});
    spit(dir / "extra.json", extra.dump());
    const Result bad = cli({"check", fx("pareto.cdp"), "--dominance", "pareto:x,y", "--set", dir / "extra.json"});
    CHECK(bad.code == 4);
    const Json bj = bad.json();
    CHECK(bj["domination_free"] == false);
    CHECK(bj["domination"]["dominated"] == extra.size() - 1);

    Json fewer = members;
    fewer.erase(fewer.begin());
    spit(dir / "fewer.json", fewer.dump());
    const Result missing = cli({"check", fx("pareto.cdp"), "--dominance", "pareto:x,y", "--set", dir / "fewer.json"});
    CHECK(missing.code == 4);
    CHECK(missing.json()["complete"] == false);
    CHECK(missing.json().contains("uncovered"));
  }

  TEST_CASE("generators are deterministic") {
    TempDir a("gen-a"), b("gen-b");
    REQUIRE(cli({"gen", "biobj-tsp", "--n", "4", "--seed", "9", "-o", a / "t"}).code == 0);
    REQUIRE(cli({"gen", "biobj-tsp", "--n", "4", "--seed", "9", "-o", b / "t"}).code == 0);
    CHECK(slurp(a / "t.cdp") == slurp(b / "t.cdp"));
    CHECK_FALSE(slurp(a / "t.cdp").empty());

    const Result photo = cli({"gen", "cpnet-photo", "--n", "4", "--k", "2", "--seed", "3", "-o", a / "p"});
    REQUIRE(photo.code == 0);
    CHECK(photo.out.find("p.cpnet") != std::string::npos);
    CHECK_NOTHROW(validate(parse_cpnet(slurp(a / "p.cpnet"))));
    const Result ps = cli({"solve", a / "p.cdp", "--dominance", "cpnet:" + a / "p.cpnet", "--backward", "--verify"});
    REQUIRE(ps.code == 0);
    CHECK(ps.json()["properties"]["domination_free"] == true);

    REQUIRE(cli({"gen", "maxcsp", "--vars", "4", "--cons", "6", "--seed", "5", "-o", a / "m"}).code == 0);
    const Result ms = cli({"solve", a / "m.cdp", "--backward", "--mode", "complete"});
    const Result mo = cli({"oracle", a / "m.cdp"});
    REQUIRE(ms.code == 0);
    REQUIRE(mo.code == 0);
    CHECK(sorted_dumps(ms.json()["final_set"]) == sorted_dumps(mo.json()["final_set"]));

    REQUIRE(cli({"gen", "itemset", "--items", "4", "--transactions", "5", "--seed", "2", "-o", a / "i"}).code == 0);
    const Result is = cli({"solve", a / "i.cdp", "--backward"});
    const Result it = cli({"solve", "--itemset", a / "i.txt", "--threshold", "2", "--pattern", "closed", "--backward"});
    REQUIRE(is.code == 0);
    REQUIRE(it.code == 0);
    CHECK(is.json()["final_set"].size() == it.json()["final_set"].size());
  }

  TEST_CASE("error exit codes") {
    CHECK(cli({"solve", fx("chain3.cpnet")}).code == 2);
    CHECK(cli({"solve", fx("missing.cdp")}).code == 1);
    CHECK(cli({"solve"}).code != 0);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"solve", fx("pareto.cdp"), "--dominance", "bogus:x"}).code == 2);
    CHECK(cli({"solve", fx("mcs.cdp"), "--dominance", "pareto:x"}).code == 2);
    CHECK(cli({"solve", fx("mcs.cdp"), "--mode", "complete"}).code == 2);
    const Result lim = cli({"solve", fx("pareto.cdp"), "--limit-solutions", "1"});
    CHECK(lim.code == 3);
    CHECK(lim.json()["truncated"] == true);
    CHECK(cli({"oracle", fx("pareto.cdp"), "--limit", "2"}).code == 3);
  }
}
