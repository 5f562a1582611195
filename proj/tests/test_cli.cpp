#include <doctest.h>

#include <functional>
#include <json.hpp>
#include <sstream>

#include "nichols/cli.hpp"
#include "nichols/diagram.hpp"

using namespace nichols;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nichols");
  std::ostringstream out, err;
  int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kA2 = "rank=2; v=[e5^1,e5^1]; e=[(1,2)=e5^4]";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    CHECK(run({"classify", kA2}).code == kExitOk);
    CHECK(run({"classify", "rank=2; v=[bad]"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"no-such-command"}).code == kExitUsage);
    CHECK(run({"--format", "xml", "classify", kA2}).code == kExitUsage);
    CHECK(run({"--hlist", "/nonexistent", "classify", kA2}).code == kExitUsage);
    CHECK(run({"reflect", "-i", "1", "rank=2; v=[1,e5^1]; e=[(1,2)=e5^1]"}).code == kExitFailure);
    CHECK(run({"scenario", "no-such-scenario"}).code == kExitUsage);
    CHECK(run({"scenario", "star5"}).code == kExitOk);
  }

  TEST_CASE("text output") {
    auto r = run({"classify", kA2});
    CHECK(r.out.find("InFamily") != std::string::npos);
    CHECK(r.out.find("Finite(3)") != std::string::npos);
    auto c = run({"cartan", kA2});
    CHECK(c.out.find("A2") != std::string::npos);
    auto rf = run({"reflect", "-i", "2", "rank=3; v=[e3^1,-1,e3^1]; e=[(1,2)=e3^2, (2,3)=e3^2]"});
    CHECK(rf.code == 0);
    CHECK(parse_diagram(rf.out.substr(0, rf.out.find('\n'))) ==
          parse_diagram("rank=3; v=[-1,-1,-1]; e=[(1,2)=e3^1, (1,3)=e3^1, (2,3)=e3^1]"));
  }

  TEST_CASE("json diagrams parse back") {
    auto r = run({"--format", "json", "orbit", "rank=3; v=[e3^1,-1,e3^1]; e=[(1,2)=e3^2, (2,3)=e3^2]"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    size_t seen = 0;
    std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& x) {
      if (x.is_string() && x.get<std::string>().rfind("rank=", 0) == 0) {
        CHECK_NOTHROW(parse_diagram(x.get<std::string>()));
        ++seen;
      } else if (x.is_structured()) {
        for (const auto& y : x) walk(y);
      }
    };
    walk(j);
    CHECK(seen > 1);

    auto s = run({"--format", "json", "scenario", "forbidden7"});
    REQUIRE(s.code == 0);
    auto sj = nlohmann::json::parse(s.out);
    CHECK(sj.is_object());
  }

  TEST_CASE("criterium images") {
    auto r = run({"crit", "A", "1", "2", "1", "rank=3; v=[e12^1,e12^1,e12^1]; e=[(1,2)=e12^11, (2,3)=e12^11]"});
    CHECK(r.code == 0);
    CHECK(r.out.find("rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^11]") != std::string::npos);
    CHECK(run({"crit", "Q", kA2}).code == kExitUsage);
  }
}
