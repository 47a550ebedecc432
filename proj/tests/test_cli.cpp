#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stelim/cli.hpp"
#include "stelim/expression.hpp"
#include "stelim/families.hpp"

using namespace stelim;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "stelim");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string &name) { return std::string(STELIM_TEST_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve and incremental print canonical functions") {
    const std::vector<std::string> names{"p", "q"};
    Run r = run({"solve", data("zeroconf1.pm")});
    CHECK(r.code == 0);
    CHECK(parse_expression(lines(r.out).at(0), names) == zeroconf_closed_form(1));
    r = run({"incremental", data("zeroconf1.pm"), data("zeroconf1_to_2.pm")});
    CHECK(r.code == 0);
    const auto out = lines(r.out);
    REQUIRE(out.size() == 2);
    CHECK(parse_expression(out[1], names) == zeroconf_closed_form(2));
    r = run({"incremental", data("zeroconf1.pm"), data("zeroconf1_to_2.pm"), data("zeroconf2_to_3.pm"),
             "--emit-cache"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# cache after step 2") != std::string::npos);
    r = run({"solve", data("single.pm")});
    CHECK(r.out == "1\n");
    r = run({"solve", data("zeroconf1.pm"), "--reward", "--order", "min-degree"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 2);
  }

  TEST_CASE("eval prints exact and decimal values") {
    Run r = run({"eval", data("zeroconf1.pm"), "-p", "p=1/2", "-p", "q=0.5"});
    CHECK(r.code == 0);
    CHECK(r.out == "1/3 ~ 0.3333333333\n");
    r = run({"eval", data("zeroconf1.pm"), "-p", "p=1/2"});
    CHECK(r.code == 1);
    r = run({"eval", data("zeroconf1.pm"), "-p", "p=0", "-p", "q=1/2"});
    CHECK(r.code == 2);
  }

  TEST_CASE("bench writes csv") {
    Run r = run({"bench", "zeroconf", "--n-max", "5"});
    CHECK(r.code == 0);
    const auto out = lines(r.out);
    REQUIRE(out.size() == 6);
    CHECK(out[0] == "step,value_at_probe,ops_naive_cum,ops_incr_cum,ratio_percent");
    CHECK(out[1].rfind("1,1/3,", 0) == 0);
    r = run({"bench", "osc", "--N", "3", "--T", "3", "--eps", "0.1", "--r-max", "2", "--decimal", "4"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 3);
  }

  TEST_CASE("generated documents can be solved") {
    const auto dir = std::filesystem::temp_directory_path() / "stelim_cli_test";
    std::filesystem::create_directories(dir);
    Run model = run({"gen", "zeroconf", "--n", "3"});
    Run diff = run({"gen", "zeroconf", "--n", "3", "--diff"});
    CHECK(model.code == 0);
    CHECK(diff.code == 0);
    std::ofstream(dir / "m.pm") << model.out;
    std::ofstream(dir / "d.pm") << diff.out;
    const Run r = run({"incremental", (dir / "m.pm").string(), (dir / "d.pm").string()});
    CHECK(r.code == 0);
    CHECK(parse_expression(lines(r.out).at(1), std::vector<std::string>{"p", "q"}) == zeroconf_closed_form(4));
    CHECK(run({"gen", "osc", "--N", "3", "--T", "3", "--R", "2"}).code == 0);
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"solve"}).code == 1);
    CHECK(run({"solve", data("zeroconf1.pm"), "--order", "random"}).code == 1);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"solve", data("does_not_exist.pm")}).code == 2);
    CHECK(run({"validate", data("zeroconf1.pm")}).code == 0);
    CHECK(run({"incremental", data("zeroconf1.pm"), data("zeroconf2_to_3.pm")}).code == 2);
    for (const auto &entry : std::filesystem::directory_iterator(data("malformed"))) {
      const Run r = run({"validate", entry.path().string()});
      CHECK(r.code == 2);
      CHECK(r.err.find(":line ") != std::string::npos);
    }
  }
}
