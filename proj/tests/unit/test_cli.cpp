#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "hrbc/backend/backend.hpp"
#include "hrbc/cli/cli.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using hrbc::cli::run;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hrbc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("translate to JSON") {
  const fs::path dir = scratch_dir("json");
  const auto r = invoke({"translate", support::fixture_path("heater"), "--format", "json",
                         "--aggregate", "-o", (dir / "heater").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "locations=7 transitions=7 urgent=5\nlocations=3 transitions=3 urgent=0\n");
  const auto a = hrbc::backend::load_json(support::read_file((dir / "heater.ha.json").string()));
  CHECK(a.locations.size() == 3);
}

TEST_CASE("translate to SpaceEx with the brake-by-wire limits") {
  const fs::path dir = scratch_dir("spaceex");
  const std::vector<std::string> args = {
      "translate",    support::fixture_path("bbw"), "--queue", "bctlr=4", "--queue",
      "wctlrR=2",     "--queue",   "wctlrL=2",      "--queue", "default=1",
      "--timer-pool", "1",         "--arg-pool",    "11",      "--aggregate",
      "--format",     "spaceex",   "-o",            (dir / "bbw").string()};
  const auto first = invoke(args);
  REQUIRE(first.code == 0);
  CHECK(first.out.find("locations=") == 0);
  CHECK(first.err.find("bbw.hrebeca: warning: nonlinear") != std::string::npos);
  CHECK(first.err.find(":0:0") == std::string::npos);
  const std::string xml = support::read_file((dir / "bbw.xml").string());
  const std::string cfg = support::read_file((dir / "bbw.cfg").string());
  CHECK(cfg.find("forbidden = \"loc(sys)==Fault\"") != std::string::npos);
  CHECK(invoke(args).code == 0);
  CHECK(support::read_file((dir / "bbw.xml").string()) == xml);
  CHECK(support::read_file((dir / "bbw.cfg").string()) == cfg);
}

TEST_CASE("a Fault location becomes the default forbidden set") {
  const fs::path dir = scratch_dir("fault");
  const auto r = invoke({"translate", support::fixture_path("fault_queue"), "-o",
                         (dir / "fault").string()});
  CHECK(r.code == 0);
  CHECK(support::read_file((dir / "fault.cfg").string()).find("forbidden = \"loc(sys)==Fault\"") !=
        std::string::npos);
}

TEST_CASE("simulate reports safety verdicts") {
  const std::string heater = support::fixture_path("heater");
  auto safe = invoke({"simulate", heater, "--horizon", "5", "--forbidden", "heater_t > 22.5"});
  CHECK(safe.code == 0);
  CHECK(safe.out == "SAFE\n");
  auto witness = invoke({"simulate", heater, "--horizon", "5", "--forbidden", "heater_t > 21"});
  CHECK(witness.code == 3);
  CHECK(witness.out.rfind("WITNESS t=", 0) == 0);
  CHECK(witness.out.find("loc=l6_heater_On") != std::string::npos);

  const fs::path dir = scratch_dir("sim");
  REQUIRE(invoke({"translate", heater, "--format", "json", "-o", (dir / "h").string()}).code == 0);
  const auto from_json = invoke({"simulate", (dir / "h.ha.json").string(), "--horizon", "5",
                                 "--forbidden", "heater_t > 21", "--trace",
                                 (dir / "h.csv").string()});
  CHECK(from_json.code == 3);
  CHECK(support::read_file((dir / "h.csv").string()).rfind("time,location,heater_t\n", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"translate"}).code == 2);
  CHECK(invoke({"translate", "/nonexistent/model.hrebeca"}).code == 2);
  const std::string heater = support::fixture_path("heater");
  CHECK(invoke({"translate", heater, "--queue", "bctlr"}).code == 2);
  CHECK(invoke({"translate", heater, "--queue", "heater=0"}).code == 2);
  CHECK(invoke({"translate", heater, "--format", "pdf"}).code == 2);
  CHECK(invoke({"simulate", heater, "--dt", "0"}).code == 2);
  CHECK(invoke({"simulate", heater, "--policy", "eager"}).code == 2);
  CHECK(invoke({"simulate", heater, "--forbidden", "ghost > 1"}).code == 2);
  CHECK(invoke({"simulate", heater, "--forbidden", "heater_t >"}).code == 2);
}

TEST_CASE("model errors exit with 1") {
  const fs::path dir = scratch_dir("bad");
  const fs::path bad = dir / "bad.hrebeca";
  {
    std::ofstream out(bad);
    out << "softwareclass A {\n  knownrebecs { }\n  statevars { int n; }\n"
           "  msgsrv initial() { m = 1; }\n}\nmain { A a():(); }\n";
  }
  const auto r = invoke({"translate", bad.string(), "-o", (dir / "bad").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find(bad.string() + ":4:") != std::string::npos);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("\x1b[") == std::string::npos);

  const auto unknown = invoke({"translate", support::fixture_path("heater"), "--queue", "ghost=2"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("unknown rebec") != std::string::npos);
}

TEST_CASE("help lists the defaults") {
  const auto translate = invoke({"translate", "--help"});
  CHECK(translate.code == 0);
  for (const char* text : {"200000", "--timer-pool", "--arg-pool", "default=1", "spaceex"}) {
    CHECK(translate.out.find(text) != std::string::npos);
  }
  const auto simulate = invoke({"simulate", "--help"});
  CHECK(simulate.code == 0);
  for (const char* text : {"0.001", "first", "--seed"}) {
    CHECK(simulate.out.find(text) != std::string::npos);
  }
}
