#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "qbus/cli/commands.hpp"
#include "qbus/cli/config.hpp"
#include "qbus/cli/output.hpp"
#include "qbus/error.hpp"

namespace fs = std::filesystem;
using namespace qbus;
using namespace qbus::cli;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qbus_test_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "qbus");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return main_entry(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = scratch(name + ".json");
  std::ofstream(p) << j.dump();
  return p;
}

// Compare every file of two output directories except the resolved config (it names the directory).
void check_same_outputs(const fs::path& a, const fs::path& b) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename();
    if (name == "resolved_config.json") continue;
    REQUIRE(fs::exists(b / name));
    CHECK_MESSAGE(slurp(e.path()) == slurp(b / name), name.string());
    ++n;
  }
  CHECK(n > 0);
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("CSV rendering") {
  RunConfig cfg = resolve_config("two-qubit", json::object());
  CsvTable t({"time", "label"});
  t.add_note("units", "test");
  t.add_row(std::vector<std::string>{"1", "a,b"});
  t.add_row(std::vector<std::string>{"2", "say \"hi\""});
  const std::string out = t.render(cfg);
  CHECK(out.rfind(std::string("# tool: ") + kToolVersion, 0) == 0);
  CHECK(out.find("# engine: full\n") != std::string::npos);
  CHECK(out.find("time,label\n1,\"a,b\"\n2,\"say \"\"hi\"\"\"\n") != std::string::npos);
  CHECK(out.find('\r') == std::string::npos);
  CHECK_THROWS(t.add_row(std::vector<double>{1.0}));
}

TEST_CASE("config resolution is strict") {
  const auto cfg = resolve_config("noon", json::object());
  CHECK(cfg.engine == "effective");
  CHECK(cfg.params["N"] == 3);
  CHECK_THROWS_AS(resolve_config("noon", json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(resolve_config("noon", json{{"params", {{"bogus", 1}}}}), ConfigError);
  CHECK_THROWS_AS(resolve_config("noon", json{{"params", {{"N", "three"}}}}), ConfigError);
  CHECK_THROWS_AS(resolve_config("fig1", json{{"engine", "full"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config("nonsense", json::object()), ConfigError);
  Overrides o;
  o.engine = "full";
  o.seed = 17;
  const auto over = resolve_config("noon", json{{"engine", "effective"}}, o);
  CHECK(over.engine == "full");
  CHECK(over.seed == 17);
  // Round trip through the emitted form.
  const auto again = resolve_config("noon", over.to_json());
  CHECK(again.to_json() == over.to_json());
}

TEST_CASE("exit codes") {
  CHECK(run({"two-qubit", "--print-defaults"}) == 0);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"w-state", "--config", write_config("unknown", {{"params", {{"nn", 3}}}}).string(), "--out",
             scratch("e1").string()}) == 2);
  CHECK(run({"w-state", "--config", write_config("n1", {{"params", {{"n_values", {1, 2}}}}}).string(), "--out",
             scratch("e2").string()}) == 2);
  CHECK(run({"fig1", "--engine", "full", "--out", scratch("e3").string()}) == 2);
  CHECK(run({"noon", "--config", scratch("missing.json").string()}) == 2);
  // Selective solve at the nominal detunings violates the margin: exit 3 with diagnostics kept.
  const json sel{{"params",
                  {{"source", "solve"}, {"N", 1}, {"M", 6}, {"k", 1}, {"q", 3}, {"g1", 0.02}, {"g2", 1.0},
                   {"delta1", 100.0}, {"delta2", 100.2}, {"free", "g1"}, {"populated_totals", {1, 2, 3, 4, 5, 6}}}}};
  const auto dir = scratch("e4");
  CHECK(run({"selectivity", "--config", write_config("sel", sel).string(), "--out", dir.string()}) == 3);
  CHECK(fs::exists(dir / "selectivity.json"));
}

TEST_CASE("outputs carry headers and fixed columns") {
  const auto dir = scratch("hdr");
  REQUIRE(run({"two-qubit", "--out", dir.string()}) == 0);
  const std::string csv = slurp(dir / "two_qubit.csv");
  for (const char* key : {"# tool:", "# command: two-qubit", "# engine:", "# cutoff:", "# seed:", "# tolerance:", "# units:"})
    CHECK_MESSAGE(csv.find(key) != std::string::npos, key);
  const auto j = json::parse(slurp(dir / "two_qubit.json"));
  CHECK(j["header"]["tool"] == kToolVersion);
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line) && line.rfind("#", 0) == 0) {
  }
  CHECK(line.rfind("time,", 0) == 0);
  CHECK(line.size() >= 10);
  CHECK(line.substr(line.size() - 10) == "norm_drift");
}

TEST_CASE("determinism and config round trip") {
  for (const std::string cmd : {"two-qubit", "w-state", "fig3", "dicke-seq", "noon", "selectivity"}) {
    CAPTURE(cmd);
    const auto a = scratch(cmd + "_a"), b = scratch(cmd + "_b"), c = scratch(cmd + "_c");
    REQUIRE(run({cmd, "--out", a.string(), "--seed", "7"}) == 0);
    REQUIRE(run({cmd, "--out", b.string(), "--seed", "7"}) == 0);
    check_same_outputs(a, b);
    // The emitted resolved config reproduces the run.
    REQUIRE(run({cmd, "--config", (a / "resolved_config.json").string(), "--out", c.string()}) == 0);
    check_same_outputs(a, c);
  }
}

TEST_CASE("state dumps label each basis state once") {
  const auto dir = scratch("labels");
  REQUIRE(run({"w-state", "--config", write_config("labels", {{"params", {{"n_values", {3}}}}}).string(), "--out",
               dir.string()}) == 0);
  const auto dicke = scratch("labels_seq");
  REQUIRE(run({"dicke-seq", "--engine", "full", "--out", dicke.string()}) == 0);
  const auto j = json::parse(slurp(dicke / "dicke_seq.json"));
  std::set<std::string> seen;
  for (const auto& e : j["run"]["final_state"]) CHECK(seen.insert(e["basis"].get<std::string>()).second);
  CHECK(seen.count("geegg n=0") == 1);
}

TEST_CASE("worker count does not change results") {
  const auto a = scratch("wk1"), b = scratch("wk4");
  REQUIRE(run({"w-state", "--config", write_config("wk1", {{"workers", 1}}).string(), "--out", a.string()}) == 0);
  REQUIRE(run({"w-state", "--config", write_config("wk4", {{"workers", 4}}).string(), "--out", b.string()}) == 0);
  check_same_outputs(a, b);
}
