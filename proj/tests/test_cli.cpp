#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
};

std::string fixture(std::string const& name) { return std::string(MESO_FIXTURE_DIR) + "/" + name; }

Run run(std::string const& args) {
  std::string cmd = std::string(MESODEC_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  while (auto k = fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Json run_json(std::string const& args) {
  auto r = run(args + " --format json");
  INFO(args);
  REQUIRE(r.code == 0);
  return Json::parse(r.out);
}

std::filesystem::path scratch(std::string const& name) {
  auto dir = std::filesystem::temp_directory_path() / "mesodec_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(std::filesystem::path const& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("witnesses subcommand", "[cli]") {
  auto j = run_json("witnesses " + fixture("keynottrue.cong") + " --prime x,y");
  REQUIRE(j["primes"].size() == 1);
  std::size_t key = 0, tru = 0;
  for (auto const& w : j["primes"][0]["witnesses"]) {
    key += w["key"].get<bool>();
    tru += w["true"].get<bool>();
  }
  CHECK(key == 5);
  CHECK(tru == 3);

  auto i2 = run_json("witnesses " + fixture("i2.cong") + " --prime x,y");
  auto const& origin = i2["primes"][0]["witnesses"][0];
  CHECK(origin["element"] == "1");
  CHECK(origin["maximal"] == false);
  CHECK(origin["suspicious"] == false);
  CHECK(origin["true"] == true);

  auto empty = scratch("empty.cong");
  std::ofstream(empty) << "vars x, y;\n";
  auto e = run("witnesses " + empty.string() + " --prime x,y");
  CHECK(e.code == 0);
  CHECK(e.out.find("yes") == std::string::npos);
}

TEST_CASE("decompose subcommand", "[cli]") {
  auto k = run_json("decompose " + fixture("keynottrue.cong") + " --tier true");
  CHECK(k["components"].size() == 3);
  CHECK(k["verification"]["status"] == "verified_exact");

  auto s = run_json("decompose " + fixture("symmetry.cong") + " --tier true");
  CHECK(s["components"].size() == 3);
  CHECK(s["verification"]["status"] == "verified_exact");
  bool empty_prime = false;
  for (auto const& c : s["components"]) empty_prime |= c["prime"].empty();
  CHECK(empty_prime);

  auto x = run_json("decompose " + fixture("ex45.cong") + " --check " + fixture("ex45_noninduced.json"));
  CHECK(x["verification"]["status"] == "verified_exact");
  CHECK(x["checks"]["induced"] == false);
  CHECK(x["checks"]["redundant"].empty());

  auto v = run_json("verify " + fixture("ex45.cong") + " " + fixture("ex45_noninduced.json"));
  CHECK(v["verification"]["status"] == "verified_exact");
}

TEST_CASE("poset and realize subcommands", "[cli]") {
  auto m = run_json("poset " + fixture("i2.cong") + " --kind mesoass");
  CHECK(m["elements"].size() == 3);
  CHECK(m["covers"].size() == 2);

  auto prefix = scratch("chain2");
  CHECK(run("realize " + fixture("chain2.poset.json") + " --kind flat -o " + prefix.string()).code == 0);
  auto chain = run_json("poset " + prefix.string() + ".cong --kind mesoass");
  CHECK(chain["elements"].size() == 2);
  CHECK(chain["covers"].size() == 1);
  CHECK(Json::parse(slurp(prefix.string() + ".recipe.json"))["kind"] == "flat");

  auto boolean = scratch("boolean4");
  CHECK(run("realize " + fixture("boolean4.poset.json") + " --kind graded -o " + boolean.string()).code == 0);
  auto omega = run_json("poset " + boolean.string() + ".cong --kind omega --prime x1,x2,x3");
  CHECK(omega["elements"].size() == 4);
  CHECK(omega["covers"].size() == 4);

  auto meso = scratch("mesoprimary.cong");
  std::ofstream(meso) << "vars x, y;\nx^2;\ny;\n";
  auto single = run_json("poset " + meso.string() + " --kind mesoass");
  CHECK(single["elements"].size() == 1);

  auto anti = run("realize " + fixture("antichain2.poset.json") + " --kind flat");
  CHECK(anti.code == 4);
}

TEST_CASE("draw subcommand", "[cli]") {
  auto dot = run("draw " + fixture("keynottrue.cong") + " --project x,y --box 5,5");
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("graph", 0) == 0);
  auto grid = run("draw " + fixture("truewitness_i1.cong") + " --project x,y --format text");
  CHECK(grid.code == 0);
  CHECK_FALSE(grid.out.empty());
}

TEST_CASE("exit codes", "[cli]") {
  auto bad = scratch("bad.cong");
  std::ofstream(bad) << "vars x, y;\n2*x - y;\n";
  CHECK(run("witnesses " + bad.string()).code == 2);
  CHECK(run("decompose " + fixture("keynottrue.cong") + " --tier nonsense").code == 2);
  CHECK(run("witnesses " + fixture("keynottrue.cong") + " --prime q").code == 2);
  auto open = scratch("open.cong");
  std::ofstream(open) << "vars x, y;\nx^2*y - x*y^2;\n";
  CHECK(run("witnesses " + open.string() + " --strict").code == 3);
  CHECK(run("realize " + fixture("antichain2.poset.json") + " --kind graded").code == 4);
}

TEST_CASE("repeated runs are byte-identical", "[cli][determinism]") {
  std::vector<std::string> cmds;
  for (auto const& f : {"keynottrue.cong", "i2.cong", "symmetry.cong", "truewitness_i1.cong", "ex45.cong"}) {
    auto p = fixture(f);
    cmds.push_back("witnesses " + p + " --format json");
    cmds.push_back("decompose " + p + " --tier key");
    cmds.push_back("decompose " + p + " --tier true");
    cmds.push_back("poset " + p + " --kind mesoass");
    cmds.push_back("poset " + p + " --kind mesoass --format dot");
    cmds.push_back("draw " + p + " --project x,y");
  }
  cmds.push_back("decompose " + fixture("ex45.cong") + " --check " + fixture("ex45_noninduced.json"));
  for (auto const& f : {"chain2.poset.json", "boolean4.poset.json"}) {
    cmds.push_back("realize " + fixture(f) + " --kind flat --format json");
    cmds.push_back("realize " + fixture(f) + " --kind graded --format json");
  }
  for (auto const& c : cmds) {
    INFO(c);
    auto a = run(c), b = run(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
