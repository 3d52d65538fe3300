#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#ifndef CONSERV_CLI
#error "CONSERV_CLI must name the command-line binary"
#endif

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CONSERV_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args) {
  const Run r = run(args);
  REQUIRE_MESSAGE(r.status == 0, args);
  return nlohmann::json::parse(r.out);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("enum -m 99").status == 3);
  CHECK(run("enum -m 0").status == 2);
  CHECK(run("--precision 32 enum -m 2").status == 2);
  CHECK(run("enum -m 2 --cap 20").status == 2);
  CHECK(run("solve --type 2,x").status == 2);
  CHECK(run("no-such-command").status == 2);
  CHECK(run("reconstruct --coeffs 0,1,1").status == 2);
  CHECK(run("enum -m 2").status == 0);
}

TEST_CASE("enum") {
  CHECK(run_json("enum -m 1")["count"] == 1);
  const auto j = run_json("enum -m 3");
  CHECK(j["count"] == 3);
  REQUIRE(j["trees"].size() == 3);
  int weighted = 0;
  for (const auto& t : j["trees"]) {
    CHECK(t["vertices"].size() == 4);
    weighted += 3 / t["aut"].get<int>();
  }
  CHECK(weighted == 5);
  const Run text = run("enum -m 2 --format text");
  CHECK(text.status == 0);
  CHECK(text.out.find("count: 2") != std::string::npos);
}

TEST_CASE("solve and orbits") {
  const auto s = run_json("solve --type 2,1,1");
  CHECK(s["nondegenerate_count"] == 6);
  CHECK(s["predicted_count"] == 6);

  const auto o = run_json("orbits --type 3,1,1");
  CHECK(o["orbit_count"] == 1);
  CHECK(o["orbits"][0]["orbit_length"] == 2);
  CHECK(o["orbits"][0]["field"]["description"] == "Q(sqrt(41))");
  REQUIRE_FALSE(o["degenerate"].empty());
  for (const auto& p : o["degenerate"]) CHECK(p["merged_type"] == nlohmann::json::array({4, 1}));

  const auto o2 = run_json("orbits --type 2,1,1");
  CHECK(o2["orbit_count"] == 2);
  for (const auto& orb : o2["orbits"]) CHECK(orb["field"]["degree"] == 1);
}

TEST_CASE("families and reconstruction") {
  const auto f = run_json("family lambda --r 2 --s 1");
  CHECK(f["coefficients"] == nlohmann::json::array({"0", "0", "0", "4", "-3"}));
  const auto r = run_json("reconstruct --coeffs 0,0,3,-2");
  CHECK(r["type"] == nlohmann::json::array({1, 1}));
  CHECK(r["fixed_points"].size() == 3);
  const auto star = run_json("reconstruct --family star:5");
  CHECK(star["type"] == nlohmann::json::array({4}));
  CHECK(star["aut"] == 4);
}

TEST_CASE("verify") {
  for (const std::string kind : {"count", "unique-types", "invariants"}) {
    const Run r = run("verify " + kind + " --max-edges 5" + (kind == "invariants" ? " --type 3,1,1" : ""));
    CHECK_MESSAGE(r.status == 0, kind);
    CHECK(nlohmann::json::parse(r.out)["pass"] == true);
  }
}

TEST_CASE("output file and determinism") {
  const auto dir = std::filesystem::temp_directory_path() / "conserv_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.json", b = dir / "b.json";
  CHECK(run("orbits --type 2,2 -o " + a.string()).status == 0);
  CHECK(run("orbits --type 2,2 -o " + b.string()).status == 0);
  CHECK_FALSE(slurp(a).empty());
  CHECK(slurp(a) == slurp(b));

  const auto p1 = dir / "p1.ppm", p2 = dir / "p2.ppm";
  CHECK(run("render --family fdz:5 --res 64 --out " + p1.string()).status == 0);
  CHECK(run("render --family fdz:5 --res 64 --out " + p2.string()).status == 0);
  const std::string img = slurp(p1);
  CHECK(img.rfind("P6\n64 64\n255\n", 0) == 0);
  CHECK(img.size() == std::string("P6\n64 64\n255\n").size() + 64 * 64 * 3);
  CHECK(img == slurp(p2));
  std::filesystem::remove_all(dir);
}
