#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "lengthlab/catalog.hpp"
#include "lengthlab/rauch.hpp"
#include "lengthlab/report.hpp"
#include "lengthlab/spacefile.hpp"

using namespace lengthlab;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI binary (tests execute from the build directory).
RunResult run_cli(const std::string& args) {
  RunResult r;
  std::string cmd = "./lengthlab " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[512];
  while (fgets(buf, sizeof buf, p)) r.output += buf;
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

}  // namespace

TEST_CASE("space text: explicit definition round-trips") {
  std::string text =
      "name = strip\n"
      "chart = flat_polygon 0,0 2,0 2,1 0,1\n"
      "chart = segment 1.5\n"
      "point_gluing = 0:0,0,0 1:0,0,0\n"
      "eta = 0.01\n"
      "delta_witness = 0.4\n"
      "cba_kappa = 0\n";
  auto X = parse_space_text(text);
  CHECK(X->name == "strip");
  CHECK(X->num_charts() == 2);
  CHECK(X->points.size() == 1);
  CHECK(X->delta_witness == doctest::Approx(0.4));
  REQUIRE(X->cba_kappa.has_value());
  CHECK(*X->cba_kappa == 0);
  std::string desc = describe_space(*X);
  CHECK(desc.find("charts: 2") != std::string::npos);
}

TEST_CASE("space text: catalog reference with parameters") {
  auto X = parse_space_text("catalog = flat_torus\nparam side = 2.0\n");
  CHECK(X->name == "flat_torus");
  SpacePoint a{0, {0.25, 0.25, 0}}, b{0, {1.75, 0.25, 0}};
  CHECK(distance(*X, a, b).d == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("space text: malformed definitions are rejected") {
  CHECK_THROWS_AS(parse_space_text("catalog = sphere\nchart = segment 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_space_text("frobnicate = 7\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_space_text(""), std::invalid_argument);
}

TEST_CASE("space validation accepts catalog spaces") {
  auto X = catalog::build_flat_disk(1.0);
  auto v = validate_space(*X, 32, 16);
  CHECK(v.ok);
  CHECK(v.witness_validated >= X->delta_witness);
}

TEST_CASE("definition hashing is deterministic and content-sensitive") {
  CHECK(text_hash("abc") == text_hash("abc"));
  CHECK(text_hash("abc") != text_hash("abd"));
}

TEST_CASE("radius table formatting") {
  RadiusReport r;
  r.horizon = 3.0;
  r.first_inj = ExtReal(1.5);
  r.unique_inj = ExtReal(1.5);
  r.min_rad = ExtReal::infinity();
  r.sym_inj = ExtReal(1.5);
  r.ult_inj = ExtReal(1.5);
  r.ult_conj = ExtReal::infinity();
  r.schedule_hash = 42;
  std::string row = radius_csv_row("demo", "p1", 0.01, r);
  CHECK(row.find(">=3.0") != std::string::npos);
  CHECK(row.find("demo,p1,3,0.01,") == 0);
  // one field per header column
  auto commas = [](const std::string& s) {
    return std::count(s.begin(), s.end(), ',');
  };
  CHECK(commas(row) == commas(radius_csv_header()));
}

TEST_CASE("jsonl records parse and are deterministic") {
  ConjugacyVerdict v;
  v.kind = VerdictKind::symmetric;
  v.levels_completed = 2;
  std::string rec = verdict_jsonl("sphere", "p->q", v);
  CHECK(rec == verdict_jsonl("sphere", "p->q", v));
  auto j = nlohmann::json::parse(rec);
  CHECK(j["kind"] == "symmetric");
  CHECK(j["record"] == "verdict");

  std::string a = audit_jsonl("demo", "fan", true, {{"x", 1.5}}, "ok");
  auto ja = nlohmann::json::parse(a);
  CHECK(ja["ok"] == true);
  CHECK(ja["metrics"]["x"] == 1.5);
}

TEST_CASE("run manifest: identical manifests hash identically") {
  RunManifest m;
  m.command = "radii";
  m.space_hash = 7;
  m.parameters = {{"horizon", "3"}, {"point", "p1"}};
  RunManifest m2 = m;
  CHECK(m.hash() == m2.hash());
  CHECK(m.to_json() == m2.to_json());
  m2.parameters["horizon"] = "4";
  CHECK(m.hash() != m2.hash());
}

TEST_CASE("svg figures are produced") {
  auto X = catalog::build_flat_plane(3.0);
  auto g = chart_segment(*X, 0, {0, 0, 0}, {1, 0, 0});
  auto s = chart_segment(*X, 0, {0, 0, 0}, {0.98, 0.15, 0});
  Bridge b = build_bridge(*X, g, s, 4, 0);
  ComparisonBridge cb = develop_comparison_bridge(b, 0);
  std::string svg = svg_comparison_bridge(cb);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("comparison bridge") != std::string::npos);

  PolyCurve C(*X, {{0, {0, 0, 0}}, {0, {1, 0, 0}}, {0, {1, 1, 0}}});
  Fan fan = build_fan(*X, C, 10.0);
  std::string fsvg = svg_fan(*X, C, fan);
  CHECK(fsvg.find("<svg") != std::string::npos);
  CHECK(fsvg.find("fan:") != std::string::npos);
}

TEST_CASE("cli: dist matches the closed form") {
  auto r = run_cli("dist --space flat_disk --from 0,0 --to 0.3,0.4");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(r.output) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("cli: radii on the pinned sector reports the quoted values") {
  auto r = run_cli("radii --space pinned_sector --point p1 --horizon 10");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find(">=10") != std::string::npos);  // MinRad at horizon
  // FirstInj = pi
  CHECK(r.output.find("3.141") != std::string::npos);
}

TEST_CASE("cli: klingenberg on the circle with chord") {
  auto r = run_cli("klingenberg --space circle_chord --r0 1 --chord 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("closed geodesic") != std::string::npos);
  size_t pos = r.output.find("length ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.output.substr(pos + 7)) ==
        doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("cli: malformed input exits 1") {
  CHECK(run_cli("dist --space no_such_space_anywhere --from 0,0 --to 1,1")
            .exit_code == 1);
  CHECK(run_cli("dist --space sphere --from bogus --to 0,0,1").exit_code == 1);
}

TEST_CASE("cli: fan subcommand consumes a polyline fixture") {
  write_file("cli_fan_fixture.txt",
             "# quarter turn in the plane\n"
             "0:0,0 0:0.3,0.1 0:0.5,0.3 0:0.6,0.6\n");
  auto r = run_cli(
      "fan --space flat_plane --curve cli_fan_fixture.txt --ult-bound 10 "
      "--svg cli_fan_fixture.svg");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["ok"] == true);
  CHECK(j["note"] == "completed");
  std::ifstream svg("cli_fan_fixture.svg");
  CHECK(svg.good());
}

TEST_CASE("cli: homotopy subcommand consumes a grid fixture") {
  // planar circle loop with its radial contraction
  std::ostringstream loop, grid;
  int n = 12, T = 3;
  for (int t = 0; t <= T; ++t) {
    double rad = 0.5 * t / T;
    for (int i = 0; i <= n; ++i) {
      double th = 2 * M_PI * i / n;
      grid << "0:" << rad * std::cos(th) << ',' << rad * std::sin(th) << ' ';
      if (t == T) loop << "0:" << 0.5 * std::cos(th) << ',' << 0.5 * std::sin(th) << ' ';
    }
    grid << "\n\n";
  }
  write_file("cli_loop_fixture.txt", loop.str() + "\n");
  write_file("cli_grid_fixture.txt", grid.str());
  auto r = run_cli(
      "homotopy --space flat_plane --loop cli_loop_fixture.txt --grid "
      "cli_grid_fixture.txt --ult-bound 10");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["note"].get<std::string>().find("closed_throughout") !=
        std::string::npos);
}

TEST_CASE("cli: deterministic outputs for identical invocations") {
  std::string cmd =
      "rauch --space sphere --kappa 1 --geodesics 4 --triangles 10 --pairs 3 "
      "--levels 2 --n 8";
  auto r1 = run_cli(cmd);
  auto r2 = run_cli(cmd);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r2.output);
}
