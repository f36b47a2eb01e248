#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = RETARGET_FIXTURES_DIR;
const std::string kCli = RETARGET_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    r.output.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

}  // namespace

TEST_CASE("complexity subcommand honors --c-override") {
  RunResult r = run("complexity --env " + fixture("meeting_room.json") +
                    " --c-override 6.64");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  CHECK(j["area"].get<double>() == doctest::Approx(26.6));
  CHECK(j["os"].get<double>() == doctest::Approx(14.56).epsilon(1e-4));
  CHECK(j["sc"].get<double>() == doctest::Approx(48.81).epsilon(2e-4));

  SUBCASE("zero override is a validation error") {
    CHECK(run("complexity --env " + fixture("meeting_room.json") +
              " --c-override 0")
              .exit_code == 2);
  }
  SUBCASE("single-object room has zero scatteredness") {
    RunResult s =
        run("complexity --env " + fixture("simple.json") + " --c-override 1.0");
    REQUIRE(s.exit_code == 0);
    CHECK(json::parse(s.output)["os"].get<double>() == 0.0);
  }
}

TEST_CASE("dissimilarity subcommand reproduces the studio-office row") {
  // C overrides chosen so that sqrt(A)*C + OS lands on the published SC
  // values (115.30 and 17.42); SD and SMD then match the published pair row.
  double c_studio = (115.30 - 69.18) / std::sqrt(50.4);
  double c_office = (17.42 - 9.27) / std::sqrt(9.45);
  RunResult r = run("dissimilarity --virtual " + fixture("xr_studio.json") +
                    " --physical " + fixture("office.json") + " --c-virt " +
                    std::to_string(c_studio) + " --c-phys " +
                    std::to_string(c_office));
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  CHECK(j["sd"].get<double>() == doctest::Approx(1.8899).epsilon(2e-4));
  CHECK(j["smd"].get<double>() == doctest::Approx(1.2367).epsilon(2e-4));

  SUBCASE("published C values reproduce the CR column") {
    RunResult s = run("dissimilarity --virtual " + fixture("xr_studio.json") +
                      " --physical " + fixture("office.json") +
                      " --c-virt 6.50 --c-phys 3.30");
    REQUIRE(s.exit_code == 0);
    CHECK(json::parse(s.output)["cr"].get<double>() ==
          doctest::Approx(0.5077).epsilon(1e-3));
  }
  SUBCASE("studio-home overrides reproduce the published SMD") {
    double c_home = (57.92 - 7.27) / std::sqrt(40.8);
    RunResult s = run("dissimilarity --virtual " + fixture("xr_studio.json") +
                      " --physical " + fixture("home.json") + " --c-virt " +
                      std::to_string(c_studio) + " --c-phys " +
                      std::to_string(c_home));
    REQUIRE(s.exit_code == 0);
    CHECK(json::parse(s.output)["smd"].get<double>() ==
          doctest::Approx(0.4464).epsilon(2e-3));
  }
  SUBCASE("same file twice is degenerate") {
    RunResult s = run("dissimilarity --virtual " + fixture("home.json") +
                      " --physical " + fixture("home.json") +
                      " --c-virt 8.55 --c-phys 8.55");
    REQUIRE(s.exit_code == 0);
    json js = json::parse(s.output);
    CHECK(js["sd"].get<double>() == 0.0);
    CHECK(js["smd_degenerate"].get<bool>());
  }
}

TEST_CASE("register subcommand writes a non-decreasing chain") {
  std::filesystem::path out =
      std::filesystem::temp_directory_path() / "retarget_cli_chain.json";
  RunResult r = run("register --virtual " + fixture("xr_studio.json") +
                    " --physical " + fixture("office.json") +
                    " --method all --seed 7 --restarts 2 --evals 800 --out " +
                    out.string());
  REQUIRE(r.exit_code == 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  json j = json::parse(in);
  REQUIRE(j["results"].size() == 3);
  double o1 = j["results"][0]["objective"].get<double>();
  double o2 = j["results"][1]["objective"].get<double>();
  double o3 = j["results"][2]["objective"].get<double>();
  CHECK(o2 >= o1);
  CHECK(o3 >= o2);
  CHECK(j["results"][0]["method"] == "one_to_one");
  CHECK(j["results"][2]["method"] == "rtg_grid");
  std::filesystem::remove(out);
}

TEST_CASE("register rejects a missing file with exit 2 naming the path") {
  std::string cmd = kCli +
                    " register --virtual /nonexistent/v.json --physical " +
                    fixture("home.json") + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    output.append(buf.data(), n);
  int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(output.find("/nonexistent/v.json") != std::string::npos);
}

TEST_CASE("explicit default weights change nothing") {
  std::string base_args = "register --virtual " + fixture("xr_studio.json") +
                          " --physical " + fixture("home.json") +
                          " --method 1to1 --seed 3 --restarts 2 --evals 600";
  RunResult a = run(base_args);
  RunResult b = run(base_args + " --weights 100,30,5,10");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("simulate emits the CSV header and identity path") {
  RunResult r = run("simulate --env " + fixture("xr_lab.json") +
                    " --gains 1.0,1.0 --path \"0.5,0.5 2.0,0.5\" --step 0.1");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("phys_x,phys_y,virt_x,virt_y,gx,gy\n", 0) == 0);
  // Identity gains: physical and virtual columns agree on every row.
  std::istringstream lines(r.output);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    double px, py, vx, vy, gx, gy;
    REQUIRE(sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &px, &py, &vx, &vy,
                   &gx, &gy) == 6);
    CHECK(px == doctest::Approx(vx).epsilon(1e-12));
    CHECK(py == doctest::Approx(vy).epsilon(1e-12));
    CHECK(gx == 1.0);
    ++rows;
  }
  CHECK(rows >= 16);

  SUBCASE("path outside the footprint fails validation") {
    CHECK(run("simulate --env " + fixture("xr_lab.json") +
              " --gains 1.0,1.0 --path \"0.5,0.5 20.0,0.5\"")
              .exit_code == 2);
  }
}

TEST_CASE("render subcommand produces an SVG from a result file") {
  std::filesystem::path result_path =
      std::filesystem::temp_directory_path() / "retarget_cli_result.json";
  std::filesystem::path svg_path =
      std::filesystem::temp_directory_path() / "retarget_cli_result.svg";
  RunResult reg = run("register --virtual " + fixture("xr_studio.json") +
                      " --physical " + fixture("home.json") +
                      " --method 1to1 --seed 5 --restarts 2 --evals 600" +
                      " --out " + result_path.string());
  REQUIRE(reg.exit_code == 0);
  RunResult ren = run("render --in " + result_path.string() + " --virtual " +
                      fixture("xr_studio.json") + " --physical " +
                      fixture("home.json") + " --out " + svg_path.string());
  REQUIRE(ren.exit_code == 0);
  std::ifstream svg(svg_path);
  REQUIRE(svg.good());
  std::string text((std::istreambuf_iterator<char>(svg)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
  std::filesystem::remove(result_path);
  std::filesystem::remove(svg_path);
}

TEST_CASE("environment variable seeds the run") {
  std::string cmd = "RETARGET_SEED=99 " + kCli + " register --virtual " +
                    fixture("xr_studio.json") + " --physical " +
                    fixture("office.json") +
                    " --method 1to1 --restarts 2 --evals 400 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    output.append(buf.data(), n);
  pclose(pipe);
  json j = json::parse(output);
  CHECK(j["seed"].get<std::uint64_t>() == 99);
}
