#include "fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <sys/wait.h>

namespace fs = std::filesystem;
using helitack::testing::data_path;
using helitack::testing::read_text;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HELITACK_CLI) + " " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const char* name) {
  const fs::path d = fs::temp_directory_path() / "helitack_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

} // namespace

TEST_CASE("simulate writes a log that report can render") {
  const fs::path dir = scratch("simulate");
  const auto r = run("-q --output-dir " + dir.string() + " simulate --scenario " +
                     data_path("point_fire.json").string() + " --agent circler --log-out ep.json --json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["water_gal"].get<double>() == 800.0 * j["helitacks"].get<int>());
  REQUIRE(fs::exists(dir / "ep.json"));

  const auto rep = run("-q report --log " + (dir / "ep.json").string() + " --format structured");
  CHECK(rep.code == 0);
  CHECK(nlohmann::json::parse(rep.out)["schema_version"] == 1);
  const auto text = run("-q report --log " + (dir / "ep.json").string());
  CHECK(text.out.find("Suppression Timeline") != std::string::npos);
}

TEST_CASE("truncated log fails the report") {
  const fs::path dir = scratch("truncated");
  REQUIRE(run("-q --output-dir " + dir.string() + " simulate --synthetic flat_uniform --width 20 --height 16 --log-out ep.json").code == 0);
  const std::string doc = read_text(dir / "ep.json");
  {
    std::ofstream out(dir / "cut.json");
    out << doc.substr(0, doc.size() / 3);
  }
  CHECK(run("-q report --log " + (dir / "cut.json").string()).code != 0);
}

TEST_CASE("invalid scenario leaves no outputs") {
  const fs::path dir = scratch("invalid");
  {
    std::ofstream out(dir / "bad.json");
    out << "{\"version\":\"1.0\",\"width\":4}";
  }
  const auto r = run("-q --output-dir " + dir.string() + " simulate --scenario " + (dir / "bad.json").string() +
                     " --log-out ep.json");
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(dir / "ep.json"));
}

TEST_CASE("parallel episodes match sequential ones") {
  const std::string base = "-q simulate --synthetic ridge --width 60 --height 40 --agent blind --episodes 4 --json --seed 3";
  const auto a = run(base + " --parallel 1");
  const auto b = run(base + " --parallel 4");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("synth output loads back into simulate") {
  const fs::path dir = scratch("synth");
  REQUIRE(run("-q synth --kind two_fuel --width 30 --height 20 --out " + (dir / "s.json").string() +
              " --blob s.bin").code == 0);
  CHECK(fs::exists(dir / "s.bin"));
  CHECK(run("-q simulate --scenario " + (dir / "s.json").string()).code == 0);
}

TEST_CASE("dataset commands") {
  const fs::path dir = scratch("dataset");
  CHECK(run("-q dataset dedup --in " + data_path("dedup_500.csv").string() + " --out " +
            (dir / "dedup.csv").string()).code == 0);
  CHECK(run("-q dataset negatives --positives " + (dir / "dedup.csv").string() + " --out " +
            (dir / "samples.csv").string() + " --far 50 --near 100 --yearly 100").code == 0);
  CHECK(fs::exists(dir / "samples.csv"));
  // A box around one positive has no room 100 km away from it.
  std::istringstream rows(read_text(dir / "dedup.csv"));
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  double lat = 0, lon = 0;
  REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &lat, &lon) == 2);
  const std::string box = std::to_string(lat - 0.05) + "," + std::to_string(lat + 0.05) + "," +
                          std::to_string(lon - 0.05) + "," + std::to_string(lon + 0.05);
  CHECK(run("-q dataset negatives --positives " + (dir / "dedup.csv").string() + " --out " +
            (dir / "none.csv").string() + " --bbox " + box + " --far 10").code == 3);
  CHECK_FALSE(fs::exists(dir / "none.csv"));
  CHECK(run("-q dataset windows --samples " + data_path("table1_samples.csv").string() + " --weather " +
            data_path("table1_weather.csv").string() + " --out " + (dir / "w.csv").string()).code == 0);
  CHECK(read_text(dir / "w.csv").find(
            "48.128431,-97.276685,2018-08-15,No,0.0,78.6,14.9,0.00582,272.6,282.0,301.6,3.0,40.0,10.2,12.2,54.0,7.5,5.5,1.59\n") !=
        std::string::npos);
}

TEST_CASE("stdio serve reproduces the golden transcript") {
  const auto r = run("-q serve --stdio --base-dir " + std::string(HELITACK_TEST_DATA) + " < " +
                     data_path("transcript_requests.jsonl").string());
  CHECK(r.code == 0);
  CHECK(r.out == read_text(data_path("transcript_golden.jsonl")));
}
