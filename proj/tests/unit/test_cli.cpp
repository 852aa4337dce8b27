#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hardy/cli.hpp"

using namespace hardy;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("hardy_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
    setenv("HARDY_CACHE_DIR", (path / "cache").c_str(), 1);
  }
  ~TempDir() {
    unsetenv("HARDY_CACHE_DIR");
    fs::remove_all(path);
  }
};

}  // namespace

TEST_CASE("saddle subcommand") {
  const Run r = run({"saddle", "--n", "1", "--u", "0"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("t_n = 6.283185307") != std::string::npos);
}

TEST_CASE("sieve dump sums to 371") {
  TempDir dir;
  const auto dump = (dir.path / "sieve.csv").string();
  const Run r = run({"sieve", "--n", "10", "--dump", dump});
  REQUIRE(r.code == kExitOk);
  std::istringstream rows(slurp(dump));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "n,d,d3,d3_squared,d3sq_prefix");
  long total = 0;
  while (std::getline(rows, line)) {
    std::istringstream fields(line);
    std::string cell;
    for (int i = 0; i < 4; ++i) std::getline(fields, cell, ',');
    total += std::stol(cell);
  }
  CHECK(total == 371);
  CHECK(fs::exists(dir.path / "cache" / "d3sieve_10.bin"));
  CHECK(fs::exists(dump + ".manifest.json"));
}

TEST_CASE("compare writes a csv row and manifest") {
  TempDir dir;
  const auto csv = (dir.path / "out.csv").string();
  const Run r = run({"compare", "--t", "2000", "--u", "0", "--csv", csv});
  CHECK(r.code == kExitOk);
  const std::string first = slurp(csv);
  CHECK(first.rfind("T,U,variant,lhs,rhs_re,rhs_im,abs_diff,normalized,n_terms,evaluations\n2000,0,exact,", 0) == 0);
  const auto manifest = nlohmann::json::parse(slurp(csv + ".manifest.json"));
  CHECK(manifest["command"] == "compare");
  CHECK(manifest["outputs"][0] == csv);
  CHECK(manifest["calibration_constants"]["thm1_normalized"] == 5.0);
  CHECK(manifest.contains("started"));
  CHECK(manifest.contains("finished"));
  CHECK(manifest["tool_version"] == HARDY_VERSION);

  REQUIRE(run({"compare", "--t", "2000", "--u", "0", "--csv", csv}).code == kExitOk);
  CHECK(slurp(csv) == first);
}

TEST_CASE("tolerance failure flushes a marker row") {
  TempDir dir;
  const auto cal = (dir.path / "cal.json").string();
  std::ofstream(cal) << R"({"thm1_normalized": 0.001})";
  const auto csv = (dir.path / "out.csv").string();
  const Run r = run({"compare", "--t", "1000", "--u", "0", "--calibration", cal, "--csv", csv});
  CHECK(r.code == kExitFailure);
  const std::string body = slurp(csv);
  CHECK(body.find("1000,0,exact,") != std::string::npos);
  CHECK(body.find("FAILED,") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"moment", "--kind", "m9", "--t", "200"}).code == kExitUsage);
  CHECK(run({"saddle", "--n", "1"}).code == kExitUsage);
  CHECK(run({"saddle", "--n", "1", "--u", "-1"}).code == kExitUsage);
  CHECK(run({"z-eval", "--t", "10", "--method", "rs"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("z-eval, moment, expsum and msq") {
  TempDir dir;
  Run r = run({"z-eval", "--t", "1000", "--method", "oracle"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("Z(t) = 0.9977946375") != std::string::npos);
  r = run({"moment", "--kind", "m3shift", "--t", "500", "--u", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("range = [250, 500]") != std::string::npos);
  r = run({"expsum", "--n", "2", "--alpha", "0", "--nprime", "4"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("S = 9 + 0i") != std::string::npos);
  const auto json_path = (dir.path / "msq.json").string();
  const auto csv_path = (dir.path / "msq.csv").string();
  r = run({"msq", "--n", "1000", "--a", "1", "--b", "4", "--find-point", "--json", json_path, "--csv", csv_path});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(slurp(json_path));
  CHECK(j["N"] == 1000);
  CHECK(j["abs_S_at_C"].get<double>() <= j["bound"].get<double>());
  CHECK(slurp(csv_path).rfind("alpha,S_re,S_im,abs_S\n", 0) == 0);
}

TEST_CASE("suite smoke subset") {
  TempDir dir;
  const Run r = run({"suite", "--level", "smoke", "--only", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("PASS criterion 3") != std::string::npos);
}

TEST_CASE("suite calibration round trip") {
  TempDir dir;
  const auto cal = (dir.path / "cal.json").string();
  const Run r = run({"suite", "--level", "smoke", "--only", "5", "--calibrate", "--calibration", cal});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(slurp(cal));
  CHECK(j["theorem2_ratio"].get<double>() < 1e-4);
  CHECK(j["thm1_normalized"].get<double>() == 5.0);
  CHECK(run({"suite", "--level", "smoke", "--only", "5", "--calibration", cal}).code == kExitOk);
}
