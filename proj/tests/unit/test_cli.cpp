#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rdc/cli.hpp"

using namespace rdc;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rdc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / "rdc_cli_test") {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kBern05 =
    R"({"prior1": 0.5, "p_x1": [1, 0], "p_x2": [0, 1], "distortion": "hamming", "classifier_region": [0]})";
const char* kOverlap =
    R"({"prior1": 0.5, "p_x1": [0.8, 0.2], "p_x2": [0.3, 0.7], "distortion": "hamming", "classifier_region": "bayes"})";

}  // namespace

TEST_CASE("grid and bound parsing") {
  CHECK(cli::parse_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(cli::parse_grid("0.2:0.2:1") == std::vector<double>{0.2});
  CHECK(std::isinf(cli::parse_grid("inf").at(0)));
  CHECK(cli::parse_grid("0:0.3:4").back() == 0.3);
  CHECK_THROWS(cli::parse_grid("0:1"));
  CHECK_THROWS(cli::parse_grid("1:0:3"));
  CHECK_THROWS(cli::parse_grid("0:1:0"));
  CHECK_THROWS(cli::parse_grid("0:1:x"));
  CHECK(std::isinf(cli::parse_bound("inf")));
  CHECK(cli::parse_bound("0.25") == 0.25);
  CHECK_THROWS(cli::parse_bound("-1"));
  CHECK_THROWS(cli::parse_bound("abc"));
}

TEST_CASE("solve") {
  TempDir tmp;
  const auto src = tmp.write("bern05.json", kBern05);
  const Result r = run({"solve", "--source", src, "--d", "0.11", "--e", "inf"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(std::abs(j.at("rate_bits").get<double>() - 0.500084041835472) < 1e-3);
  CHECK(j.at("e_bound") == "inf");
  CHECK(j.at("converged") == true);
  CHECK(j.at("channel").size() == 2);

  CHECK(run({"solve", "--source", src, "--d", "-1"}).code == cli::kUsage);
  CHECK(run({"solve", "--source", src, "--d", "zero"}).code == cli::kUsage);
  CHECK(run({"solve", "--d", "0.1"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"solve", "--source", tmp.file("missing.json"), "--d", "0.1"}).code == cli::kIo);
  CHECK(run({"solve", "--source", tmp.write("bad.json", "{]"), "--d", "0.1"}).code == cli::kUsage);

  const auto overlap = tmp.write("overlap.json", kOverlap);
  const Result inf = run({"solve", "--source", overlap, "--d", "0.1", "--e", "0.2"});
  CHECK(inf.code == cli::kInfeasible);
  CHECK(inf.err.find("infeasible") != std::string::npos);
}

TEST_CASE("sweep then verify") {
  TempDir tmp;
  const auto src = tmp.write("overlap.json", kOverlap);
  const auto csv = tmp.file("s.csv");
  const Result s = run({"sweep", "--source", src, "--grid-d", "0:0.5:6", "--grid-e", "0.26:0.5:5", "--out", csv});
  REQUIRE(s.code == cli::kOk);
  CHECK(json::parse(s.out).at("cells") == 30);
  const Result v = run({"verify", "--surface", csv, "--source", src});
  REQUIRE(v.code == cli::kOk);
  const json report = json::parse(v.out);
  CHECK(report.at("monotonicity").at("violations").empty());
  CHECK(report.at("convexity").at("violations").empty());
  CHECK(report.at("convexity").at("skipped") == 0);

  // a corrupted surface fails verification
  std::string text = slurp(csv);
  const auto pos = text.find("\n0.1,0.26,");
  REQUIRE(pos != std::string::npos);
  const auto rate_start = text.find(',', text.find(',', pos + 1) + 1) + 1;
  text.replace(rate_start, text.find(',', rate_start) - rate_start, "5");
  const Result bad = run({"verify", "--surface", tmp.write("bad.csv", text)});
  CHECK(bad.code == cli::kInfeasible);
  CHECK_FALSE(json::parse(bad.out).at("monotonicity").at("violations").empty());

  CHECK(run({"verify", "--surface", tmp.file("nope.csv")}).code == cli::kIo);
  CHECK(run({"sweep", "--source", src, "--grid-d", "0:0.5", "--out", csv}).code == cli::kUsage);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
  TempDir tmp;
  const auto src = tmp.write("overlap.json", kOverlap);
  const auto a = tmp.file("a.json"), b = tmp.file("b.json");
  REQUIRE(run({"sweep", "--source", src, "--grid-d", "0:0.4:4", "--grid-e", "0.26:0.4:3", "--out", a,
               "--no-meta", "--jobs", "1"}).code == cli::kOk);
  REQUIRE(run({"sweep", "--source", src, "--grid-d", "0:0.4:4", "--grid-e", "0.26:0.4:3", "--out", b,
               "--no-meta", "--jobs", "4"}).code == cli::kOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("timestamp") == std::string::npos);
}

TEST_CASE("bernoulli and oracle") {
  const Result r = run({"bernoulli", "--p", "0.5", "--e", "0.2"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(std::abs(j.at("d1").get<double>() - 0.2) < 5e-3);
  CHECK(j.at("d2") == "inf");
  CHECK(std::abs(j.at("plateau_rate_bits").get<double>() - 0.2780719051126377) < 2e-3);
  CHECK(j.at("sweep").size() == 200);

  const json classical = json::parse(run({"bernoulli", "--p", "0.3"}).out);
  CHECK(classical.at("plateau_rate_bits").is_null());
  CHECK(run({"bernoulli", "--p", "1.5"}).code == cli::kUsage);

  TempDir tmp;
  const auto src = tmp.write("bern05.json", kBern05);
  const Result o = run({"oracle", "--source", src, "--d", "0.11", "--resolution", "400"});
  REQUIRE(o.code == cli::kOk);
  CHECK(std::abs(json::parse(o.out).at("rate_bits").get<double>() - 0.500084041835472) < 5e-3);
  const auto overlap = tmp.write("overlap.json", kOverlap);
  CHECK(run({"oracle", "--source", overlap, "--d", "0.1", "--e", "0.2"}).code == cli::kInfeasible);
}
