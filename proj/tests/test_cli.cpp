#include <catch2/catch_amalgamated.hpp>

#include <lassoscreen/io.hpp>
#include <lassoscreen/simulate.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace lassoscreen;

namespace {

namespace fs = std::filesystem;

/// Scratch directory for one test case, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("lassoscreen_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  const char* cli = std::getenv("LASSOSCREEN_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("help and argument errors use the documented exit codes") {
  REQUIRE(run_cli("--help") == 0);
  REQUIRE(run_cli("fit --help") == 0);
  REQUIRE(run_cli("") == 2);                       // a subcommand is required
  REQUIRE(run_cli("frobnicate") == 2);             // unknown subcommand
  REQUIRE(run_cli("fit") == 2);                    // missing input
  REQUIRE(run_cli("simulate --n nope") == 2);      // unparseable option
}

TEST_CASE("simulate then fit produces the advertised artifacts") {
  TempDir dir("fit");
  const std::string csv = dir.file("sim.csv");
  REQUIRE(run_cli("simulate --n 30 --p 40 --snr 6 --seed 7 --out " + csv) == 0);

  const DesignData design = read_design_csv(csv);
  REQUIRE(design.X.rows() == 30);
  REQUIRE(design.X.cols() == 40);

  const std::string prefix = dir.file("fit");
  REQUIRE(run_cli("fit " + csv + " --path-length 25 --out " + prefix) == 0);

  const nlohmann::json doc = load_json(prefix + ".json");
  const Index steps = doc["steps_done"].get<Index>();
  REQUIRE(steps >= 2);
  REQUIRE(doc["lambdas"].size() == static_cast<size_t>(steps));
  REQUIRE(doc["strategy"].get<std::string>() == "gap_safe_aws_lookahead");
  REQUIRE(doc["betas"].size() == static_cast<size_t>(steps));
  REQUIRE(doc["betas"][0].size() == 40);  // reported against the input columns
  for (const auto& value : doc["betas"][0]) REQUIRE(value.get<double>() == 0.0);
  REQUIRE(doc["dev_ratios"][0].get<double>() == 0.0);
  REQUIRE(doc["dropped_columns"].empty());

  const CsvTable table = read_csv(prefix + "_steps.csv");
  REQUIRE(Index(table.rows.size()) == steps);
}

TEST_CASE("fit failures are reported through exit code 2") {
  TempDir dir("fiterr");
  REQUIRE(run_cli("fit " + dir.file("missing.csv")) == 2);

  const std::string bad = dir.file("bad.csv");
  {
    std::ofstream out(bad);
    out << "y,x1\n1,2\n3,huh\n";
  }
  REQUIRE(run_cli("fit " + bad) == 2);

  const std::string good = dir.file("good.csv");
  {
    std::ofstream out(good);
    out << "y,x1,x2\n1,2,0.5\n-1,0,1\n2,1,-1\n-2,-3,0\n";
  }
  REQUIRE(run_cli("fit " + good + " --strategy bogus") == 2);
}

TEST_CASE("constant columns are dropped but reported in the original frame") {
  TempDir dir("dropped");
  Matrix X(6, 4);
  X << 1, 7, 0.5, -1, -1, 7, 1.0, 2, 2, 7, -0.5, 0, -2, 7, 0.25, 1, 0.5, 7, -1.0, -2,
      -0.5, 7, 0.75, 3;
  Vector y(6);
  y << 1, -1, 2, -2, 0.5, -0.5;
  const std::string csv = dir.file("const.csv");
  write_design_csv(csv, X, y);

  const std::string prefix = dir.file("fit");
  REQUIRE(run_cli("fit " + csv + " --path-length 8 --out " + prefix) == 0);
  const nlohmann::json doc = load_json(prefix + ".json");
  REQUIRE(doc["dropped_columns"] == std::vector<Index>{1});
  REQUIRE(doc["betas"][0].size() == 4);
  for (const auto& step : doc["betas"]) {
    REQUIRE(step[1].get<double>() == 0.0);  // the constant column stays at zero
  }

  // the screen map speaks the original column language too
  const std::string map_csv = dir.file("map.csv");
  REQUIRE(run_cli("screenmap --input " + csv + " --path-length 6 --out " + map_csv) == 0);
  std::set<Index> seen;
  for (const ScreenRow& row : read_screenmask_csv(map_csv)) seen.insert(row.predictor);
  REQUIRE(seen == std::set<Index>{0, 2, 3});
}

TEST_CASE("bench output is deterministic apart from wall times") {
  TempDir dir("bench");
  const std::string args =
      " --n 25 --p 50 --reps 2 --path-length 12 --seed 5 --snr 1 --snr 6 --out ";
  const std::string a = dir.file("a.csv");
  const std::string b = dir.file("b.csv");
  REQUIRE(run_cli("bench" + args + a) == 0);
  REQUIRE(run_cli("bench" + args + b) == 0);

  const std::vector<BenchRow> ra = read_bench_csv(a);
  const std::vector<BenchRow> rb = read_bench_csv(b);
  REQUIRE(ra.size() == 8);  // 2 SNRs x 2 repetitions x 2 strategies
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    REQUIRE(ra[i].snr == rb[i].snr);
    REQUIRE(ra[i].strategy == rb[i].strategy);
    REQUIRE(ra[i].repetition == rb[i].repetition);
    REQUIRE(ra[i].seed == rb[i].seed);
    REQUIRE(ra[i].total_passes == rb[i].total_passes);
    REQUIRE(ra[i].total_coord_updates == rb[i].total_coord_updates);
    REQUIRE(ra[i].steps_done == rb[i].steps_done);
    REQUIRE(ra[i].wall_time_s >= 0.0);
  }

  // repetitions draw distinct data, so the work differs between them
  REQUIRE(ra[0].seed != ra[2].seed);
}

TEST_CASE("screenmap emits one row per predictor and step") {
  TempDir dir("map");
  const std::string full = dir.file("full.csv");
  REQUIRE(run_cli("screenmap --n 30 --p 50 --snr 6 --seed 3 --path-length 12 --out " +
                  full) == 0);
  const std::vector<ScreenRow> rows = read_screenmask_csv(full);
  REQUIRE(rows.size() == 50 * 12);

  bool any_discard = false;
  for (const ScreenRow& row : rows) {
    if (row.step == 0) REQUIRE_FALSE(row.discarded);  // never the fitted step itself
    if (row.discarded) {
      REQUIRE(row.source == ScreenSource::look_ahead);
      any_discard = true;
    }
  }
  REQUIRE(any_discard);

  const std::string part = dir.file("part.csv");
  REQUIRE(run_cli("screenmap --n 30 --p 50 --snr 6 --seed 3 --path-length 12 "
                  "--subsample 10 --out " +
                  part) == 0);
  const std::vector<ScreenRow> subset = read_screenmask_csv(part);
  REQUIRE(subset.size() == 10 * 12);
  std::set<Index> predictors;
  for (const ScreenRow& row : subset) predictors.insert(row.predictor);
  REQUIRE(predictors.size() == 10);
}
