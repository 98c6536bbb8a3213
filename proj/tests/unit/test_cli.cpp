#include <doctest.h>

#include "tempdir.hpp"

#include "crisisflow/cli.hpp"
#include "crisisflow/csv.hpp"
#include "crisisflow/io.hpp"

#include <cstdlib>
#include <filesystem>

using namespace crisisflow;
using testing::slurp;
using testing::TempDir;

namespace {

const std::string kData = std::string(CRISISFLOW_SOURCE_DIR) + "/data/synthetic";
const std::string kCounts = kData + "/counts.csv";
const std::string kPopulation = kData + "/population.csv";

// Runs the installed binary so stderr can be captured.
int run_binary(const std::string& args, const std::string& stderr_path) {
  const std::string cmd = std::string(CRISISFLOW_CLI) + " " + args + " 2>" + stderr_path + " >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("help exits 0") {
  CHECK(dispatch({"segment", "--help"}) == 0);
  CHECK(dispatch({"--help"}) == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(dispatch({"segment", "--population", kPopulation, "--out", "/dev/null"}) == 2);  // missing --counts
  CHECK(dispatch({"frobnicate"}) == 2);
  CHECK(dispatch({}) == 2);
  CHECK(dispatch({"segment", "--counts", kData + "/nope.csv", "--population", kPopulation, "--out", "x"}) == 2);
}

TEST_CASE("config errors exit 2 and domain errors exit 1") {
  TempDir dir;
  const auto bad_cfg = dir.write("bad.json", R"({"delta_maxx": 1})");
  CHECK(dispatch({"segment", "--counts", kCounts, "--population", kPopulation, "--config", bad_cfg, "--out",
                  dir.file("s.csv")}) == 2);
  const auto counts = dir.write("c.csv", "country_code,year,refugees,asylum_seekers\nAAA,2000,1,0\n");
  const auto pops = dir.write("p.csv", "country_code,year,population\nBBB,2000,10\n");
  CHECK(dispatch({"segment", "--counts", counts, "--population", pops, "--out", dir.file("s.csv")}) == 1);
}

TEST_CASE("happy path on the bundled synthetic data") {
  TempDir dir;
  const std::vector<std::string> data = {"--counts", kCounts, "--population", kPopulation};
  auto with = [&](std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), data.begin(), data.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  const std::vector<std::string> budget = {"--chains", "2", "--warmup", "400", "--keep", "400", "--thin", "4"};

  REQUIRE(dispatch(with({"ingest"}, {"--out", dir.file("series.csv"), "--audit", dir.file("ingest_audit.txt")})) == 0);
  REQUIRE(dispatch(with({"segment"}, {"--out", dir.file("segments.csv"), "--audit", dir.file("audit.txt")})) == 0);
  auto fit_args = with({"fit"}, {"--segments", dir.file("segments.csv"), "--out", dir.file("draws.csv")});
  fit_args.insert(fit_args.end(), budget.begin(), budget.end());
  REQUIRE(dispatch(fit_args) == 0);
  REQUIRE(dispatch(with({"project"}, {"--draws", dir.file("draws.csv"), "--segments", dir.file("segments.csv"),
                                      "--horizon", "12", "--out", dir.file("projections.csv"), "--emit-draws",
                                      dir.file("trajectories.csv")})) == 0);
  REQUIRE(dispatch(with({"report"}, {"--projections", dir.file("projections.csv"), "--segments",
                                     dir.file("segments.csv"), "--out-dir", dir.file("report")})) == 0);
  auto val_args = with({"validate"}, {"--cutoff", "2011", "--horizons", "1,5", "--out", dir.file("validation.csv")});
  val_args.insert(val_args.end(), budget.begin(), budget.end());
  REQUIRE(dispatch(val_args) == 0);

  for (const char* f : {"series.csv", "segments.csv", "draws.csv", "diagnostics.csv", "projections.csv",
                        "trajectories.csv", "validation.csv", "report/growth_lengths_hist.csv"}) {
    CAPTURE(f);
    const std::string text = slurp(dir.file(f));
    REQUIRE(!text.empty());
    CHECK(text.rfind("# crisisflow ", 0) == 0);
  }
  CHECK(slurp(dir.file("audit.txt")).find("EXCLUDED") != std::string::npos);
  bool any_svg = false;
  for (const auto& e : std::filesystem::directory_iterator(dir.path() / "report")) any_svg |= e.path().extension() == ".svg";
  CHECK(any_svg);

  const auto rows = read_projections_csv(dir.file("projections.csv"));
  REQUIRE(!rows.empty());
  for (const auto& r : rows)
    for (std::size_t j = 1; j < r.q.size(); ++j) CHECK(r.q[j] >= r.q[j - 1]);
  const auto report = slurp(dir.file("validation.csv"));
  CHECK(report.find("2011,5,benchmark,mean_abs_error") != std::string::npos);
}

TEST_CASE("flags override the config file, which overrides defaults") {
  TempDir dir;
  const auto cfg = dir.write("c.json", R"({"delta_max": 15, "window_w": 4})");
  const auto log = dir.file("stderr.txt");
  const std::string args = "validate --counts " + kCounts + " --population " + kPopulation + " --config " + cfg +
                           " --delta-max 10 --chains 2 --warmup 100 --keep 100 --thin 1 --cutoff 2011 --horizons 1 --out " +
                           dir.file("v.csv");
  REQUIRE(run_binary(args, log) == 0);
  const std::string text = slurp(log);
  CHECK(text.find("\"delta_max\":10") != std::string::npos);
  CHECK(text.find("\"window_w\":4") != std::string::npos);
  CHECK(text.find("\"crisis_floor\":0.00025") != std::string::npos);
  CHECK(text.find("seed=20240101") != std::string::npos);
}

TEST_CASE("the seed flag reaches the provenance line") {
  TempDir dir;
  REQUIRE(dispatch({"segment", "--counts", kCounts, "--population", kPopulation, "--seed", "5", "--out",
                    dir.file("s.csv"), "--audit", dir.file("a.txt")}) == 0);
  CHECK(slurp(dir.file("s.csv")).find("seed=5\n") != std::string::npos);
}
