#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "varcz/harness.hpp"

using namespace varcz;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config(Json::object()), ConfigError);
  CHECK_THROWS_AS(parse_config({{"experiment", "nope"}}), ConfigError);

  // Unknown kernel rejected before any compute.
  CHECK_THROWS_AS(parse_config({{"experiment", "domination"},
                                {"kernel", "mystery"}}),
                  ConfigError);

  // Missing lambda ladder where one is required.
  CHECK_THROWS_AS(parse_config({{"experiment", "weak11"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"experiment", "domination"},
                                {"functional", "jump-av"}}),
                  ConfigError);

  // p <= 1 rejected for the weighted experiment.
  CHECK_THROWS_AS(parse_config({{"experiment", "weighted"},
                                {"lambda_ladder", 4},
                                {"p", 1.0}}),
                  ConfigError);

  const ExperimentConfig ok = parse_config({{"experiment", "domination"},
                                            {"functional", "var-av"},
                                            {"r", 3.0}});
  CHECK(ok.exponent == 1.0);
  const ExperimentConfig jump = parse_config({{"experiment", "domination"},
                                              {"functional", "jump-av"},
                                              {"lambda_ladder", 4}});
  CHECK(jump.exponent == 2.0);
}

TEST_CASE("test function registry") {
  const Space s = Space::euclidean_grid(1, 32, 1.0);
  CHECK(make_test_function(s, "zero", 1).lpNorm<Eigen::Infinity>() == 0.0);
  const CVec r = make_test_function(s, "random", 1);
  CHECK(r.lpNorm<Eigen::Infinity>() > 0);
  const CVec r2 = make_test_function(s, "random", 1);
  CHECK((r - r2).lpNorm<Eigen::Infinity>() == 0.0);  // seeded determinism
  const CVec spike = make_test_function(s, "spike", 2);
  CHECK(spike.lpNorm<Eigen::Infinity>() >= 4.0);
  CHECK_THROWS_AS(make_test_function(s, "nope", 1), ConfigError);
}

TEST_CASE("domination experiment with zero data passes trivially") {
  const auto dir = temp_dir("varcz_dom_zero");
  Json cfg = {{"experiment", "domination"},
              {"functional", "var-av"},
              {"r", 3.0},
              {"space", {{"kind", "euclidean"}, {"dimension", 1},
                         {"spacing", 1.0}, {"sides", {32, 64}}}},
              {"functions", 2},
              {"seed", 5}};
  const ExperimentResult res = run_domination_experiment(parse_config(cfg), dir);
  CHECK(res.pass);
  CHECK(res.report["schema"] == "varcz-report/1");
  CHECK(res.report.contains("config_hash"));
  CHECK(std::filesystem::exists(dir / "domination-report.json"));
  CHECK(std::filesystem::exists(dir / "domination-ratios-32.csv"));
}

TEST_CASE("reports are byte-identical across runs") {
  const auto dir1 = temp_dir("varcz_det_1");
  const auto dir2 = temp_dir("varcz_det_2");
  const Json cfg = {{"experiment", "weak11"},
                    {"lambda_ladder", 3},
                    {"space", {{"kind", "euclidean"}, {"dimension", 1},
                               {"spacing", 1.0}, {"sides", {32, 48}}}},
                    {"functions", 3},
                    {"seed", 9}};
  run_weak11_experiment(parse_config(cfg), dir1);
  run_weak11_experiment(parse_config(cfg), dir2);
  std::ifstream a(dir1 / "weak11-report.json"), b(dir2 / "weak11-report.json");
  const std::string sa((std::istreambuf_iterator<char>(a)),
                       std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)),
                       std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK_FALSE(sa.empty());
}

TEST_CASE("budget overflow produces a failure-marked report") {
  const auto dir = temp_dir("varcz_budget");
  Json cfg = {{"experiment", "domination"},
              {"functional", "var-av"},
              {"space", {{"kind", "euclidean"}, {"dimension", 1},
                         {"spacing", 1.0}, {"sides", {4096}}}},
              {"point_budget", 1000}};
  const ExperimentResult res = run_domination_experiment(parse_config(cfg), dir);
  CHECK_FALSE(res.pass);
  CHECK(res.report.contains("failed"));
}
