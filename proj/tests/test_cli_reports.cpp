#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ale/reports.hpp"

using namespace ale::cli;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

JobConfig small_quotient_config(const std::string& dir) {
  JobConfig cfg;
  cfg.command = "quotient";
  cfg.parameters = {{"m", 4}, {"k", 2}, {"exponents", {1, 1, 1, 1}}};
  cfg.output.directory = dir;
  return cfg;
}

}  // namespace

TEST_CASE("config round-trips through json") {
  JobConfig cfg;
  cfg.command = "calabi";
  cfg.parameters = {{"m", 3}};
  cfg.grid.t_min = 1e-3;
  cfg.grid.t_max = 1e7;
  cfg.grid.n_points = 321;
  cfg.tolerances.fit = 0.01;
  cfg.output.directory = "somewhere";
  cfg.output.formats = {"json"};

  const JobConfig back = JobConfig::from_json(cfg.to_json());
  CHECK(back.command == cfg.command);
  CHECK(back.parameters == cfg.parameters);
  CHECK(back.grid.t_min == cfg.grid.t_min);
  CHECK(back.grid.t_max == cfg.grid.t_max);
  CHECK(back.grid.n_points == cfg.grid.n_points);
  CHECK(back.tolerances.fit == cfg.tolerances.fit);
  CHECK(back.output.directory == cfg.output.directory);
  CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("malformed configs are rejected") {
  json j = {{"command", "calabi"}, {"grid", {{"n_points", 4}}}};
  CHECK_THROWS_AS(JobConfig::from_json(j), std::invalid_argument);
  json bad_tol = {{"command", "calabi"},
                  {"tolerances", {{"newton", -1.0}}}};
  CHECK_THROWS_AS(JobConfig::from_json(bad_tol), std::invalid_argument);
  json unknown = {{"command", "frobnicate"}};
  CHECK_THROWS_AS(run(JobConfig::from_json(unknown)), std::invalid_argument);
}

TEST_CASE("quotient command reports the terminal example") {
  const std::string dir = "test_out/quotient";
  std::filesystem::remove_all(dir);
  const RunReport rep = run(small_quotient_config(dir));
  CHECK(rep.all_pass());
  CHECK(rep.results.at("is_terminal").get<bool>());
  CHECK(rep.results.at("acts_freely").get<bool>());
  CHECK(std::filesystem::exists(dir + "/quotient_report.json"));
}

TEST_CASE("reports are byte deterministic") {
  // identical configs: run twice into the same directory and compare the
  // bytes captured between the runs
  const std::string dir = "test_out/det";
  std::filesystem::remove_all(dir);

  JobConfig cfg;
  cfg.command = "identities";
  cfg.parameters = {{"m_values", {2, 3}}, {"samples", 64}};
  cfg.output.directory = dir;
  run(cfg);
  const std::string first = slurp(dir + "/identities_report.json");
  run(cfg);
  CHECK(first == slurp(dir + "/identities_report.json"));
}

TEST_CASE("identity sweeps pass at the pinned tolerance") {
  JobConfig cfg;
  cfg.command = "identities";
  cfg.parameters = {{"m_values", {2, 3}}, {"samples", 128}};
  cfg.output.directory = "test_out/identities";
  cfg.output.formats = {"json"};
  const RunReport rep = run(cfg);
  CHECK(rep.all_pass());
}

TEST_CASE("norms command emits the profile schema") {
  JobConfig cfg;
  cfg.command = "norms";
  cfg.parameters = {{"f", {{"name", "inverse_quadratic_power"},
                           {"param", 2.0}}},
                    {"beta", -2.0},
                    {"k", 1}};
  cfg.grid.n_points = 400;
  cfg.output.directory = "test_out/norms";
  const RunReport rep = run(cfg);
  CHECK(rep.all_pass());
  CHECK(rep.results.at("ck_norm").get<double>() > 0.0);
  const std::string csv = slurp("test_out/norms/norms_profile.csv");
  CHECK(csv.rfind("r,f,f_prime,f_second", 0) == 0);
}

TEST_CASE("poisson command emits the case-b profile schema") {
  JobConfig cfg;
  cfg.command = "poisson";
  cfg.parameters = {{"n", 4},
                    {"f", {{"name", "harmonic_radius_laplacian"},
                           {"param", 4.0}}}};
  cfg.grid = {1e-4, 1e8, 1200};
  cfg.output.directory = "test_out/poisson";
  const RunReport rep = run(cfg);
  CHECK(rep.all_pass());
  CHECK(rep.results.at("case").get<std::string>() == "b");
  const std::string csv = slurp("test_out/poisson/poisson_profile.csv");
  CHECK(csv.rfind("r,u,A_rho_pow,v", 0) == 0);
}

TEST_CASE("calabi command passes its checks and emits the schema") {
  JobConfig cfg;
  cfg.command = "calabi";
  cfg.parameters = {{"m", 2}};
  cfg.grid.n_points = 2000;
  cfg.output.directory = "test_out/calabi";
  const RunReport rep = run(cfg);
  CHECK(rep.all_pass());
  const std::string csv = slurp("test_out/calabi/calabi_profile.csv");
  CHECK(csv.rfind("r,phi,phi_prime,eig_radial,eig_transverse", 0) == 0);
}

TEST_CASE("batch execution isolates jobs") {
  std::filesystem::remove_all("test_out/batch");
  json batch = {{"jobs",
                 {small_quotient_config("").to_json(),
                  small_quotient_config("").to_json()}}};
  const auto reports = run_batch(batch, 2, "test_out/batch");
  CHECK(reports.size() == 2);
  CHECK(reports[0].all_pass());
  CHECK(reports[1].all_pass());
  CHECK(std::filesystem::exists("test_out/batch/job_0/quotient_report.json"));
  CHECK(std::filesystem::exists("test_out/batch/job_1/quotient_report.json"));
}
