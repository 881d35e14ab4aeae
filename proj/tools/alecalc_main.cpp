#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ale/acceptance.hpp"
#include "ale/reports.hpp"

namespace {

using ale::cli::JobConfig;
using ale::cli::RunReport;
using nlohmann::json;

int report_outcome(const RunReport& rep) {
  for (const auto& c : rep.checks)
    std::printf("%-4s %-48s computed=%.12g target=%.12g\n",
                c.pass ? "ok" : "FAIL", c.name.c_str(), c.computed, c.target);
  std::printf("%s: %s (%.2fs)\n", rep.config_echo.command.c_str(),
              rep.all_pass() ? "all checks passed" : "CHECKS FAILED",
              rep.wall_time_seconds);
  return rep.all_pass() ? 0 : 1;
}

int run_acceptance(const std::string& out_dir) {
  const auto criteria = ale::run_acceptance_suite();
  bool all = true;
  for (const auto& c : criteria) {
    std::printf("%-4s criterion %2d: %s\n", c.pass ? "PASS" : "FAIL", c.index,
                c.name.c_str());
    all = all && c.pass;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir + "/acceptance_summary.json");
  out << ale::acceptance_summary_json(criteria).dump(2) << "\n";
  std::printf("summary written to %s/acceptance_summary.json\n",
              out_dir.c_str());
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial ALE Kahler metric toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir;
  int jobs = 1;
  bool check = false;
  app.add_option("--config", config_path, "job config or batch JSON file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--jobs", jobs, "parallel workers for batch files");
  app.add_flag("--check", check, "run the verification suite");

  // direct subcommands mirroring the config commands
  int m = 2, n = 4, k = 2, group_order = 1, steps = 8, n_points = 2000;
  double R = 10.0, beta = 0.0, class_constant = 0.0, f_param = 0.0;
  double t_min = 1e-4, t_max = 1e8;
  std::string f_name = "inverse_quadratic_power";
  std::vector<int> exponents;

  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--t-min", t_min, "inner squared radius");
    sub->add_option("--t-max", t_max, "outer squared radius");
    sub->add_option("--n-points", n_points, "grid nodes");
  };

  // global flags may follow a subcommand
  app.fallthrough();

  CLI::App* calabi = app.add_subcommand("calabi", "explicit metric checks");
  calabi->fallthrough();
  calabi->add_option("--m", m, "complex dimension");
  add_grid(calabi);

  CLI::App* poisson = app.add_subcommand("poisson", "radial Poisson solve");
  poisson->fallthrough();
  poisson->add_option("--n", n, "real dimension");
  poisson->add_option("--group-order", group_order, "|G|");
  poisson->add_option("--f", f_name, "registry right-hand side");
  poisson->add_option("--f-param", f_param, "registry parameter");
  poisson->add_option("--beta", beta, "decay weight of f");
  add_grid(poisson);

  CLI::App* ma = app.add_subcommand("ma-solve", "radial Monge-Ampere solve");
  ma->fallthrough();
  ma->add_option("--m", m, "complex dimension");
  ma->add_option("--f", f_name, "registry right-hand side");
  ma->add_option("--f-param", f_param, "registry parameter");
  ma->add_option("--beta", beta, "decay weight of f");
  ma->add_option("--class-constant", class_constant, "class constant");
  ma->add_option("--steps", steps, "homotopy increments");
  ma->add_option("--group-order", group_order, "|G|");
  add_grid(ma);

  CLI::App* pipe = app.add_subcommand("pipeline",
                                      "flatten, extract, resolve");
  pipe->fallthrough();
  pipe->add_option("--m", m, "complex dimension");
  pipe->add_option("--R", R, "flattening radius");
  pipe->add_option("--steps", steps, "homotopy increments");
  add_grid(pipe);

  CLI::App* quot = app.add_subcommand("quotient", "cyclic action tests");
  quot->fallthrough();
  quot->add_option("--m", m, "complex dimension");
  quot->add_option("--k", k, "group order");
  quot->add_option("--exponents", exponents, "generator exponents")
      ->expected(-1);

  CLI::App* ident = app.add_subcommand("identities",
                                       "pointwise identity sweeps");
  ident->fallthrough();
  CLI::App* norms = app.add_subcommand("norms", "weighted norm report");
  norms->fallthrough();
  norms->add_option("--f", f_name, "registry function");
  norms->add_option("--f-param", f_param, "registry parameter");
  norms->add_option("--beta", beta, "weight");
  norms->add_option("--k", k, "derivative order");
  add_grid(norms);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check) {
      return run_acceptance(out_dir.empty() ? "out" : out_dir);
    }

    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::fprintf(stderr, "cannot open %s\n", config_path.c_str());
        return 2;
      }
      json j = json::parse(in);
      if (j.contains("jobs")) {
        const auto reports = ale::cli::run_batch(j, jobs, out_dir);
        int rc = 0;
        for (const auto& rep : reports) rc |= report_outcome(rep);
        return rc;
      }
      JobConfig cfg = JobConfig::from_json(j);
      if (!out_dir.empty()) cfg.output.directory = out_dir;
      return report_outcome(ale::cli::run(cfg));
    }

    JobConfig cfg;
    cfg.grid.t_min = t_min;
    cfg.grid.t_max = t_max;
    cfg.grid.n_points = n_points;
    if (!out_dir.empty()) cfg.output.directory = out_dir;

    if (calabi->parsed()) {
      cfg.command = "calabi";
      cfg.parameters = {{"m", m}};
    } else if (poisson->parsed()) {
      cfg.command = "poisson";
      cfg.parameters = {{"n", n},
                        {"group_order", group_order},
                        {"f", {{"name", f_name}, {"param", f_param}}}};
      if (poisson->count("--beta")) cfg.parameters["beta"] = beta;
    } else if (ma->parsed()) {
      cfg.command = "ma-solve";
      cfg.parameters = {{"m", m},
                        {"class_constant", class_constant},
                        {"steps", steps},
                        {"group_order", group_order},
                        {"f", {{"name", f_name}, {"param", f_param}}}};
      if (ma->count("--beta")) cfg.parameters["beta"] = beta;
    } else if (pipe->parsed()) {
      cfg.command = "pipeline";
      cfg.parameters = {{"m", m}, {"R", R}, {"steps", steps}};
    } else if (quot->parsed()) {
      cfg.command = "quotient";
      cfg.parameters = {{"m", m}, {"k", k}, {"exponents", exponents}};
    } else if (ident->parsed()) {
      cfg.command = "identities";
      cfg.parameters = json::object();
    } else if (norms->parsed()) {
      cfg.command = "norms";
      cfg.parameters = {{"f", {{"name", f_name}, {"param", f_param}}},
                        {"beta", beta},
                        {"k", k}};
    } else {
      std::cout << app.help() << std::endl;
      return 0;
    }
    return report_outcome(ale::cli::run(cfg));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
