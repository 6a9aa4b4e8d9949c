#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sskdyn/config.hpp"
#include "sskdyn/errors.hpp"

namespace {

using nlohmann::json;

// Assembles the effective document: defaults, overridden by the config file,
// overridden by explicit flags.
json merged_document(const std::string& command, const std::string& config_path,
                     const json& flag_params, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& out,
                     const std::optional<long long>& workers) {
  json doc = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw sskdyn::io_error("cannot open config file '" + config_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
      throw sskdyn::config_error(std::string("config file: ") + e.what());
    }
    if (!doc.is_object()) throw sskdyn::config_error("config file: top level must be an object");
    if (doc.contains("command") && doc["command"] != command)
      throw sskdyn::config_error("config file names command '" +
                                 doc["command"].get<std::string>() +
                                 "' but the command line says '" + command + "'");
  }
  doc["command"] = command;
  if (!doc.contains("parameters") || !doc["parameters"].is_object())
    doc["parameters"] = json::object();
  for (auto it = flag_params.begin(); it != flag_params.end(); ++it)
    doc["parameters"][it.key()] = it.value();
  if (seed) doc["seed"] = *seed;
  if (out) doc["output_path"] = *out;
  if (workers) doc["workers"] = *workers;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sskdyn: spherical SK dynamics laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<long long> workers;
  app.add_option("--config", config_path, "JSON experiment description")
      ->expected(1);
  app.add_option("--seed", seed, "base seed for every derived stream");
  app.add_option("--out", out, "output artifact path");
  app.add_option("--workers", workers, "worker threads (0 = auto)");

  json flag_params = json::object();
  auto opt_num = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                     const std::string& help) {
    cmd->add_option_function<double>(
        flag, [&flag_params, key](const double& v) { flag_params[key] = v; }, help);
  };
  auto opt_int = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                     const std::string& help) {
    cmd->add_option_function<long long>(
        flag, [&flag_params, key](const long long& v) { flag_params[key] = v; }, help);
  };
  auto opt_str = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                     const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&flag_params, key](const std::string& v) { flag_params[key] = v; }, help);
  };

  CLI::App* sample = app.add_subcommand("sample", "draw a coupling matrix, write WIGM");
  opt_int(sample, "--N", "N", "matrix dimension");
  opt_str(sample, "--law", "law", "entry law");
  opt_num(sample, "--diagonal-variance", "diagonal_variance", "variance of diagonal entries");
  sample->add_flag_function(
      "--csv", [&flag_params](std::int64_t) { flag_params["csv"] = true; },
      "also write the entries as CSV (N <= 100)");

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of a drawn or loaded matrix");
  opt_int(spectrum, "--N", "N", "matrix dimension");
  opt_str(spectrum, "--law", "law", "entry law");
  opt_num(spectrum, "--diagonal-variance", "diagonal_variance", "variance of diagonal entries");
  opt_str(spectrum, "--input", "input", "WIGM file to load instead of sampling");
  opt_str(spectrum, "--vectors-out", "vectors_out", "write eigenvectors as WIGM here");
  opt_int(spectrum, "--gap-trials", "gap_trials", "edge-gap resamples (0 = off)");
  opt_str(spectrum, "--gap-edge", "gap_edge", "bottom, top, or abs-top");

  CLI::App* specialfn = app.add_subcommand("specialfn", "tabulate the kernel functions");
  opt_num(specialfn, "--tmin", "tmin", "left end of the grid");
  opt_num(specialfn, "--tmax", "tmax", "right end of the grid");
  opt_int(specialfn, "--steps", "steps", "number of grid points");

  CLI::App* chsck = app.add_subcommand("chsck", "two-point correlation solver");
  opt_num(chsck, "--c", "c", "interaction strength");
  opt_num(chsck, "--beta", "beta", "inverse temperature");
  opt_num(chsck, "--T", "T", "horizon");
  opt_num(chsck, "--dt", "dt", "step size");

  CLI::App* limits = app.add_subcommand("limits", "stationary values across beta");
  opt_num(limits, "--c", "c", "interaction strength");
  opt_num(limits, "--beta-min", "beta_min", "first beta");
  opt_num(limits, "--beta-max", "beta_max", "last beta");
  opt_num(limits, "--beta-step", "beta_step", "beta increment");

  CLI::App* langevin = app.add_subcommand("langevin", "thermal trajectory ensemble");
  opt_int(langevin, "--N", "N", "coordinates");
  opt_num(langevin, "--beta", "beta", "inverse temperature");
  opt_num(langevin, "--c", "c", "interaction strength");
  opt_num(langevin, "--dt", "dt", "step size");
  opt_num(langevin, "--T", "T", "horizon");
  opt_int(langevin, "--runs", "runs", "independent trajectories");
  opt_str(langevin, "--mode", "mode", "diagonal or full");
  opt_str(langevin, "--initial-law", "initial_law", "gaussian-std or rademacher");

  CLI::App* hit = app.add_subcommand("hit", "hitting-time records at one dimension");
  opt_int(hit, "--N", "N", "matrix dimension");
  opt_int(hit, "--trials", "trials", "independent draws");
  opt_num(hit, "--epsilon", "epsilon", "target overlap");
  opt_str(hit, "--algorithm", "algorithm", "gd or power");
  opt_int(hit, "--level", "level", "envelope level");

  CLI::App* scaling = app.add_subcommand("scaling", "median hitting time against dimension");
  scaling->add_option_function<std::vector<long long>>(
      "--Ns",
      [&flag_params](const std::vector<long long>& v) { flag_params["Ns"] = v; },
      "dimension list");
  opt_int(scaling, "--trials", "trials", "trials per dimension");
  opt_num(scaling, "--epsilon", "epsilon", "target overlap");
  opt_str(scaling, "--algorithm", "algorithm", "gd or power");

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const json doc = merged_document(command, config_path, flag_params, seed, out, workers);
    const sskdyn::ExperimentConfig cfg = sskdyn::parse_config(doc.dump());
    return sskdyn::run_experiment(cfg);
  } catch (const sskdyn::not_hit_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const sskdyn::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 6;
  } catch (const sskdyn::config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const sskdyn::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const sskdyn::numerical_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
