#include <string>

#include "doctest.h"
#include "sskdyn/config.hpp"
#include "sskdyn/errors.hpp"

using namespace sskdyn;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults are materialized per command") {
  const ExperimentConfig chsck = parse_config(R"({"command": "chsck"})");
  CHECK(chsck.command == "chsck");
  CHECK(chsck.output_path == "chsck.csv");
  CHECK(chsck.seed == 0);
  CHECK(chsck.workers == 0);
  CHECK(chsck.parameters.at("c").get<double>() == 1.0);
  CHECK(chsck.parameters.at("beta").get<double>() == 0.5);
  CHECK(chsck.parameters.at("T").get<double>() == 10.0);
  CHECK(chsck.parameters.at("dt").get<double>() == 1e-3);
  CHECK(chsck.parameters.at("K0").get<double>() == 1.0);

  const ExperimentConfig sample = parse_config(R"({"command": "sample"})");
  CHECK(sample.output_path == "sample.wigm");
  CHECK(sample.parameters.at("N").get<long long>() == 500);
  CHECK(sample.parameters.at("law").get<std::string>() == "gaussian-orthogonal");
  CHECK(sample.parameters.at("diagonal_variance").get<double>() == 2.0);
  CHECK(sample.parameters.at("csv").get<bool>() == false);

  const ExperimentConfig scaling = parse_config(R"({"command": "scaling"})");
  CHECK(scaling.parameters.at("Ns").get<std::vector<long long>>() ==
        std::vector<long long>{250, 500, 1000, 2000});
  CHECK(scaling.parameters.at("trials").get<long long>() == 20);
  CHECK(scaling.parameters.at("algorithm").get<std::string>() == "gd");
}

TEST_CASE("law default drives the diagonal variance") {
  const auto cfg = parse_config(R"({"command": "sample", "parameters": {"law": "rademacher"}})");
  CHECK(cfg.parameters.at("diagonal_variance").get<double>() == 1.0);
  const auto wide = parse_config(
      R"({"command": "sample", "parameters": {"law": "rademacher", "diagonal_variance": 3.5}})");
  CHECK(wide.parameters.at("diagonal_variance").get<double>() == 3.5);
  CHECK(message_of(R"({"command": "sample", "parameters": {"diagonal_variance": -1.0}})")
            .find("parameters.diagonal_variance: must be positive") != std::string::npos);
}

TEST_CASE("every violation is reported in one pass") {
  const std::string msg = message_of(
      R"({"command": "chsck", "workers": 9999,
          "parameters": {"c": -1, "beta": -2, "T": 100, "dt": 50, "K0": 3}})");
  CHECK(msg.find("parameters.c: must be positive") != std::string::npos);
  CHECK(msg.find("parameters.beta: must be positive") != std::string::npos);
  CHECK(msg.find("parameters.dt: must not exceed T/100") != std::string::npos);
  CHECK(msg.find("parameters.K0: is fixed to 1") != std::string::npos);
  CHECK(msg.find("workers: must lie in [0, 4096]") != std::string::npos);
}

TEST_CASE("unknown fields are rejected at both levels") {
  CHECK(message_of(R"({"command": "limits", "extra": 1})").find("extra: unknown field") !=
        std::string::npos);
  CHECK(message_of(R"({"command": "limits", "parameters": {"bogus": 1}})")
            .find("parameters.bogus: unknown field") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column") {
  const std::string msg = message_of("{\n  \"command\": \"chsck\",\n  bad\n}");
  CHECK(msg.find("parse error at line 3") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("top-level shape errors") {
  CHECK(message_of("[1, 2]").find("top level must be a JSON object") != std::string::npos);
  CHECK(message_of(R"({"command": "chsck", "parameters": 5})")
            .find("parameters: must be an object") != std::string::npos);
  CHECK(message_of(R"({"command": "warp"})").find("command: must be one of") !=
        std::string::npos);
  CHECK(message_of(R"({"seed": 1})").find("command: must be one of") != std::string::npos);
  CHECK(message_of(R"({"command": "chsck", "seed": -4})")
            .find("seed: must be a non-negative integer") != std::string::npos);
  CHECK(message_of(R"({"command": "chsck", "output_path": ""})")
            .find("output_path: must be non-empty") != std::string::npos);
}

TEST_CASE("large seeds and integral floats are accepted") {
  const auto cfg = parse_config(R"({"command": "chsck", "seed": 18446744073709551615})");
  CHECK(cfg.seed == 18446744073709551615ULL);
  const auto n = parse_config(R"({"command": "sample", "parameters": {"N": 500.0}})");
  CHECK(n.parameters.at("N").get<long long>() == 500);
  CHECK(message_of(R"({"command": "sample", "parameters": {"N": 500.5}})")
            .find("parameters.N: must be an integer") != std::string::npos);
}

TEST_CASE("per-command range spot checks") {
  CHECK(message_of(R"({"command": "sample", "parameters": {"N": 0}})")
            .find("parameters.N: must be at least 1") != std::string::npos);
  CHECK(message_of(R"({"command": "sample", "parameters": {"N": 20000}})")
            .find("parameters.N: must be at most 16384") != std::string::npos);
  CHECK(message_of(R"({"command": "sample", "parameters": {"N": 200, "csv": true}})")
            .find("parameters.csv: CSV mirror is limited to N <= 100") != std::string::npos);
  CHECK(message_of(R"({"command": "spectrum", "parameters": {"gap_edge": "left"}})")
            .find("parameters.gap_edge: must be one of") != std::string::npos);
  CHECK(message_of(R"({"command": "specialfn", "parameters": {"tmin": 5, "tmax": 2}})")
            .find("parameters.tmax: must exceed tmin") != std::string::npos);
  CHECK(message_of(R"({"command": "specialfn", "parameters": {"tmax": 400}})")
            .find("parameters.tmax: must be at most 300") != std::string::npos);
  CHECK(message_of(R"({"command": "langevin", "parameters": {"dt": 0.02}})")
            .find("parameters.dt: must not exceed 1e-2") != std::string::npos);
  CHECK(message_of(R"({"command": "hit", "parameters": {"N": 4, "level": 9}})")
            .find("parameters.level: must not exceed N") != std::string::npos);
  CHECK(message_of(R"({"command": "hit", "parameters": {"epsilon": 1.0}})")
            .find("parameters.epsilon: must lie in (0, 1)") != std::string::npos);
  CHECK(message_of(R"({"command": "scaling", "parameters": {"Ns": [300, 300]}})")
            .find("parameters.Ns: a fit needs at least two distinct dimensions") !=
        std::string::npos);
  CHECK(message_of(R"({"command": "scaling", "parameters": {"Ns": [64, 300]}})")
            .find("parameters.Ns: every dimension must be at least 100") != std::string::npos);
  CHECK(message_of(R"({"command": "scaling", "parameters": {"Ns": "300"}})")
            .find("parameters.Ns: must be an array of integers") != std::string::npos);
  CHECK(message_of(R"({"command": "scaling", "parameters": {"trials": 5}})")
            .find("parameters.trials: must be at least 10") != std::string::npos);
  CHECK(message_of(R"({"command": "limits", "parameters": {"beta_min": 0.5, "beta_max": 0.1}})")
            .find("parameters.beta_max: must be at least beta_min") != std::string::npos);
}

TEST_CASE("serialization is a fixed point on normalized configs") {
  const std::string raw =
      R"({"command": "langevin", "seed": 42, "parameters": {"N": 64, "mode": "full"}})";
  const ExperimentConfig cfg = parse_config(raw);
  CHECK(cfg.parameters.at("mode").get<std::string>() == "full");
  const std::string once = serialize_config(cfg);
  const std::string twice = serialize_config(parse_config(once));
  CHECK(once == twice);
  // normalization filled the remaining langevin fields
  CHECK(once.find("\"initial_law\"") != std::string::npos);
  CHECK(once.find("\"runs\"") != std::string::npos);
}
