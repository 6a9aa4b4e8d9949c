#include "sskdyn/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "sskdyn/errors.hpp"

namespace sskdyn {

namespace {

using nlohmann::json;

struct LineCol {
  std::size_t line = 1, column = 1;
};

LineCol locate(const std::string& text, std::size_t byte) {
  LineCol at;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++at.line;
      at.column = 1;
    } else {
      ++at.column;
    }
  }
  return at;
}

// Collects every violation before failing, each tagged with its field path.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

  void fail(const std::string& key, const std::string& msg) {
    errors_.push_back(prefix_ + key + ": " + msg);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  double number(const std::string& key, double dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (!v.is_number()) {
      fail(key, "must be a number");
      return dflt;
    }
    return v.get<double>();
  }

  long long integer(const std::string& key, long long dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    fail(key, "must be an integer");
    return dflt;
  }

  std::uint64_t uinteger(const std::string& key, std::uint64_t dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
      return static_cast<std::uint64_t>(v.get<long long>());
    fail(key, "must be a non-negative integer");
    return dflt;
  }

  bool boolean(const std::string& key, bool dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) {
      fail(key, "must be a boolean");
      return dflt;
    }
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (!v.is_string()) {
      fail(key, "must be a string");
      return dflt;
    }
    return v.get<std::string>();
  }

  std::string choice(const std::string& key, const std::string& dflt,
                     const std::vector<std::string>& allowed) {
    const std::string v = text(key, dflt);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string msg = "must be one of {";
      for (std::size_t i = 0; i < allowed.size(); ++i)
        msg += (i ? ", " : "") + allowed[i];
      msg += "}";
      fail(key, msg);
      return dflt;
    }
    return v;
  }

  std::vector<long long> int_array(const std::string& key,
                                   const std::vector<long long>& dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (!v.is_array()) {
      fail(key, "must be an array of integers");
      return dflt;
    }
    std::vector<long long> out;
    for (const auto& e : v) {
      if (e.is_number_integer() || e.is_number_unsigned()) {
        out.push_back(e.get<long long>());
      } else {
        fail(key, "must be an array of integers");
        return dflt;
      }
    }
    return out;
  }

  void reject_unknown() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) errors_.push_back(prefix_ + it.key() + ": unknown field");
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

const json empty_object = json::object();

json validate_parameters(const std::string& command, const json& raw,
                         std::vector<std::string>& errors) {
  FieldReader rd(raw, "parameters.", errors);
  json out = json::object();

  auto check_matrix_dim = [&](long long n, const char* key) {
    if (n < 1) rd.fail(key, "must be at least 1");
    if (n > 16384) rd.fail(key, "must be at most 16384");
  };

  if (command == "sample" || command == "spectrum") {
    const long long N = rd.integer("N", 500);
    check_matrix_dim(N, "N");
    const std::string law =
        rd.choice("law", "gaussian-orthogonal",
                  {"gaussian-orthogonal", "gaussian-unit-diag", "rademacher", "uniform-sym"});
    double dv = rd.number("diagonal_variance", -1.0);
    if (rd.has("diagonal_variance") && !(dv > 0.0))
      rd.fail("diagonal_variance", "must be positive");
    if (dv < 0.0) dv = (law == "gaussian-orthogonal") ? 2.0 : 1.0;
    out["N"] = N;
    out["law"] = law;
    out["diagonal_variance"] = dv;
    if (command == "sample") {
      const bool csv = rd.boolean("csv", false);
      if (csv && N > 100) rd.fail("csv", "CSV mirror is limited to N <= 100");
      out["csv"] = csv;
    } else {
      out["input"] = rd.text("input", "");
      out["vectors_out"] = rd.text("vectors_out", "");
      const long long gap_trials = rd.integer("gap_trials", 0);
      if (gap_trials < 0) rd.fail("gap_trials", "must be non-negative");
      if (gap_trials > 100000) rd.fail("gap_trials", "must be at most 100000");
      out["gap_trials"] = gap_trials;
      out["gap_edge"] = rd.choice("gap_edge", "bottom", {"bottom", "top", "abs-top"});
    }
  } else if (command == "specialfn") {
    const double tmin = rd.number("tmin", 0.0);
    const double tmax = rd.number("tmax", 10.0);
    const long long steps = rd.integer("steps", 101);
    if (!(tmin >= 0.0)) rd.fail("tmin", "must be non-negative");
    if (!(tmax > tmin)) rd.fail("tmax", "must exceed tmin");
    if (!(tmax <= 300.0)) rd.fail("tmax", "must be at most 300");
    if (steps < 2) rd.fail("steps", "must be at least 2");
    if (steps > 10000000) rd.fail("steps", "must be at most 10000000");
    out["tmin"] = tmin;
    out["tmax"] = tmax;
    out["steps"] = steps;
  } else if (command == "chsck") {
    const double c = rd.number("c", 1.0);
    const double beta = rd.number("beta", 0.5);
    const double T = rd.number("T", 10.0);
    const double dt = rd.number("dt", 1e-3);
    const double K0 = rd.number("K0", 1.0);
    if (!(c > 0.0)) rd.fail("c", "must be positive");
    if (!(c <= 100.0)) rd.fail("c", "must be at most 100");
    if (!(beta > 0.0)) rd.fail("beta", "must be positive");
    if (!(beta <= 1000.0)) rd.fail("beta", "must be at most 1000");
    if (!(T > 0.0)) rd.fail("T", "must be positive");
    if (!(T <= 200.0)) rd.fail("T", "must be at most 200");
    if (!(dt > 0.0)) rd.fail("dt", "must be positive");
    if (!(dt >= 1e-7)) rd.fail("dt", "must be at least 1e-7");
    if (dt > 0.0 && T > 0.0 && dt > T / 100.0) rd.fail("dt", "must not exceed T/100");
    if (K0 != 1.0) rd.fail("K0", "is fixed to 1");
    out["c"] = c;
    out["beta"] = beta;
    out["T"] = T;
    out["dt"] = dt;
    out["K0"] = K0;
  } else if (command == "limits") {
    const double c = rd.number("c", 1.0);
    const double beta_min = rd.number("beta_min", 0.05);
    const double beta_max = rd.number("beta_max", 0.6);
    const double beta_step = rd.number("beta_step", 0.05);
    if (!(c > 0.0)) rd.fail("c", "must be positive");
    if (!(beta_min > 0.0)) rd.fail("beta_min", "must be positive");
    if (!(beta_max >= beta_min)) rd.fail("beta_max", "must be at least beta_min");
    if (!(beta_step > 0.0)) rd.fail("beta_step", "must be positive");
    out["c"] = c;
    out["beta_min"] = beta_min;
    out["beta_max"] = beta_max;
    out["beta_step"] = beta_step;
  } else if (command == "langevin") {
    const long long N = rd.integer("N", 1000);
    check_matrix_dim(N, "N");
    const double beta = rd.number("beta", 0.5);
    const double c = rd.number("c", 1.0);
    const double dt = rd.number("dt", 1e-3);
    const double T = rd.number("T", 5.0);
    const long long runs = rd.integer("runs", 8);
    if (!(beta > 0.0)) rd.fail("beta", "must be positive");
    if (!(c > 0.0)) rd.fail("c", "must be positive");
    if (!(dt > 0.0)) rd.fail("dt", "must be positive");
    if (dt > 1e-2) rd.fail("dt", "must not exceed 1e-2");
    if (!(T > 0.0)) rd.fail("T", "must be positive");
    if (dt > 0.0 && T > 0.0 && std::llround(T / dt) < 1) rd.fail("T", "must cover at least one step");
    if (runs < 1) rd.fail("runs", "must be at least 1");
    if (runs > 4096) rd.fail("runs", "must be at most 4096");
    out["N"] = N;
    out["beta"] = beta;
    out["c"] = c;
    out["dt"] = dt;
    out["T"] = T;
    out["runs"] = runs;
    out["mode"] = rd.choice("mode", "diagonal", {"diagonal", "full"});
    out["initial_law"] = rd.choice("initial_law", "gaussian-std", {"gaussian-std", "rademacher"});
  } else if (command == "hit") {
    const long long N = rd.integer("N", 200);
    if (N < 2) rd.fail("N", "must be at least 2");
    if (N > 16384) rd.fail("N", "must be at most 16384");
    const long long trials = rd.integer("trials", 20);
    if (trials < 1) rd.fail("trials", "must be at least 1");
    if (trials > 100000) rd.fail("trials", "must be at most 100000");
    const double epsilon = rd.number("epsilon", 0.5);
    if (!(epsilon > 0.0 && epsilon < 1.0)) rd.fail("epsilon", "must lie in (0, 1)");
    const long long level = rd.integer("level", 5);
    if (level < 2) rd.fail("level", "must be at least 2");
    if (level > N) rd.fail("level", "must not exceed N");
    out["N"] = N;
    out["trials"] = trials;
    out["epsilon"] = epsilon;
    out["level"] = level;
    out["algorithm"] = rd.choice("algorithm", "gd", {"gd", "power"});
  } else if (command == "scaling") {
    std::vector<long long> ns = rd.int_array("Ns", {250, 500, 1000, 2000});
    if (ns.empty()) rd.fail("Ns", "must be non-empty");
    std::set<long long> distinct(ns.begin(), ns.end());
    for (const long long n : ns) {
      if (n < 100) rd.fail("Ns", "every dimension must be at least 100");
      if (n > 16384) rd.fail("Ns", "every dimension must be at most 16384");
      if (n < 100 || n > 16384) break;
    }
    if (!ns.empty() && distinct.size() < 2)
      rd.fail("Ns", "a fit needs at least two distinct dimensions");
    const long long trials = rd.integer("trials", 20);
    if (trials < 10) rd.fail("trials", "must be at least 10");
    if (trials > 100000) rd.fail("trials", "must be at most 100000");
    const double epsilon = rd.number("epsilon", 0.5);
    if (!(epsilon > 0.0 && epsilon < 1.0)) rd.fail("epsilon", "must lie in (0, 1)");
    out["Ns"] = ns;
    out["trials"] = trials;
    out["epsilon"] = epsilon;
    out["algorithm"] = rd.choice("algorithm", "gd", {"gd", "power"});
  }
  rd.reject_unknown();
  return out;
}

std::string default_output(const std::string& command) {
  if (command == "sample") return "sample.wigm";
  return command + ".csv";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const LineCol at = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    throw config_error("parse error at line " + std::to_string(at.line) + ", column " +
                       std::to_string(at.column) + ": " + e.what());
  }
  if (!doc.is_object()) throw config_error("config: top level must be a JSON object");

  std::vector<std::string> errors;
  FieldReader rd(doc, "", errors);
  const std::string command =
      rd.choice("command", "",
                {"sample", "spectrum", "specialfn", "chsck", "limits", "langevin", "hit",
                 "scaling"});
  ExperimentConfig cfg;
  cfg.command = command;
  cfg.seed = rd.uinteger("seed", 0);
  const long long workers = rd.integer("workers", 0);
  if (workers < 0 || workers > 4096) rd.fail("workers", "must lie in [0, 4096]");
  cfg.workers = static_cast<int>(std::clamp<long long>(workers, 0, 4096));
  cfg.output_path = rd.text("output_path", command.empty() ? "" : default_output(command));
  if (cfg.output_path.empty() && !command.empty())
    rd.fail("output_path", "must be non-empty");

  const json& params = [&]() -> const json& {
    if (!rd.has("parameters")) return empty_object;
    if (!doc.at("parameters").is_object()) {
      rd.fail("parameters", "must be an object");
      return empty_object;
    }
    return doc.at("parameters");
  }();
  if (!command.empty()) cfg.parameters = validate_parameters(command, params, errors);
  rd.reject_unknown();

  if (!errors.empty()) {
    std::string msg = "config: ";
    for (std::size_t i = 0; i < errors.size(); ++i) msg += (i ? "; " : "") + errors[i];
    throw config_error(msg);
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& config) {
  json doc;
  doc["command"] = config.command;
  doc["output_path"] = config.output_path;
  doc["parameters"] = config.parameters;
  doc["seed"] = config.seed;
  doc["workers"] = config.workers;
  return doc.dump(2) + "\n";
}

}  // namespace sskdyn
