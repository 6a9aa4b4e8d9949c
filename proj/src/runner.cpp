#include <cstdio>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sskdyn/chsck.hpp"
#include "sskdyn/config.hpp"
#include "sskdyn/csv.hpp"
#include "sskdyn/ensembles.hpp"
#include "sskdyn/errors.hpp"
#include "sskdyn/hitting.hpp"
#include "sskdyn/langevin.hpp"
#include "sskdyn/parallel.hpp"
#include "sskdyn/rng.hpp"
#include "sskdyn/special_functions.hpp"
#include "sskdyn/spectral.hpp"

namespace sskdyn {

namespace {

using nlohmann::json;

std::string stem_of(const std::string& path) {
  const std::size_t dot = path.rfind('.');
  const std::size_t slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

void emit(const json& line) { std::printf("%s\n", line.dump().c_str()); }

WignerSpec wigner_from(const json& p, std::uint64_t seed) {
  WignerSpec spec;
  spec.N = p.at("N").get<Eigen::Index>();
  spec.entry_law = entry_law_from_string(p.at("law").get<std::string>());
  spec.diagonal_variance = p.at("diagonal_variance").get<double>();
  spec.seed = seed;
  return spec;
}

int run_sample(const ExperimentConfig& cfg) {
  const WignerSpec spec = wigner_from(cfg.parameters, cfg.seed);
  const Eigen::MatrixXd J = sample_wigner(spec);
  write_wigm(cfg.output_path, J);
  if (cfg.parameters.at("csv").get<bool>()) {
    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < spec.N; ++j) header.push_back("c" + std::to_string(j));
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(spec.N));
    for (Eigen::Index i = 0; i < spec.N; ++i) {
      rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(spec.N));
      for (Eigen::Index j = 0; j < spec.N; ++j)
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = J(i, j);
    }
    write_csv(stem_of(cfg.output_path) + ".csv", header, rows);
  }
  const MomentAudit audit = moment_audit(J, spec);
  emit(json{{"command", "sample"},
            {"N", spec.N},
            {"mean", audit.mean},
            {"variance", audit.variance},
            {"fourth_moment", audit.fourth_moment},
            {"symmetry_defect", audit.symmetry_defect},
            {"n_entries", audit.n_entries},
            {"output", cfg.output_path}});
  return 0;
}

int run_spectrum(const ExperimentConfig& cfg) {
  const json& p = cfg.parameters;
  const std::string input = p.at("input").get<std::string>();
  Eigen::MatrixXd J;
  if (!input.empty()) {
    J = read_wigm(input);
  } else {
    J = sample_wigner(wigner_from(p, cfg.seed));
  }
  const SpectralData sd = eig_sym(J);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i)
    rows.push_back({static_cast<double>(i), sd.eigenvalues(i)});
  write_csv(cfg.output_path, {"index", "eigenvalue"}, rows);
  const std::string vectors_out = p.at("vectors_out").get<std::string>();
  if (!vectors_out.empty()) write_wigm(vectors_out, sd.eigenvectors);

  json line{{"command", "spectrum"},
            {"N", sd.source_dim},
            {"lambda_min", sd.eigenvalues(0)},
            {"lambda_max", sd.eigenvalues(sd.eigenvalues.size() - 1)},
            {"output", cfg.output_path}};
  const long long gap_trials = p.at("gap_trials").get<long long>();
  if (gap_trials > 0) {
    const GapEdge edge = gap_edge_from_string(p.at("gap_edge").get<std::string>());
    WignerSpec spec = wigner_from(p, cfg.seed);
    const std::vector<double> gaps =
        edge_gap_stats(spec, static_cast<int>(gap_trials), edge, cfg.workers);
    std::vector<std::vector<double>> gap_rows;
    for (std::size_t i = 0; i < gaps.size(); ++i)
      gap_rows.push_back({static_cast<double>(i), gaps[i]});
    const std::string gap_path = stem_of(cfg.output_path) + "_gaps.csv";
    write_csv(gap_path, {"trial", "rescaled_gap"}, gap_rows);
    line["gap_median"] = median(gaps);
    line["gap_output"] = gap_path;
  }
  emit(line);
  return 0;
}

int run_specialfn(const ExperimentConfig& cfg) {
  const json& p = cfg.parameters;
  const double tmin = p.at("tmin").get<double>();
  const double tmax = p.at("tmax").get<double>();
  const long long steps = p.at("steps").get<long long>();
  std::vector<std::vector<double>> rows;
  for (long long k = 0; k < steps; ++k) {
    const double t =
        tmin + (tmax - tmin) * static_cast<double>(k) / static_cast<double>(steps - 1);
    rows.push_back({t, bessel_i(0, t), bessel_i(1, t), bessel_i(2, t), mgf_semicircle(t),
                    dmgf_semicircle(t), charfn_semicircle(t)});
  }
  write_csv(cfg.output_path, {"t", "i0", "i1", "i2", "mgf", "dmgf", "charfn"}, rows);
  emit(json{{"command", "specialfn"}, {"rows", steps}, {"output", cfg.output_path}});
  return 0;
}

int run_chsck(const ExperimentConfig& cfg) {
  const json& p = cfg.parameters;
  ChsckParams params;
  params.c = p.at("c").get<double>();
  params.beta = p.at("beta").get<double>();
  params.T = p.at("T").get<double>();
  params.dt = p.at("dt").get<double>();
  const VolterraSolution sol = solve_volterra(params);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < sol.grid.size(); ++k)
    rows.push_back({sol.grid[k], sol.Kdiag[k], sol.H[k], sol.logRtilde[k]});
  write_csv(cfg.output_path, {"t", "K", "H", "logRtilde"}, rows);
  const AsymptoticConstants ac = asymptotic_constants(params.c, params.beta);
  const LimitValues lim = limit_values(params.c, params.beta);
  emit(json{{"command", "chsck"},
            {"K_final", sol.Kdiag.back()},
            {"H_final", sol.H.back()},
            {"beta_c", ac.beta_c},
            {"s_beta", ac.s_beta},
            {"Psi", ac.Psi},
            {"C_beta", ac.C_beta},
            {"regime", to_string(ac.regime)},
            {"H_inf", lim.H_inf},
            {"HK_ratio_inf", lim.HK_ratio_inf},
            {"output", cfg.output_path}});
  return 0;
}

int run_limits(const ExperimentConfig& cfg) {
  const json& p = cfg.parameters;
  const double c = p.at("c").get<double>();
  const double beta_min = p.at("beta_min").get<double>();
  const double beta_max = p.at("beta_max").get<double>();
  const double beta_step = p.at("beta_step").get<double>();
  std::vector<std::vector<double>> rows;
  for (double beta = beta_min; beta <= beta_max + 1e-12 * beta_step; beta += beta_step) {
    const AsymptoticConstants ac = asymptotic_constants(c, beta);
    const LimitValues lim = limit_values(c, beta);
    rows.push_back({beta, ac.beta_c, ac.s_beta, ac.Psi, ac.C_beta, lim.H_inf,
                    lim.HK_ratio_inf});
  }
  write_csv(cfg.output_path,
            {"beta", "beta_c", "s_beta", "Psi", "C_beta", "H_inf", "HK_ratio_inf"}, rows);
  emit(json{{"command", "limits"}, {"rows", rows.size()}, {"output", cfg.output_path}});
  return 0;
}

int run_langevin(const ExperimentConfig& cfg) {
  const json& p = cfg.parameters;
  LangevinParams params;
  params.N = p.at("N").get<Eigen::Index>();
  params.beta = p.at("beta").get<double>();
  params.c = p.at("c").get<double>();
  params.dt = p.at("dt").get<double>();
  params.T = p.at("T").get<double>();
  params.mode = p.at("mode").get<std::string>() == "full" ? LangevinMode::full
                                                          : LangevinMode::diagonal;
  params.initial.kind = InitialKind::iid;
  params.initial.radius = 1.0;
  params.initial.iid_law = p.at("initial_law").get<std::string>() == "rademacher"
                               ? IidLaw::rademacher
                               : IidLaw::gaussian_std;
  const long long runs = p.at("runs").get<long long>();

  std::vector<TrajectoryStats> stats(static_cast<std::size_t>(runs));
  parallel_for(stats.size(), cfg.workers, [&](std::size_t r) {
    LangevinParams run = params;
    const auto rr = static_cast<std::uint64_t>(r);
    run.initial.seed = rng::key_of(cfg.seed, rr, 1);
    run.seed = rng::key_of(cfg.seed, rr, 2);
    if (run.mode == LangevinMode::diagonal) {
      const Eigen::VectorXd sigmas =
          semicircle_iid_sigmas(run.N, rng::key_of(cfg.seed, rr, 0));
      stats[r] = simulate_diagonal(run, sigmas);
    } else {
      WignerSpec wspec;
      wspec.N = run.N;
      wspec.seed = rng::key_of(cfg.seed, rr, 0);
      stats[r] = simulate_full(sample_wigner(wspec), run);
    }
  });
  const EnsembleMean mean = ensemble_mean(stats);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < mean.grid.size(); ++k)
    rows.push_back({mean.grid[k], mean.K_mean[k], mean.K_se[k], mean.H_mean[k],
                    mean.H_se[k]});
  write_csv(cfg.output_path, {"t", "K_mean", "K_se", "H_mean", "H_se"}, rows);

  std::vector<std::vector<double>> finals;
  for (std::size_t r = 0; r < stats.size(); ++r)
    finals.push_back({static_cast<double>(r), stats[r].K_N.back(), stats[r].H_N.back()});
  write_csv(stem_of(cfg.output_path) + "_runs.csv", {"run", "K_final", "H_final"}, finals);
  emit(json{{"command", "langevin"},
            {"runs", runs},
            {"K_final_mean", mean.K_mean.back()},
            {"H_final_mean", mean.H_mean.back()},
            {"output", cfg.output_path}});
  return 0;
}

std::vector<std::vector<double>> record_rows(const std::vector<HittingRecord>& records,
                                             int trials) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const HittingRecord& r = records[i];
    rows.push_back({static_cast<double>(r.N),
                    static_cast<double>(trials > 0 ? static_cast<int>(i) % trials : 0),
                    r.epsilon, r.T_eps, r.lower_bound, r.upper_bound, r.initial_overlap,
                    r.gap, static_cast<double>(r.seed)});
  }
  return rows;
}

const std::vector<std::string> record_header = {
    "N",     "trial",           "epsilon", "T_eps", "lower_bound",
    "upper", "initial_overlap", "gap",     "seed"};

int run_hit(const ExperimentConfig& cfg) {
  const json& p = cfg.parameters;
  const auto N = p.at("N").get<Eigen::Index>();
  const int trials = p.at("trials").get<int>();
  const double epsilon = p.at("epsilon").get<double>();
  const int level = p.at("level").get<int>();
  const Algorithm algorithm = algorithm_from_string(p.at("algorithm").get<std::string>());

  std::vector<HittingRecord> records(static_cast<std::size_t>(trials));
  parallel_for(records.size(), cfg.workers, [&](std::size_t t) {
    records[t] = hitting_trial(N, static_cast<int>(t), epsilon, algorithm, cfg.seed, level);
  });
  write_csv(cfg.output_path, record_header, record_rows(records, trials));

  std::vector<double> hits;
  long long capped = 0;
  for (const auto& r : records) {
    if (std::isfinite(r.T_eps))
      hits.push_back(r.T_eps);
    else
      ++capped;
  }
  json line{{"command", "hit"},
            {"N", N},
            {"algorithm", to_string(algorithm)},
            {"trials", trials},
            {"cap_failures", capped},
            {"output", cfg.output_path}};
  if (!hits.empty()) line["median_T_eps"] = median(hits);
  emit(line);
  if (capped == trials) {
    const double last = records.empty() ? 0.0 : records.back().initial_overlap;
    throw not_hit_error("hit: every trial exhausted the iteration cap", last, trials);
  }
  return 0;
}

int run_scaling(const ExperimentConfig& cfg) {
  const json& p = cfg.parameters;
  std::vector<Eigen::Index> Ns;
  for (const auto& n : p.at("Ns")) Ns.push_back(n.get<Eigen::Index>());
  const int trials = p.at("trials").get<int>();
  const double epsilon = p.at("epsilon").get<double>();
  const Algorithm algorithm = algorithm_from_string(p.at("algorithm").get<std::string>());

  const ScalingFit fit =
      scaling_experiment(Ns, trials, epsilon, algorithm, cfg.seed, cfg.workers);
  write_csv(cfg.output_path, record_header, record_rows(fit.records, trials));

  json medians = json::array();
  for (std::size_t i = 0; i < fit.Ns.size(); ++i)
    medians.push_back(json{{"N", fit.Ns[i]}, {"median_T_eps", fit.medians[i]}});
  const json summary{{"command", "scaling"},
                     {"algorithm", to_string(algorithm)},
                     {"trials", trials},
                     {"epsilon", epsilon},
                     {"medians", medians},
                     {"slope", fit.slope},
                     {"intercept", fit.intercept},
                     {"r_squared", fit.r_squared},
                     {"cap_failures", fit.cap_failures},
                     {"output", cfg.output_path}};
  const std::string summary_path = stem_of(cfg.output_path) + "_fit.json";
  std::FILE* out = std::fopen(summary_path.c_str(), "w");
  if (!out) throw io_error("scaling: cannot open '" + summary_path + "'");
  std::fprintf(out, "%s\n", summary.dump(2).c_str());
  std::fclose(out);
  emit(summary);
  return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
  if (cfg.command == "sample") return run_sample(cfg);
  if (cfg.command == "spectrum") return run_spectrum(cfg);
  if (cfg.command == "specialfn") return run_specialfn(cfg);
  if (cfg.command == "chsck") return run_chsck(cfg);
  if (cfg.command == "limits") return run_limits(cfg);
  if (cfg.command == "langevin") return run_langevin(cfg);
  if (cfg.command == "hit") return run_hit(cfg);
  if (cfg.command == "scaling") return run_scaling(cfg);
  throw config_error("unknown command '" + cfg.command + "'");
}

}  // namespace sskdyn
