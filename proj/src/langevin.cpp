#include "sskdyn/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sskdyn/errors.hpp"
#include "sskdyn/rng.hpp"
#include "sskdyn/spectral.hpp"

namespace sskdyn {

namespace {

constexpr double blowup_threshold = 1e6;
constexpr std::uint64_t noise_tag = 0x6e6f697365ULL;  // "noise"

}  // namespace

void validate(const LangevinParams& params) {
  std::string problems;
  auto add = [&](const std::string& msg) {
    if (!problems.empty()) problems += "; ";
    problems += msg;
  };
  if (params.N <= 0) add("N must be positive");
  if (!(params.beta > 0.0)) add("beta must be positive");
  if (!(params.c > 0.0)) add("c must be positive");
  if (!(params.dt > 0.0)) add("dt must be positive");
  if (params.dt > 1e-2) add("dt must not exceed 1e-2");
  if (!(params.T > 0.0)) add("T must be positive");
  if (!problems.empty()) throw config_error("langevin params: " + problems);
}

namespace {

template <class Drift, class Energy>
TrajectoryStats march(const LangevinParams& params, const Eigen::VectorXd& y0,
                      Drift&& drift, Energy&& energy) {
  const auto steps = static_cast<Eigen::Index>(std::llround(params.T / params.dt));
  if (steps < 1) throw config_error("langevin params: T/dt must round to at least one step");
  if (y0.size() != params.N)
    throw domain_error("langevin: start vector length does not match N");
  const double noise_sd = params.noise_off ? 0.0 : std::sqrt(params.dt / params.beta);

  TrajectoryStats stats;
  stats.N = params.N;
  stats.seed = params.seed;
  stats.grid.resize(static_cast<std::size_t>(steps) + 1);
  stats.K_N.resize(stats.grid.size());
  stats.H_N.resize(stats.grid.size());

  Eigen::VectorXd y = y0;
  Eigen::VectorXd d(params.N);
  const double inv_n = 1.0 / static_cast<double>(params.N);

  for (Eigen::Index k = 0;; ++k) {
    const double K = y.squaredNorm() * inv_n;
    if (!(K <= blowup_threshold))
      throw blowup_error("langevin: K_N exceeded 1e6 at t = " +
                         std::to_string(static_cast<double>(k) * params.dt));
    drift(y, K, d);  // fills d with (pull toward lower energy) before the spherical term
    stats.grid[static_cast<std::size_t>(k)] = static_cast<double>(k) * params.dt;
    stats.K_N[static_cast<std::size_t>(k)] = K;
    stats.H_N[static_cast<std::size_t>(k)] = energy(y, d) * inv_n;
    if (k == steps) break;
    const double pull = params.c * K;
    if (noise_sd == 0.0) {
      y += params.dt * (d - pull * y);
    } else {
      const std::uint64_t step_key =
          rng::key_of(params.seed, noise_tag, static_cast<std::uint64_t>(k));
      for (Eigen::Index i = 0; i < params.N; ++i) {
        const double xi =
            rng::gaussian(rng::chain(step_key, static_cast<std::uint64_t>(i)));
        y(i) += params.dt * (d(i) - pull * y(i)) + noise_sd * xi;
      }
    }
  }
  return stats;
}

}  // namespace

TrajectoryStats simulate_diagonal(const LangevinParams& params,
                                  const Eigen::VectorXd& sigmas,
                                  const Eigen::VectorXd& y0) {
  validate(params);
  if (sigmas.size() != params.N)
    throw domain_error("simulate_diagonal: sigma vector length " +
                       std::to_string(sigmas.size()) + " does not match N = " +
                       std::to_string(params.N));
  auto drift = [&](const Eigen::VectorXd& y, double, Eigen::VectorXd& d) {
    d = sigmas.cwiseProduct(y);
  };
  auto energy = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& d) {
    return y.dot(d);  // sum sigma_i y_i^2
  };
  return march(params, y0, drift, energy);
}

TrajectoryStats simulate_diagonal(const LangevinParams& params,
                                  const Eigen::VectorXd& sigmas) {
  return simulate_diagonal(params, sigmas, sample_initial(params.initial, params.N));
}

TrajectoryStats simulate_full(const Eigen::MatrixXd& J, const LangevinParams& params,
                              const Eigen::VectorXd& x0) {
  validate(params);
  if (J.rows() != params.N || J.cols() != params.N)
    throw domain_error("simulate_full: matrix shape does not match N");
  auto drift = [&](const Eigen::VectorXd& y, double, Eigen::VectorXd& d) {
    d.noalias() = J * y;
  };
  auto energy = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& d) {
    return y.dot(d);  // X.J X
  };
  return march(params, x0, drift, energy);
}

TrajectoryStats simulate_full(const Eigen::MatrixXd& J, const LangevinParams& params) {
  return simulate_full(J, params, sample_initial(params.initial, params.N));
}

Eigen::VectorXd semicircle_iid_sigmas(Eigen::Index N, std::uint64_t seed) {
  if (N <= 0) throw domain_error("semicircle_iid_sigmas: N must be positive");
  Eigen::VectorXd s(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const double u = rng::uniform01(rng::key_of(seed, static_cast<std::uint64_t>(i)));
    // invert F(x) = 1/2 + x sqrt(4 - x^2)/(4 pi) + asin(x/2)/pi by Newton with
    // bisection fallback; the density is bounded away from zero except at +-2
    double lo = -2.0, hi = 2.0, x = 4.0 * (u - 0.5);
    for (int it = 0; it < 80; ++it) {
      const double cdf = 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
                         std::asin(0.5 * x) / std::numbers::pi;
      const double err = cdf - u;
      if (std::abs(err) < 1e-14) break;
      if (err > 0.0)
        hi = x;
      else
        lo = x;
      const double pdf = semicircle_pdf(x);
      double next = pdf > 1e-12 ? x - err / pdf : 0.5 * (lo + hi);
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      x = next;
    }
    s(i) = x;
  }
  return s;
}

EnsembleMean ensemble_mean(const std::vector<TrajectoryStats>& runs) {
  if (runs.empty()) throw domain_error("ensemble_mean: no runs");
  std::vector<const TrajectoryStats*> ordered;
  ordered.reserve(runs.size());
  for (const auto& r : runs) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const TrajectoryStats* a, const TrajectoryStats* b) {
                     return a->seed < b->seed;
                   });
  const auto& first = *ordered.front();
  for (const auto* r : ordered) {
    if (r->grid.size() != first.grid.size() || r->N != first.N)
      throw domain_error("ensemble_mean: runs disagree on grid or dimension");
    for (std::size_t k = 0; k < first.grid.size(); ++k)
      if (r->grid[k] != first.grid[k])
        throw domain_error("ensemble_mean: runs disagree on the time grid");
  }

  EnsembleMean out;
  out.runs = static_cast<int>(ordered.size());
  out.grid = first.grid;
  const std::size_t m = first.grid.size();
  out.K_mean.assign(m, 0.0);
  out.K_se.assign(m, 0.0);
  out.H_mean.assign(m, 0.0);
  out.H_se.assign(m, 0.0);
  const double n = static_cast<double>(ordered.size());
  for (std::size_t k = 0; k < m; ++k) {
    double ks = 0.0, hs = 0.0;
    for (const auto* r : ordered) {
      ks += r->K_N[k];
      hs += r->H_N[k];
    }
    const double km = ks / n, hm = hs / n;
    double kv = 0.0, hv = 0.0;
    for (const auto* r : ordered) {
      kv += (r->K_N[k] - km) * (r->K_N[k] - km);
      hv += (r->H_N[k] - hm) * (r->H_N[k] - hm);
    }
    out.K_mean[k] = km;
    out.H_mean[k] = hm;
    if (ordered.size() > 1) {
      out.K_se[k] = std::sqrt(kv / (n - 1.0) / n);
      out.H_se[k] = std::sqrt(hv / (n - 1.0) / n);
    }
  }
  return out;
}

}  // namespace sskdyn
