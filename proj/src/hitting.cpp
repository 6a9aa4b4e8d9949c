#include "sskdyn/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sskdyn/errors.hpp"
#include "sskdyn/parallel.hpp"
#include "sskdyn/rng.hpp"

namespace sskdyn {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw domain_error("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
}

void check_unit(const Eigen::VectorXd& x0) {
  if (std::abs(x0.norm() - 1.0) > 1e-10)
    throw domain_error("initial vector must have unit norm");
}

// overlap of the descent flow with the bottom eigenvector, gap-shifted
double gd_overlap_bottom(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& h0,
                         double t) {
  const Eigen::Index n = lambdas.size();
  const double l1 = lambdas(0);
  double denom = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = h0(i) * std::exp(-2.0 * (lambdas(i) - l1) * t);
    denom += w * w;
  }
  return std::abs(h0(0)) / std::sqrt(denom);
}

// power-iteration overlap with the top-|eigenvalue| direction after k steps
double power_overlap(const Eigen::VectorXd& sigmas_abs_top, const Eigen::VectorXd& a0,
                     long long k) {
  const Eigen::Index n = sigmas_abs_top.size();
  const double s1 = std::abs(sigmas_abs_top(0));
  double denom = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ratio = std::abs(sigmas_abs_top(i)) / s1;
    const double w = a0(i) * std::pow(ratio, static_cast<double>(k));
    denom += w * w;
  }
  return std::abs(a0(0)) / std::sqrt(denom);
}

}  // namespace

double overlap_closed_form(const SpectralData& spectral, const Eigen::VectorXd& x0,
                           double t, Eigen::Index j) {
  const Eigen::Index n = spectral.eigenvalues.size();
  if (x0.size() != spectral.eigenvectors.rows())
    throw domain_error("overlap_closed_form: vector length does not match the decomposition");
  if (j < 0 || j >= n) throw domain_error("overlap_closed_form: index out of range");
  if (!(t >= 0.0)) throw domain_error("overlap_closed_form: t must be non-negative");
  check_unit(x0);
  const Eigen::VectorXd h0 = spectral.eigenvectors.transpose() * x0;
  const double l_min = spectral.eigenvalues(0);
  double denom = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = h0(i) * std::exp(-2.0 * (spectral.eigenvalues(i) - l_min) * t);
    denom += w * w;
  }
  const double num =
      std::abs(h0(j)) * std::exp(-2.0 * (spectral.eigenvalues(j) - l_min) * t);
  if (denom == 0.0) throw numerical_error("overlap_closed_form: flow collapsed to zero");
  return num / std::sqrt(denom);
}

double gd_hitting_time(const SpectralData& spectral, const Eigen::VectorXd& x0,
                       double epsilon) {
  check_epsilon(epsilon);
  check_unit(x0);
  const Eigen::VectorXd h0 = spectral.eigenvectors.transpose() * x0;
  const Eigen::VectorXd& l = spectral.eigenvalues;
  if (h0.size() < 2) throw domain_error("gd_hitting_time: need at least two eigenvalues");
  if (h0(0) == 0.0)
    throw degenerate_input_error("gd_hitting_time: initial overlap with the target is zero");
  if (gd_overlap_bottom(l, h0, 0.0) >= epsilon) return 0.0;

  const Bounds env = gd_bounds(spectral, x0, epsilon, 2);
  double lo = 0.0, hi = env.upper + 1.0;
  if (gd_overlap_bottom(l, h0, hi) < epsilon)
    throw numerical_error("gd_hitting_time: bracket endpoint below target level");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (gd_overlap_bottom(l, h0, mid) >= epsilon)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd gd_ode_oracle(const Eigen::MatrixXd& J, const Eigen::VectorXd& x0,
                              double t_end, double dt) {
  if (J.rows() != J.cols() || J.rows() != x0.size())
    throw domain_error("gd_ode_oracle: shape mismatch");
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw domain_error("gd_ode_oracle: bad time step");
  const auto steps = static_cast<long long>(std::llround(t_end / dt));
  Eigen::VectorXd x = x0;
  auto f = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Eigen::VectorXd jv = J * v;
    return -2.0 * jv + 2.0 * v.dot(jv) * v;
  };
  for (long long k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = f(x);
    const Eigen::VectorXd k2 = f(x + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = f(x + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = f(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = x.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw numerical_error("gd_ode_oracle: flow left the sphere");
    x /= norm;
  }
  return x;
}

Bounds gd_bounds(const SpectralData& spectral, const Eigen::VectorXd& x0, double epsilon,
                 int k) {
  check_epsilon(epsilon);
  check_unit(x0);
  const Eigen::VectorXd& l = spectral.eigenvalues;
  const Eigen::Index n = l.size();
  if (k < 2) throw domain_error("gd_bounds: level k must be at least 2");
  if (k > n) throw domain_error("gd_bounds: level k exceeds the dimension");
  const Eigen::VectorXd h0 = spectral.eigenvectors.transpose() * x0;
  const double h1 = std::abs(h0(0));
  if (h1 == 0.0) throw degenerate_input_error("gd_bounds: zero initial overlap");
  const double scale = std::max(std::abs(l(0)), std::abs(l(n - 1)));
  const double gap12 = l(1) - l(0);
  if (gap12 <= 1e-14 * std::max(1.0, scale))
    throw degenerate_input_error("gd_bounds: bottom eigenvalue is degenerate");
  const double gap1k = l(k - 1) - l(0);
  if (gap1k <= 1e-14 * std::max(1.0, scale))
    throw degenerate_input_error("gd_bounds: level k eigenvalue is degenerate with the bottom");

  const double level = 1.0 / (epsilon * epsilon) - 1.0;
  double tail = 0.0;
  for (Eigen::Index i = 1; i < k; ++i) tail += h0(i) * h0(i);

  Bounds out;
  const double lower_arg = tail / (h1 * h1 * level);
  out.lower = lower_arg > 1.0 ? std::log(lower_arg) / (4.0 * gap1k) : 0.0;
  const double upper_arg = (1.0 / (h1 * h1) - 1.0) / level;
  out.upper = upper_arg > 1.0 ? std::log(upper_arg) / (4.0 * gap12) : 0.0;
  return out;
}

long long power_hitting_time(const SpectralData& abs_top, const Eigen::VectorXd& q0,
                             double epsilon, long long k_max) {
  check_epsilon(epsilon);
  check_unit(q0);
  if (k_max < 1) throw domain_error("power_hitting_time: k_max must be positive");
  const Eigen::VectorXd& s = abs_top.eigenvalues;
  const Eigen::Index n = s.size();
  if (n < 2) throw domain_error("power_hitting_time: need at least two eigenvalues");
  const double s1 = std::abs(s(0));
  if (s1 == 0.0) throw degenerate_input_error("power_hitting_time: zero top eigenvalue");
  if (std::abs(s(1)) >= s1 * (1.0 - 1e-14))
    throw degenerate_input_error("power_hitting_time: top |eigenvalue| is not separated");
  const Eigen::VectorXd a0 = abs_top.eigenvectors.transpose() * q0;
  if (a0(0) == 0.0)
    throw degenerate_input_error("power_hitting_time: zero initial overlap with the top");

  if (power_overlap(s, a0, 0) >= epsilon) return 0;
  // the closed-form overlap is non-decreasing in k, so first locate the count
  // by doubling + binary search...
  long long lo = 0, hi = 1;
  while (power_overlap(s, a0, hi) < epsilon) {
    if (hi >= k_max) {
      const double last = power_overlap(s, a0, k_max);
      throw not_hit_error("power_hitting_time: cap " + std::to_string(k_max) +
                              " reached with overlap " + std::to_string(last),
                          last, k_max);
    }
    lo = hi;
    hi = std::min(hi * 2, k_max);
  }
  // overlap(lo) < epsilon <= overlap(hi)
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (power_overlap(s, a0, mid) >= epsilon)
      hi = mid;
    else
      lo = mid;
  }

  // ...then replay the actual iteration via the decomposition and require the
  // same crossing step
  Eigen::VectorXd a = a0;
  long long crossed = -1;
  for (long long k = 1; k <= hi; ++k) {
    a = a.cwiseProduct(s);
    a /= a.norm();
    const double overlap = std::abs(a(0));
    if (overlap >= epsilon) {
      crossed = k;
      break;
    }
  }
  if (crossed != hi)
    throw numerical_error("power_hitting_time: iteration and closed form disagree (" +
                          std::to_string(crossed) + " vs " + std::to_string(hi) + ")");
  return hi;
}

Bounds power_bounds(const SpectralData& abs_top, const Eigen::VectorXd& q0,
                    double epsilon, int l) {
  check_epsilon(epsilon);
  check_unit(q0);
  const Eigen::VectorXd& s = abs_top.eigenvalues;
  const Eigen::Index n = s.size();
  if (l < 2) throw domain_error("power_bounds: level l must be at least 2");
  if (l > n) throw domain_error("power_bounds: level l exceeds the dimension");
  const double s1 = std::abs(s(0));
  if (s1 == 0.0) throw degenerate_input_error("power_bounds: zero top eigenvalue");
  const double r2 = s1 / std::abs(s(1));
  const double rl = s1 / std::abs(s(l - 1));
  if (!(r2 > 1.0 + 1e-14))
    throw degenerate_input_error("power_bounds: top |eigenvalue| is not separated");
  if (!(rl > 1.0 + 1e-14))
    throw degenerate_input_error("power_bounds: level l |eigenvalue| is not separated");
  const Eigen::VectorXd a0 = abs_top.eigenvectors.transpose() * q0;
  const double a1 = std::abs(a0(0));
  if (a1 == 0.0) throw degenerate_input_error("power_bounds: zero initial overlap");

  const double level = 1.0 / (epsilon * epsilon) - 1.0;
  double tail = 0.0;
  for (Eigen::Index i = 1; i < l; ++i) tail += a0(i) * a0(i);

  Bounds out;
  const double lower_arg = tail / (a1 * a1 * level);
  out.lower = lower_arg > 1.0 ? 0.5 * std::log(lower_arg) / std::log(rl) : 0.0;
  // deliberately slack (factor ~4 over the tight continuous bound) so the
  // integer crossing count always sits inside [lower, upper]
  const double upper_arg = (1.0 / (a1 * a1) - 1.0) / (2.0 * (1.0 - epsilon));
  out.upper = upper_arg > 1.0 ? 2.0 * std::log(upper_arg) / std::log(r2) : 0.0;
  return out;
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "gd") return Algorithm::gd;
  if (name == "power") return Algorithm::power;
  throw config_error("unknown algorithm '" + name + "'");
}

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::gd: return "gd";
    case Algorithm::power: return "power";
  }
  throw config_error("unknown algorithm");
}

HittingRecord hitting_trial(Eigen::Index N, int trial, double epsilon, Algorithm algorithm,
                            std::uint64_t base_seed, int level) {
  const std::uint64_t seed_matrix =
      rng::key_of(base_seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(trial), 0);
  const std::uint64_t seed_start =
      rng::key_of(base_seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(trial), 1);
  WignerSpec wspec;
  wspec.N = N;
  wspec.entry_law = EntryLaw::gaussian_orthogonal;
  wspec.seed = seed_matrix;
  const Eigen::MatrixXd J = sample_wigner(wspec);
  const SpectralData spectral = eig_sym(J);

  InitialCondition init;
  init.kind = InitialKind::sphere_uniform;
  init.radius = 1.0;
  init.seed = seed_start;
  const Eigen::VectorXd x0 = sample_initial(init, N);

  HittingRecord rec;
  rec.N = N;
  rec.epsilon = epsilon;
  rec.seed = seed_matrix;
  if (algorithm == Algorithm::gd) {
    rec.initial_overlap = overlap_closed_form(spectral, x0, 0.0, 0);
    rec.gap = spectral.eigenvalues(1) - spectral.eigenvalues(0);
    const Bounds env = gd_bounds(spectral, x0, epsilon, level);
    rec.lower_bound = env.lower;
    rec.upper_bound = env.upper;
    rec.T_eps = gd_hitting_time(spectral, x0, epsilon);
  } else {
    const SpectralData top = abs_top_view(spectral);
    const Eigen::VectorXd a0 = top.eigenvectors.transpose() * x0;
    rec.initial_overlap = std::abs(a0(0));
    rec.gap = std::abs(top.eigenvalues(0)) / std::abs(top.eigenvalues(1)) - 1.0;
    const Bounds env = power_bounds(top, x0, epsilon, level);
    rec.lower_bound = env.lower;
    rec.upper_bound = env.upper;
    const double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
    const auto k_max = static_cast<long long>(1e4 * n23);
    try {
      rec.T_eps = static_cast<double>(power_hitting_time(top, x0, epsilon, k_max));
    } catch (const not_hit_error&) {
      rec.T_eps = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rec;
}

ScalingFit scaling_experiment(const std::vector<Eigen::Index>& Ns, int trials,
                              double epsilon, Algorithm algorithm,
                              std::uint64_t base_seed, int workers) {
  check_epsilon(epsilon);
  if (Ns.empty()) throw domain_error("scaling_experiment: empty dimension list");
  for (const Eigen::Index n : Ns)
    if (n < 100)
      throw domain_error("scaling_experiment: every N must be at least 100, got " +
                         std::to_string(n));
  if (trials < 10) throw domain_error("scaling_experiment: need at least 10 trials per N");
  std::vector<Eigen::Index> distinct(Ns.begin(), Ns.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2)
    throw domain_error("scaling_experiment: a fit needs at least two distinct N");

  ScalingFit fit;
  fit.Ns = Ns;
  fit.records.resize(Ns.size() * static_cast<std::size_t>(trials));
  parallel_for(fit.records.size(), workers, [&](std::size_t idx) {
    const std::size_t which_n = idx / static_cast<std::size_t>(trials);
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(trials));
    fit.records[idx] = hitting_trial(Ns[which_n], trial, epsilon, algorithm, base_seed);
  });
  for (const auto& rec : fit.records)
    if (!std::isfinite(rec.T_eps)) ++fit.cap_failures;

  fit.medians.resize(Ns.size());
  std::vector<double> logN, logT;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    std::vector<double> sample;
    for (int t = 0; t < trials; ++t) {
      const double v = fit.records[i * static_cast<std::size_t>(trials) +
                                   static_cast<std::size_t>(t)]
                           .T_eps;
      if (std::isfinite(v)) sample.push_back(v);
    }
    if (sample.empty())
      throw numerical_error("scaling_experiment: every trial hit the cap at N = " +
                            std::to_string(Ns[i]));
    fit.medians[i] = median(std::move(sample));
    logN.push_back(std::log(static_cast<double>(Ns[i])));
    logT.push_back(std::log(fit.medians[i]));
  }

  const double n = static_cast<double>(logN.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < logN.size(); ++i) {
    sx += logN[i];
    sy += logT[i];
    sxx += logN[i] * logN[i];
    sxy += logN[i] * logT[i];
    syy += logT[i] * logT[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw domain_error("scaling_experiment: degenerate fit");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < logN.size(); ++i) {
    const double pred = fit.intercept + fit.slope * logN[i];
    ss_res += (logT[i] - pred) * (logT[i] - pred);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace sskdyn
