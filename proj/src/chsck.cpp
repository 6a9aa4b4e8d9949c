#include "sskdyn/chsck.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "sskdyn/errors.hpp"
#include "sskdyn/special_functions.hpp"
#include "sskdyn/spectral.hpp"

namespace sskdyn {

void validate(const ChsckParams& params) {
  std::string problems;
  auto add = [&](const std::string& msg) {
    if (!problems.empty()) problems += "; ";
    problems += msg;
  };
  if (!(params.c > 0.0)) add("c must be positive");
  if (!(params.beta > 0.0)) add("beta must be positive");
  if (!(params.T > 0.0)) add("T must be positive");
  if (!(params.dt > 0.0)) add("dt must be positive");
  if (params.dt > 0.0 && params.T > 0.0 && params.dt > params.T / 100.0)
    add("dt must not exceed T/100");
  if (params.K0 != 1.0) add("K0 is fixed to 1");
  if (!problems.empty()) throw config_error("chsck params: " + problems);
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::sub: return "sub";
    case Regime::critical: return "critical";
    case Regime::super: return "super";
  }
  throw config_error("unknown regime");
}

AsymptoticConstants asymptotic_constants(double c, double beta) {
  if (!(c > 0.0) || !(beta > 0.0))
    throw domain_error("asymptotic_constants: c and beta must be positive");
  AsymptoticConstants out;
  out.beta_c = c / 4.0;
  const double rel = beta / out.beta_c;
  const double root2pi = std::sqrt(2.0 * std::numbers::pi);
  if (std::abs(beta - out.beta_c) <= 1e-12 * out.beta_c) {
    out.regime = Regime::critical;
    out.s_beta = 2.0;
    out.Psi = 0.5;
    out.C_beta = (1.0 + c) / (2.0 * root2pi);
  } else if (beta < out.beta_c) {
    out.regime = Regime::sub;
    // pole of the transform identity: 2 beta s = c m(s); the closed form below
    // solves it exactly
    out.s_beta = 2.0 / std::sqrt(1.0 - (1.0 - rel) * (1.0 - rel));
    const double s = out.s_beta;
    const double m = stieltjes_m(s);
    // self-consistency audit; skipped in the sliver next to the transition where
    // m'(s) diverges and the residual is dominated by rounding in s itself
    if (s > 2.0 + 1e-6) {
      const double residual = std::abs(2.0 * beta * s - c * m);
      if (residual > 1e-10 * (1.0 + std::abs(2.0 * beta * s)))
        throw numerical_error("asymptotic_constants: growth-rate equation residual " +
                              std::to_string(residual));
    }
    const double mprime = 0.5 * (1.0 - s / std::sqrt(s * s - 4.0));
    out.Psi = 0.0;
    out.C_beta = 2.0 * beta * (1.0 + c * m) / (2.0 * beta - c * mprime);
  } else {
    out.regime = Regime::super;
    out.s_beta = 2.0;
    out.Psi = 1.5;
    out.C_beta = c * beta * (4.0 * beta + 1.0) /
                 (2.0 * root2pi * (4.0 * beta - c) * (4.0 * beta - c));
  }
  return out;
}

namespace {

// tilted kernels, bounded on [0, inf):
//   gt(u) = E[e^{2 sigma u}] e^{-4u} = I_1(4u) e^{-4u} / (2u), gt(0) = 1
//   dt(u) = E[sigma e^{2 sigma u}] e^{-4u} = I_2(4u) e^{-4u} / u, dt(0) = 0
double g_tilde(double u) {
  if (u == 0.0) return 1.0;
  if (u < 7.0) return mgf_semicircle(2.0 * u) * std::exp(-4.0 * u);
  return bessel_i_scaled(1, 4.0 * u) / (2.0 * u);
}

double d_tilde(double u) {
  if (u == 0.0) return 0.0;
  if (u < 7.0) return dmgf_semicircle(2.0 * u) * std::exp(-4.0 * u);
  return bessel_i_scaled(2, 4.0 * u) / u;
}

// E[e^{sigma u}] e^{-2u}, the kernel of the two-time correlator
double m_tilde(double u) {
  if (u == 0.0) return 1.0;
  if (u < 14.0) return mgf_semicircle(u) * std::exp(-2.0 * u);
  return bessel_i_scaled(1, 2.0 * u) / u;
}

}  // namespace

VolterraSolution solve_volterra(const ChsckParams& params) {
  validate(params);
  const double dt = params.dt;
  const double c = params.c;
  const double binv = 1.0 / params.beta;
  const auto M = static_cast<Eigen::Index>(std::llround(params.T / dt));

  VolterraSolution sol;
  sol.c = c;
  sol.beta = params.beta;
  sol.dt = dt;
  sol.grid.resize(static_cast<std::size_t>(M) + 1);
  sol.logRtilde.resize(sol.grid.size());
  sol.Kdiag.resize(sol.grid.size());
  sol.H.resize(sol.grid.size());

  Eigen::VectorXd g(M + 1), d(M + 1), grev(M + 1), drev(M + 1), R(M + 1);
  for (Eigen::Index k = 0; k <= M; ++k) {
    const double t = static_cast<double>(k) * dt;
    sol.grid[static_cast<std::size_t>(k)] = t;
    g(k) = g_tilde(t);
    d(k) = d_tilde(t);
  }
  // reversed copies keep the convolution inner products contiguous
  for (Eigen::Index k = 0; k <= M; ++k) {
    grev(M - k) = g(k);
    drev(M - k) = d(k);
  }

  // trapezoid convolutions over r in (0, t_k); the r = 0 and r = t_k endpoints
  // carry weight dt/2 and are added explicitly where needed
  auto conv_interior = [&](const Eigen::VectorXd& rev, Eigen::Index k) {
    if (k < 2) return 0.0;
    return R.segment(1, k - 1).dot(rev.segment(M - k + 1, k - 1));
  };

  R(0) = 1.0;
  sol.logRtilde[0] = 0.0;
  sol.Kdiag[0] = 1.0;
  sol.H[0] = 0.0;

  // Rt' = -4 Rt + 2c ( gt + beta^{-1} [dt/2 (gt(0) Rt(t) + gt(t) Rt(0)) + dt * interior] ).
  // The gt(0) Rt(t) endpoint makes the update linear in the unknown; Heun otherwise.
  const double b_lin = -4.0 + 2.0 * c * binv * 0.5 * dt * g(0);
  for (Eigen::Index k = 0; k < M; ++k) {
    const double conv_k = (k == 0) ? 0.0
                                   : 0.5 * dt * (g(0) * R(k) + g(k) * R(0)) +
                                         dt * conv_interior(grev, k);
    const double F_k = -4.0 * R(k) + 2.0 * c * (g(k) + binv * conv_k);
    // at k+1 the convolution splits into (known interior + R(0) endpoint) + b_lin R(k+1)
    const double conv_known =
        0.5 * dt * g(k + 1) * R(0) + dt * conv_interior(grev, k + 1);
    const double a_lin = 2.0 * c * (g(k + 1) + binv * conv_known);
    R(k + 1) = (R(k) + 0.5 * dt * F_k + 0.5 * dt * a_lin) / (1.0 - 0.5 * dt * b_lin);
    if (!(R(k + 1) > 0.0) || !std::isfinite(R(k + 1)))
      throw numerical_error("solve_volterra: kernel lost positivity at t = " +
                            std::to_string(sol.grid[static_cast<std::size_t>(k + 1)]));
    const double lr = std::log(R(k + 1));
    if (lr > 700.0)
      throw horizon_error("solve_volterra: log of the tilted kernel exceeded 700 at t = " +
                          std::to_string(sol.grid[static_cast<std::size_t>(k + 1)]) +
                          "; shorten T");
    sol.logRtilde[static_cast<std::size_t>(k + 1)] = lr;
  }

  for (Eigen::Index k = 1; k <= M; ++k) {
    const double conv_g =
        0.5 * dt * (g(0) * R(k) + g(k) * R(0)) + dt * conv_interior(grev, k);
    const double conv_d =
        0.5 * dt * (d(0) * R(k) + d(k) * R(0)) + dt * conv_interior(drev, k);
    sol.Kdiag[static_cast<std::size_t>(k)] = (g(k) + binv * conv_g) / R(k);
    sol.H[static_cast<std::size_t>(k)] = (d(k) + binv * conv_d) / R(k);
    if (!(sol.Kdiag[static_cast<std::size_t>(k)] > 0.0))
      throw numerical_error("solve_volterra: K lost positivity at t = " +
                            std::to_string(sol.grid[static_cast<std::size_t>(k)]));
  }
  return sol;
}

namespace {

double interp_log_rtilde(const VolterraSolution& sol, double t) {
  const double x = t / sol.dt;
  const auto k = static_cast<std::size_t>(std::floor(x));
  if (k + 1 >= sol.logRtilde.size()) return sol.logRtilde.back();
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * sol.logRtilde[k] + w * sol.logRtilde[k + 1];
}

}  // namespace

double laplace_transform(const VolterraSolution& sol, const ChsckParams& params, double z) {
  const auto ac = asymptotic_constants(params.c, params.beta);
  if (!(z > std::max(2.0, ac.s_beta)))
    throw domain_error("laplace_transform: z must exceed max(2, s_beta) = " +
                       std::to_string(std::max(2.0, ac.s_beta)));
  // L(z) = int_0^T R(t) e^{-2 z t} dt = int_0^T Rt(t) e^{-2 (z - 2) t} dt
  const double dt = sol.dt;
  const double a = 2.0 * (z - 2.0);
  double acc = 0.5 * 1.0;  // t = 0 endpoint, Rt(0) = 1
  const std::size_t M = sol.grid.size() - 1;
  for (std::size_t k = 1; k < M; ++k)
    acc += std::exp(sol.logRtilde[k] - a * sol.grid[k]);
  acc += 0.5 * std::exp(sol.logRtilde[M] - a * sol.grid[M]);
  return acc * dt;
}

double laplace_residual(const VolterraSolution& sol, const ChsckParams& params, double z) {
  const double L = laplace_transform(sol, params, z);
  const double m = stieltjes_m(z);
  return std::abs(2.0 * z * L - 1.0 - params.c * m * (1.0 + L / params.beta));
}

double two_time_K(const VolterraSolution& sol, double t, double s, const ChsckParams& params) {
  const double T = sol.grid.back();
  if (!(t >= 0.0) || !(s >= 0.0) || t > T || s > T)
    throw domain_error("two_time_K: times must lie in [0, T]");
  const double u = t + s;
  const double lo = std::min(t, s);
  const double dt = sol.dt;
  const double binv = 1.0 / params.beta;

  // integrand in marched variables: R(r) E[e^{sigma(u - 2r)}] = Rt(r) mt(u - 2r) e^{2u},
  // and the normalizer R(t) R(s) = Rt(t) Rt(s) e^{4(t+s)}; the e factors cancel after
  // the square root, so work with the tilted quantities. Scale by the largest logRt
  // seen on [0, min(t,s)] to keep the intermediate exponentials finite.
  const auto steps = static_cast<std::size_t>(std::floor(lo / dt));
  double log_peak = 0.0;
  for (std::size_t k = 1; k <= steps && k < sol.logRtilde.size(); ++k)
    log_peak = std::max(log_peak, sol.logRtilde[k]);
  auto f = [&](double r, double logRt) {
    return std::exp(logRt - log_peak) * m_tilde(u - 2.0 * r);
  };
  double integral = 0.0;
  if (steps >= 1) {
    double prev = f(0.0, 0.0);
    for (std::size_t k = 1; k <= steps; ++k) {
      const double cur = f(sol.grid[k], sol.logRtilde[k]);
      integral += 0.5 * dt * (prev + cur);
      prev = cur;
    }
    const double r_end = static_cast<double>(steps) * dt;
    if (lo > r_end) {
      const double cur = f(lo, interp_log_rtilde(sol, lo));
      integral += 0.5 * (lo - r_end) * (prev + cur);
    }
  } else if (lo > 0.0) {
    integral += 0.5 * lo * (f(0.0, 0.0) + f(lo, interp_log_rtilde(sol, lo)));
  }

  const double log_norm = 0.5 * (interp_log_rtilde(sol, t) + interp_log_rtilde(sol, s));
  return (m_tilde(u) * std::exp(-log_peak) + binv * integral) * std::exp(log_peak - log_norm);
}

LimitValues limit_values(double c, double beta) {
  const auto ac = asymptotic_constants(c, beta);
  const double K_inf = ac.s_beta / c;
  LimitValues out;
  out.H_inf = c * K_inf * K_inf - 0.5 / beta;
  out.HK_ratio_inf = out.H_inf / K_inf;
  return out;
}

}  // namespace sskdyn
