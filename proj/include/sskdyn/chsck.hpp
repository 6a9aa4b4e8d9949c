#pragma once

#include <string>
#include <vector>

namespace sskdyn {

// Two-point correlation solver for the spherical quadratic dynamics with
// interaction strength c and inverse temperature beta. The response-like
// kernel R satisfies
//   R'(t) = 2c ( E[e^{2 sigma t}] + beta^{-1} \int_0^t R(r) E[e^{2 sigma (t-r)}] dr ),
//   R(0) = 1,
// with sigma semicircular, and the observables are
//   K(t) = ( E[e^{2 sigma t}] + beta^{-1} \int_0^t R(r) E[e^{2 sigma (t-r)}] dr ) / R(t),
//   H(t) = ( E[sigma e^{2 sigma t}] + beta^{-1} \int_0^t R(r) E[sigma e^{2 sigma (t-r)}] dr ) / R(t).
// Internally everything is marched in the tilted variable Rt(t) = R(t) e^{-4t},
// whose kernels stay bounded, so only log Rt is exposed.

struct ChsckParams {
  double c = 1.0;
  double beta = 0.5;
  double T = 10.0;
  double dt = 1e-3;
  double K0 = 1.0;  // fixed; validation rejects anything else
};

void validate(const ChsckParams& params);

enum class Regime { sub, critical, super };

const char* to_string(Regime regime);

struct AsymptoticConstants {
  double beta_c = 0.0;   // c / 4
  double s_beta = 0.0;   // exponential growth rate of R is 2 s_beta - 4 in the tilted frame
  double Psi = 0.0;      // polynomial correction power: 0, 1/2, or 3/2
  double C_beta = 0.0;   // prefactor of Rt(t) ~ C_beta e^{(2 s_beta - 4) t} t^{-Psi}
  Regime regime = Regime::sub;
};

AsymptoticConstants asymptotic_constants(double c, double beta);

struct VolterraSolution {
  double c = 0.0, beta = 0.0, dt = 0.0;
  std::vector<double> grid;       // t_k = k dt, k = 0..M
  std::vector<double> logRtilde;  // log of the tilted kernel, starts at 0
  std::vector<double> Kdiag;      // K(t_k), equals 1 at t = 0
  std::vector<double> H;          // H(t_k)
};

// Second-order predictor-corrector march of the tilted equation. Throws
// horizon_error once log Rt would exceed 700.
VolterraSolution solve_volterra(const ChsckParams& params);

// Truncated Laplace transform L(z) = int_0^T R(t) e^{-2 z t} dt; requires
// z > max(2, s_beta) so the tail is integrable.
double laplace_transform(const VolterraSolution& sol, const ChsckParams& params, double z);

// | 2 z L(z) - 1 - c m(z) (1 + beta^{-1} L(z)) |, the transform-side identity
// the solution must satisfy.
double laplace_residual(const VolterraSolution& sol, const ChsckParams& params, double z);

// K(t, s) = ( E[e^{sigma (t+s)}] + beta^{-1} \int_0^{min(t,s)} R(r) E[e^{sigma (t+s-2r)}] dr )
//           / sqrt(R(t) R(s)); symmetric, diagonal matches Kdiag.
double two_time_K(const VolterraSolution& sol, double t, double s, const ChsckParams& params);

struct LimitValues {
  double H_inf = 0.0;
  double HK_ratio_inf = 0.0;
};

// Stationary values implied by the solver: K_inf = s_beta / c and, through the
// exact balance K' = 2H - 2cK^2 + beta^{-1}, H_inf = c K_inf^2 - 1/(2 beta).
LimitValues limit_values(double c, double beta);

}  // namespace sskdyn
