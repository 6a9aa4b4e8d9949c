#include "sskdyn/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sskdyn/errors.hpp"

namespace sskdyn {

namespace {

constexpr double series_cut_i = 30.0;
constexpr double series_cut_j = 14.0;
constexpr double exp_arg_max = 700.0;

// sum_{m>=0} (x/2)^(2m+n) / (m! (m+n)!); all terms positive, no cancellation
double bessel_i_series(int n, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= n; ++j) term *= h / j;
  double sum = term;
  const double h2 = h * h;
  for (int m = 1; m <= 500; ++m) {
    term *= h2 / (static_cast<double>(m) * (m + n));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// exp(-x) * I_n(x) ~ (2 pi x)^(-1/2) * sum_k (-1)^k a_k(n)/x^k,
// a_k = prod_{j=1..k} (4n^2 - (2j-1)^2) / (k! 8^k); truncated at the smallest term
double bessel_i_asymptotic_scaled(int n, double x) {
  const double mu = 4.0 * n * n;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    if (std::abs(term) >= prev) break;
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-18) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

void check_bessel_domain(int n, double x) {
  if (n < 0) throw domain_error("bessel_i: order must be non-negative, got " + std::to_string(n));
  if (!(x >= 0.0))
    throw domain_error("bessel_i: argument must be non-negative, got " + std::to_string(x));
}

}  // namespace

double bessel_i(int n, double x) {
  check_bessel_domain(n, x);
  if (x <= series_cut_i) return bessel_i_series(n, x);
  if (x > exp_arg_max)
    throw numerical_error("bessel_i: argument " + std::to_string(x) + " overflows exp");
  return bessel_i_asymptotic_scaled(n, x) * std::exp(x);
}

BesselEval bessel_i_eval(int n, double x) {
  const BesselMethod method = (x <= series_cut_i) ? BesselMethod::series : BesselMethod::asymptotic;
  return BesselEval{n, x, bessel_i(n, x), method};
}

double bessel_i_scaled(int n, double x) {
  check_bessel_domain(n, x);
  if (x <= series_cut_i) return bessel_i_series(n, x) * std::exp(-x);
  return bessel_i_asymptotic_scaled(n, x);
}

double bessel_j1(double x) {
  if (!std::isfinite(x)) throw domain_error("bessel_j1: non-finite argument");
  const double ax = std::abs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  if (ax <= series_cut_j) {
    // alternating series; at x = 14 the largest term is ~1e4, well within double range
    const double h = 0.5 * ax;
    double term = h;
    double sum = term;
    const double h2 = h * h;
    for (int m = 1; m <= 80; ++m) {
      term *= -h2 / (static_cast<double>(m) * (m + 1));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sign * sum;
  }
  // Hankel expansion: J_1(x) = sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),
  // chi = x - 3 pi/4; P sums even a_k, Q odd, both cut at the smallest term.
  const double mu = 4.0;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * ax);
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (prev < 1e-18) break;
  }
  const double chi = ax - 0.75 * std::numbers::pi;
  const double val = std::sqrt(2.0 / (std::numbers::pi * ax)) *
                     (p * std::cos(chi) - q * std::sin(chi));
  return sign * val;
}

double mgf_semicircle(double t) {
  if (!(t >= 0.0))
    throw domain_error("mgf_semicircle: t must be non-negative, got " + std::to_string(t));
  if (t < 0.25) {
    // I_1(2t)/t expanded directly: sum_m t^(2m) / (m! (m+1)!)
    double term = 1.0, sum = 1.0;
    const double t2 = t * t;
    for (int m = 1; m <= 30; ++m) {
      term *= t2 / (static_cast<double>(m) * (m + 1));
      sum += term;
      if (term < 1e-18) break;
    }
    return sum;
  }
  if (2.0 * t > exp_arg_max)
    throw numerical_error("mgf_semicircle: exp(2t) overflows at t = " + std::to_string(t));
  return bessel_i(1, 2.0 * t) / t;
}

double dmgf_semicircle(double t) {
  if (!(t >= 0.0))
    throw domain_error("dmgf_semicircle: t must be non-negative, got " + std::to_string(t));
  if (t < 0.25) {
    // 2 I_2(2t)/t = 2 sum_m t^(2m+1) / (m! (m+2)!)
    double term = t;
    double sum = term;
    const double t2 = t * t;
    for (int m = 1; m <= 30; ++m) {
      term *= t2 / (static_cast<double>(m) * (m + 2));
      sum += term;
      if (term < 1e-18) break;
    }
    return sum;
  }
  if (2.0 * t > exp_arg_max)
    throw numerical_error("dmgf_semicircle: exp(2t) overflows at t = " + std::to_string(t));
  return 2.0 * bessel_i(2, 2.0 * t) / t;
}

double charfn_semicircle(double t) {
  const double at = std::abs(t);
  if (at < 0.25) {
    // J_1(2t)/t = sum_m (-1)^m t^(2m) / (m! (m+1)!)
    double term = 1.0, sum = 1.0;
    const double t2 = at * at;
    for (int m = 1; m <= 30; ++m) {
      term *= -t2 / (static_cast<double>(m) * (m + 1));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return bessel_j1(2.0 * at) / at;
}

}  // namespace sskdyn
