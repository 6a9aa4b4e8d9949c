#pragma once

namespace sskdyn {

enum class BesselMethod { series, integral_quadrature, asymptotic };

struct BesselEval {
  int order;
  double argument;
  double value;
  BesselMethod method;
};

// Modified Bessel function of the first kind, integer order n >= 0, x >= 0.
// Ascending series for x <= 30, Hankel-type asymptotic expansion beyond.
double bessel_i(int n, double x);
BesselEval bessel_i_eval(int n, double x);

// exp(-x) * I_n(x); stays finite for arbitrarily large x
double bessel_i_scaled(int n, double x);

// Bessel function of the first kind, order 1 (series for x <= 14, Hankel beyond)
double bessel_j1(double x);

// Moment generating function of the semicircle law on [-2, 2]:
//   mgf(t)  = E[exp(t*sigma)]       = I_1(2t) / t
//   dmgf(t) = E[sigma * exp(t*sigma)] = 2 I_2(2t) / t
//   charfn(t) = E[exp(i*t*sigma)]   = J_1(2|t|) / |t|   (real by symmetry)
// mgf and dmgf require t >= 0; charfn accepts any real t.
double mgf_semicircle(double t);
double dmgf_semicircle(double t);
double charfn_semicircle(double t);

}  // namespace sskdyn
