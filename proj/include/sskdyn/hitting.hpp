#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sskdyn/spectral.hpp"

namespace sskdyn {

struct HittingRecord {
  Eigen::Index N = 0;
  double epsilon = 0.0;
  double T_eps = 0.0;  // continuous time for descent, iteration count for power
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double initial_overlap = 0.0;
  double gap = 0.0;  // lambda_2 - lambda_1, or |sigma_1|/|sigma_2| - 1
  std::uint64_t seed = 0;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

// |<v_j, X(t)/|X(t)|>| for the descent flow X' = -2 J X, written gap-shifted so
// every exponential argument is non-positive:
//   |h_j(0)| e^{-2(l_j - l_1) t} / sqrt( sum_i h_i(0)^2 e^{-4(l_i - l_1) t} ).
double overlap_closed_form(const SpectralData& spectral, const Eigen::VectorXd& x0,
                           double t, Eigen::Index j);

// First time the bottom-eigenvector overlap reaches epsilon; bisection on the
// closed form over [0, upper_bound + 1].
double gd_hitting_time(const SpectralData& spectral, const Eigen::VectorXd& x0,
                       double epsilon);

// RK4 integration of the normalized flow X' = -2 J X + 2 (X.J X) X with a
// renormalization after every step; independent check on the closed form.
Eigen::VectorXd gd_ode_oracle(const Eigen::MatrixXd& J, const Eigen::VectorXd& x0,
                              double t_end, double dt);

// Two-sided envelope for the descent hitting time using levels 2..k (lower)
// and the spectral gap (upper); both sides clamped at zero.
Bounds gd_bounds(const SpectralData& spectral, const Eigen::VectorXd& x0, double epsilon,
                 int k);

// Number of power-iteration steps q -> J q / |J q| until the top-|eigenvalue|
// overlap reaches epsilon. `abs_top` must be ordered by descending |eigenvalue|.
// The count is located by monotone search on the closed form
//   |a_1| / sqrt( sum_i a_i^2 (s_i/s_1)^{2k} )
// and then replayed as an explicit iteration; disagreement is an error.
// Exceeding k_max throws not_hit_error carrying the last overlap.
long long power_hitting_time(const SpectralData& abs_top, const Eigen::VectorXd& q0,
                             double epsilon, long long k_max);

// Envelope for the power iteration count using ratio levels 2..l.
Bounds power_bounds(const SpectralData& abs_top, const Eigen::VectorXd& q0,
                    double epsilon, int l);

enum class Algorithm { gd, power };

Algorithm algorithm_from_string(const std::string& name);
const char* to_string(Algorithm algorithm);

// One complete trial: fresh GOE draw at dimension N, uniform unit start, then
// hitting time, envelope at the given level, initial overlap and gap. Matrix
// and start seeds derive from (base_seed, N, trial). A power-iteration cap
// shows up as T_eps = NaN rather than an exception.
HittingRecord hitting_trial(Eigen::Index N, int trial, double epsilon,
                            Algorithm algorithm, std::uint64_t base_seed, int level = 5);

struct ScalingFit {
  std::vector<Eigen::Index> Ns;
  std::vector<double> medians;  // per N, over trials that hit
  double slope = 0.0;           // of log median against log N
  double intercept = 0.0;
  double r_squared = 0.0;
  long long cap_failures = 0;
  std::vector<HittingRecord> records;  // trial-major: all trials of Ns[0], then Ns[1], ...
};

// Median hitting time against dimension on fresh draws; trial (N, i) uses seeds
// derived from (base_seed, N, i). Requires at least two distinct N to fit.
ScalingFit scaling_experiment(const std::vector<Eigen::Index>& Ns, int trials,
                              double epsilon, Algorithm algorithm,
                              std::uint64_t base_seed, int workers = 1);

}  // namespace sskdyn
