#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sskdyn/ensembles.hpp"

namespace sskdyn {

enum class LangevinMode { diagonal, full };

struct LangevinParams {
  Eigen::Index N = 1000;
  double beta = 0.5;
  double c = 1.0;
  double dt = 1e-3;
  double T = 5.0;
  std::uint64_t seed = 0;
  LangevinMode mode = LangevinMode::diagonal;
  InitialCondition initial{InitialKind::iid, 1.0, IidLaw::gaussian_std, 0};
  bool noise_off = false;  // drops the thermal kick; used by deterministic tests
};

void validate(const LangevinParams& params);

struct TrajectoryStats {
  std::vector<double> grid;
  std::vector<double> K_N;  // |Y|^2 / N along the trajectory
  std::vector<double> H_N;  // sum sigma_i Y_i^2 / N, or X.J X / N in full mode
  Eigen::Index N = 0;
  std::uint64_t seed = 0;
};

// Euler-Maruyama march of  dY_i = (sigma_i - c K_N) Y_i dt + beta^{-1/2} dB_i
// in eigenbasis coordinates. The noise increment for (coordinate, step) is a
// pure function of (seed, step, coordinate).
TrajectoryStats simulate_diagonal(const LangevinParams& params,
                                  const Eigen::VectorXd& sigmas);
// Same with an explicit start instead of params.initial.
TrajectoryStats simulate_diagonal(const LangevinParams& params,
                                  const Eigen::VectorXd& sigmas,
                                  const Eigen::VectorXd& y0);

// Same dynamics against an explicit coupling matrix:
// dX = (J X - c K_N X) dt + beta^{-1/2} dW.
TrajectoryStats simulate_full(const Eigen::MatrixXd& J, const LangevinParams& params);
TrajectoryStats simulate_full(const Eigen::MatrixXd& J, const LangevinParams& params,
                              const Eigen::VectorXd& x0);

// Independent draws from the semicircle density via inverse-CDF; stand-in
// spectrum for diagonal-mode ensembles.
Eigen::VectorXd semicircle_iid_sigmas(Eigen::Index N, std::uint64_t seed);

struct EnsembleMean {
  std::vector<double> grid;
  std::vector<double> K_mean, K_se;
  std::vector<double> H_mean, H_se;
  int runs = 0;
};

// Pointwise mean and standard error across runs; runs are first ordered by
// seed so the reduction is independent of input order.
EnsembleMean ensemble_mean(const std::vector<TrajectoryStats>& runs);

}  // namespace sskdyn
