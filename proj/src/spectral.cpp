#include "sskdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sskdyn/errors.hpp"
#include "sskdyn/parallel.hpp"
#include "sskdyn/rng.hpp"

namespace sskdyn {

SpectralData eig_sym(const Eigen::MatrixXd& J, double tol_eig, double tol_orth) {
  if (J.rows() != J.cols() || J.rows() == 0)
    throw domain_error("eig_sym: matrix must be square and non-empty");
  const double asym = (J - J.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw domain_error("eig_sym: matrix is not symmetric, defect " + std::to_string(asym));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eig_sym: eigensolver failed to converge");

  SpectralData out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.source_dim = J.rows();

  const Eigen::Index n = out.source_dim;
  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = out.eigenvectors.col(k);
    Eigen::Index arg = 0;
    double best = std::abs(col(0));
    for (Eigen::Index i = 1; i < n; ++i) {
      const double a = std::abs(col(i));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (col(arg) < 0.0) col = -col;
  }

  const double scale =
      std::max({1.0, std::abs(out.eigenvalues(0)), std::abs(out.eigenvalues(n - 1))});
  const Eigen::MatrixXd residual =
      J * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = residual.col(k).norm();
    if (r > tol_eig * scale)
      throw numerical_error("eig_sym: residual " + std::to_string(r) + " exceeds tolerance at column " +
                            std::to_string(k));
  }
  Eigen::MatrixXd gram = out.eigenvectors.transpose() * out.eigenvectors;
  gram.diagonal().array() -= 1.0;
  const double orth = gram.cwiseAbs().maxCoeff();
  if (orth > tol_orth)
    throw numerical_error("eig_sym: orthonormality defect " + std::to_string(orth) +
                          " exceeds tolerance");
  return out;
}

double semicircle_pdf(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double stieltjes_m(double s) {
  if (!(s >= 2.0))
    throw domain_error("stieltjes_m: defined for s >= 2, got " + std::to_string(s));
  return 2.0 / (s + std::sqrt(s * s - 4.0));
}

std::vector<Eigen::Index> abs_top_order(const Eigen::VectorXd& ascending) {
  const Eigen::Index n = ascending.size();
  if (n == 0) throw domain_error("abs_top_order: empty spectrum");
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(n));
  Eigen::Index lo = 0, hi = n - 1;
  while (lo <= hi) {
    if (std::abs(ascending(hi)) >= std::abs(ascending(lo)))
      order.push_back(hi--);
    else
      order.push_back(lo++);
  }
  return order;
}

SpectralData abs_top_view(const SpectralData& spectral) {
  const auto order = abs_top_order(spectral.eigenvalues);
  SpectralData out;
  out.source_dim = spectral.source_dim;
  const Eigen::Index n = spectral.eigenvalues.size();
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(spectral.eigenvectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = spectral.eigenvalues(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = spectral.eigenvectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

GapEdge gap_edge_from_string(const std::string& name) {
  if (name == "bottom") return GapEdge::bottom;
  if (name == "top") return GapEdge::top;
  if (name == "abs-top") return GapEdge::abs_top;
  throw config_error("unknown gap edge '" + name + "'");
}

const char* to_string(GapEdge which) {
  switch (which) {
    case GapEdge::bottom: return "bottom";
    case GapEdge::top: return "top";
    case GapEdge::abs_top: return "abs-top";
  }
  throw config_error("unknown gap edge");
}

double rescaled_gap(const Eigen::VectorXd& ascending, GapEdge which) {
  const Eigen::Index n = ascending.size();
  if (n < 2) throw domain_error("rescaled_gap: need at least two eigenvalues");
  const double scale = std::pow(static_cast<double>(n), 2.0 / 3.0);
  switch (which) {
    case GapEdge::bottom: return scale * (ascending(1) - ascending(0));
    case GapEdge::top: return scale * (ascending(n - 1) - ascending(n - 2));
    case GapEdge::abs_top: {
      const auto order = abs_top_order(ascending);
      return scale * (std::abs(ascending(order[0])) - std::abs(ascending(order[1])));
    }
  }
  throw config_error("unknown gap edge");
}

std::vector<double> edge_gap_stats(const WignerSpec& spec, int trials, GapEdge which,
                                   int workers) {
  if (trials <= 0) throw domain_error("edge_gap_stats: trials must be positive");
  if (spec.N < 2) throw domain_error("edge_gap_stats: dimension must be at least 2");
  std::vector<double> gaps(static_cast<std::size_t>(trials));
  parallel_for(gaps.size(), workers, [&](std::size_t i) {
    WignerSpec trial = spec;
    trial.seed = rng::key_of(spec.seed, static_cast<std::uint64_t>(i));
    const Eigen::MatrixXd J = sample_wigner(trial);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw numerical_error("edge_gap_stats: eigensolver failed at trial " + std::to_string(i));
    gaps[i] = rescaled_gap(solver.eigenvalues(), which);
  });
  return gaps;
}

double median(std::vector<double> values) {
  if (values.empty()) throw domain_error("median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace sskdyn
