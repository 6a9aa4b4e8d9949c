#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sskdyn/ensembles.hpp"

namespace sskdyn {

struct SpectralData {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalues[i], orthonormal
  Eigen::Index source_dim = 0;
};

// Full symmetric eigendecomposition with validated residuals and orthonormality.
// Sign convention: in each eigenvector the entry of largest magnitude is positive,
// ties resolved to the lowest index.
SpectralData eig_sym(const Eigen::MatrixXd& J, double tol_eig = 1e-10,
                     double tol_orth = 1e-10);

// Density of the semicircle law on [-2, 2]; zero outside.
double semicircle_pdf(double x);

// Stieltjes transform m(s) = (s - sqrt(s^2 - 4)) / 2 for s >= 2 (m(2) = 1).
double stieltjes_m(double s);

// Indices into an ascending spectrum ordered by descending |eigenvalue|,
// ties resolved toward the positive edge.
std::vector<Eigen::Index> abs_top_order(const Eigen::VectorXd& ascending);

// Copy of the decomposition reordered by descending |eigenvalue|.
SpectralData abs_top_view(const SpectralData& spectral);

enum class GapEdge { bottom, top, abs_top };

GapEdge gap_edge_from_string(const std::string& name);
const char* to_string(GapEdge which);

// N^(2/3) times the spectral gap at the chosen edge.
double rescaled_gap(const Eigen::VectorXd& ascending, GapEdge which);

// One rescaled gap per trial; trial i redraws with seed derived from
// (spec.seed, i). Uses an eigenvalues-only solve.
std::vector<double> edge_gap_stats(const WignerSpec& spec, int trials, GapEdge which,
                                   int workers = 1);

double median(std::vector<double> values);

}  // namespace sskdyn
