#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace sskdyn {

enum class EntryLaw { gaussian_orthogonal, gaussian_unit_diag, rademacher, uniform_sym };

const char* to_string(EntryLaw law);
EntryLaw entry_law_from_string(const std::string& name);

struct WignerSpec {
  Eigen::Index N = 0;
  EntryLaw entry_law = EntryLaw::gaussian_orthogonal;
  // < 0 means "use the law default": 2 for gaussian-orthogonal, 1 otherwise
  double diagonal_variance = -1.0;
  std::uint64_t seed = 0;
};

double resolved_diagonal_variance(const WignerSpec& spec);

// Symmetric N x N matrix with independent entries above the diagonal, scaled by
// 1/sqrt(N). Entry (i,j), i <= j, is a pure function of (seed, i, j), so samples
// are identical across worker counts and larger N extend smaller ones entrywise.
Eigen::MatrixXd sample_wigner(const WignerSpec& spec);

enum class InitialKind { sphere_uniform, iid };
enum class IidLaw { gaussian_std, rademacher };

struct InitialCondition {
  InitialKind kind = InitialKind::sphere_uniform;
  double radius = 1.0;
  IidLaw iid_law = IidLaw::gaussian_std;
  std::uint64_t seed = 0;
};

Eigen::VectorXd sample_initial(const InitialCondition& cond, Eigen::Index N);

struct MomentAudit {
  double mean = 0.0;
  double variance = 0.0;
  double fourth_moment = 0.0;
  double symmetry_defect = 0.0;
  Eigen::Index n_entries = 0;
};

// Empirical moments of the sqrt(N)-rescaled upper-triangular entries
// (diagonal included) plus the worst symmetry violation.
MomentAudit moment_audit(const Eigen::MatrixXd& sample, const WignerSpec& spec);

// Binary matrix container: magic "WIGM", u32 version, u64 N, row-major float64.
void write_wigm(const std::string& path, const Eigen::MatrixXd& J);
Eigen::MatrixXd read_wigm(const std::string& path);

}  // namespace sskdyn
