#include "sskdyn/ensembles.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "sskdyn/errors.hpp"
#include "sskdyn/rng.hpp"

namespace sskdyn {

const char* to_string(EntryLaw law) {
  switch (law) {
    case EntryLaw::gaussian_orthogonal: return "gaussian-orthogonal";
    case EntryLaw::gaussian_unit_diag: return "gaussian-unit-diag";
    case EntryLaw::rademacher: return "rademacher";
    case EntryLaw::uniform_sym: return "uniform-sym";
  }
  throw config_error("unknown entry law");
}

EntryLaw entry_law_from_string(const std::string& name) {
  if (name == "gaussian-orthogonal") return EntryLaw::gaussian_orthogonal;
  if (name == "gaussian-unit-diag") return EntryLaw::gaussian_unit_diag;
  if (name == "rademacher") return EntryLaw::rademacher;
  if (name == "uniform-sym") return EntryLaw::uniform_sym;
  throw config_error("unknown entry law '" + name + "'");
}

double resolved_diagonal_variance(const WignerSpec& spec) {
  if (spec.diagonal_variance < 0.0)
    return spec.entry_law == EntryLaw::gaussian_orthogonal ? 2.0 : 1.0;
  if (spec.diagonal_variance == 0.0)
    throw config_error("diagonal_variance must be positive");
  return spec.diagonal_variance;
}

namespace {

double draw_entry(EntryLaw law, std::uint64_t key) {
  switch (law) {
    case EntryLaw::gaussian_orthogonal:
    case EntryLaw::gaussian_unit_diag: return rng::gaussian(key);
    case EntryLaw::rademacher: return rng::rademacher(key);
    case EntryLaw::uniform_sym: return rng::uniform_sym(key);
  }
  throw config_error("unknown entry law");
}

}  // namespace

Eigen::MatrixXd sample_wigner(const WignerSpec& spec) {
  if (spec.N <= 0)
    throw domain_error("sample_wigner: dimension must be positive, got " +
                       std::to_string(spec.N));
  const double diag_sd = std::sqrt(resolved_diagonal_variance(spec));
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.N));
  Eigen::MatrixXd J(spec.N, spec.N);
  for (Eigen::Index i = 0; i < spec.N; ++i) {
    for (Eigen::Index j = i; j < spec.N; ++j) {
      const std::uint64_t key = rng::key_of(spec.seed, static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(j));
      double z = draw_entry(spec.entry_law, key);
      if (i == j) z *= diag_sd;
      J(i, j) = z * scale;
      J(j, i) = J(i, j);
    }
  }
  return J;
}

Eigen::VectorXd sample_initial(const InitialCondition& cond, Eigen::Index N) {
  if (N <= 0)
    throw domain_error("sample_initial: dimension must be positive, got " + std::to_string(N));
  if (!(cond.radius > 0.0))
    throw domain_error("sample_initial: radius must be positive");
  Eigen::VectorXd x(N);
  if (cond.kind == InitialKind::sphere_uniform) {
    for (Eigen::Index i = 0; i < N; ++i)
      x(i) = rng::gaussian(rng::key_of(cond.seed, static_cast<std::uint64_t>(i)));
    const double norm = x.norm();
    if (norm == 0.0) throw numerical_error("sample_initial: degenerate gaussian draw");
    x *= cond.radius / norm;
    return x;
  }
  for (Eigen::Index i = 0; i < N; ++i) {
    const std::uint64_t key = rng::key_of(cond.seed, static_cast<std::uint64_t>(i));
    x(i) = cond.iid_law == IidLaw::gaussian_std ? rng::gaussian(key) : rng::rademacher(key);
  }
  return x * cond.radius;
}

MomentAudit moment_audit(const Eigen::MatrixXd& sample, const WignerSpec& spec) {
  if (sample.rows() != spec.N || sample.cols() != spec.N)
    throw domain_error("moment_audit: sample shape does not match the spec dimension");
  const double root_n = std::sqrt(static_cast<double>(spec.N));
  MomentAudit audit;
  audit.n_entries = spec.N * (spec.N + 1) / 2;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (Eigen::Index i = 0; i < spec.N; ++i) {
    for (Eigen::Index j = i; j < spec.N; ++j) {
      const double z = sample(i, j) * root_n;
      sum += z;
      sum2 += z * z;
      sum4 += z * z * z * z;
    }
  }
  const double n = static_cast<double>(audit.n_entries);
  audit.mean = sum / n;
  audit.variance = sum2 / n - audit.mean * audit.mean;
  audit.fourth_moment = sum4 / n;
  audit.symmetry_defect = (sample - sample.transpose()).cwiseAbs().maxCoeff();
  return audit;
}

namespace {

constexpr char wigm_magic[4] = {'W', 'I', 'G', 'M'};
constexpr std::uint32_t wigm_version = 1;

}  // namespace

void write_wigm(const std::string& path, const Eigen::MatrixXd& J) {
  if (J.rows() != J.cols()) throw domain_error("write_wigm: matrix must be square");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("write_wigm: cannot open '" + path + "' for writing");
  out.write(wigm_magic, 4);
  const std::uint32_t version = wigm_version;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  const std::uint64_t n = static_cast<std::uint64_t>(J.rows());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  std::vector<double> row(J.cols());
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    for (Eigen::Index j = 0; j < J.cols(); ++j) row[static_cast<std::size_t>(j)] = J(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw io_error("write_wigm: short write to '" + path + "'");
}

Eigen::MatrixXd read_wigm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("read_wigm: cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, wigm_magic, 4) != 0)
    throw io_error("read_wigm: '" + path + "' is not a WIGM file");
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  if (!in || version != wigm_version)
    throw io_error("read_wigm: unsupported version in '" + path + "'");
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n == 0 || n > (1ULL << 20))
    throw io_error("read_wigm: bad dimension in '" + path + "'");
  const Eigen::Index N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd J(N, N);
  std::vector<double> row(n);
  for (Eigen::Index i = 0; i < N; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw io_error("read_wigm: truncated payload in '" + path + "'");
    for (Eigen::Index j = 0; j < N; ++j) J(i, j) = row[static_cast<std::size_t>(j)];
  }
  return J;
}

}  // namespace sskdyn
