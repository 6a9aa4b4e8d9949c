#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "sskdyn/ensembles.hpp"
#include "sskdyn/errors.hpp"

using namespace sskdyn;

namespace {

WignerSpec make_spec(Eigen::Index N, EntryLaw law, std::uint64_t seed) {
  WignerSpec spec;
  spec.N = N;
  spec.entry_law = law;
  spec.seed = seed;
  return spec;
}

std::string temp_path(const char* name) {
  return std::string("/tmp/sskdyn_test_") + name;
}

}  // namespace

TEST_CASE("sample_wigner is deterministic in the spec and sensitive to the seed") {
  const auto spec = make_spec(64, EntryLaw::gaussian_orthogonal, 12345);
  const Eigen::MatrixXd a = sample_wigner(spec);
  const Eigen::MatrixXd b = sample_wigner(spec);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  auto other = spec;
  other.seed = 12346;
  CHECK((a - sample_wigner(other)).cwiseAbs().maxCoeff() > 0.0);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("larger samples extend smaller ones entrywise") {
  // entry (i,j) depends only on (seed,i,j); the 1/sqrt(N) scale differs
  const auto small = make_spec(100, EntryLaw::gaussian_orthogonal, 9);
  const auto large = make_spec(200, EntryLaw::gaussian_orthogonal, 9);
  const Eigen::MatrixXd a = sample_wigner(small) * std::sqrt(100.0);
  const Eigen::MatrixXd b = sample_wigner(large).topLeftCorner(100, 100) * std::sqrt(200.0);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("moment audit per entry law at N = 2000") {
  const Eigen::Index N = 2000;

  SUBCASE("gaussian orthogonal") {
    const auto spec = make_spec(N, EntryLaw::gaussian_orthogonal, 3);
    const MomentAudit audit = moment_audit(sample_wigner(spec), spec);
    CHECK(audit.n_entries == N * (N + 1) / 2);
    CHECK(std::abs(audit.mean) < 0.01);
    // mixture of off-diagonal variance 1 with N diagonal entries of variance 2
    CHECK(audit.variance == doctest::Approx(1.0).epsilon(0.03));
    CHECK(audit.fourth_moment == doctest::Approx(3.0).epsilon(0.05));
    CHECK(audit.symmetry_defect == 0.0);
  }

  SUBCASE("gaussian unit diagonal") {
    const auto spec = make_spec(N, EntryLaw::gaussian_unit_diag, 4);
    const MomentAudit audit = moment_audit(sample_wigner(spec), spec);
    CHECK(std::abs(audit.mean) < 0.01);
    CHECK(audit.variance == doctest::Approx(1.0).epsilon(0.03));
    CHECK(audit.fourth_moment == doctest::Approx(3.0).epsilon(0.05));
  }

  SUBCASE("rademacher") {
    const auto spec = make_spec(N, EntryLaw::rademacher, 5);
    const Eigen::MatrixXd J = sample_wigner(spec);
    const MomentAudit audit = moment_audit(J, spec);
    CHECK(audit.variance == doctest::Approx(1.0).epsilon(0.01));
    CHECK(audit.fourth_moment == doctest::Approx(1.0).epsilon(1e-12));
    // every rescaled entry is exactly +-1
    CHECK((J * std::sqrt(static_cast<double>(N))).cwiseAbs().minCoeff() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("uniform symmetric") {
    const auto spec = make_spec(N, EntryLaw::uniform_sym, 6);
    const MomentAudit audit = moment_audit(sample_wigner(spec), spec);
    CHECK(audit.variance == doctest::Approx(1.0).epsilon(0.02));
    CHECK(audit.fourth_moment == doctest::Approx(1.8).epsilon(0.03));
  }
}

TEST_CASE("single-entry audit is exact for rademacher") {
  const auto spec = make_spec(1, EntryLaw::rademacher, 7);
  const MomentAudit audit = moment_audit(sample_wigner(spec), spec);
  CHECK(audit.n_entries == 1);
  CHECK(audit.variance == 0.0);  // central variance of one draw
  CHECK(audit.fourth_moment == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diagonal variance override rescales only the diagonal") {
  auto unit = make_spec(80, EntryLaw::gaussian_unit_diag, 11);
  unit.diagonal_variance = 1.0;
  auto wide = unit;
  wide.diagonal_variance = 4.0;
  const Eigen::MatrixXd a = sample_wigner(unit);
  const Eigen::MatrixXd b = sample_wigner(wide);
  CHECK((b.diagonal() - 2.0 * a.diagonal()).cwiseAbs().maxCoeff() < 1e-15);
  Eigen::MatrixXd off = b - a;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("resolved_diagonal_variance defaults and rejections") {
  WignerSpec spec = make_spec(10, EntryLaw::gaussian_orthogonal, 0);
  CHECK(resolved_diagonal_variance(spec) == 2.0);
  spec.entry_law = EntryLaw::rademacher;
  CHECK(resolved_diagonal_variance(spec) == 1.0);
  spec.diagonal_variance = 3.5;
  CHECK(resolved_diagonal_variance(spec) == 3.5);
  spec.diagonal_variance = 0.0;
  CHECK_THROWS_AS(resolved_diagonal_variance(spec), config_error);
  CHECK_THROWS_AS(sample_wigner(make_spec(0, EntryLaw::rademacher, 0)), domain_error);
}

TEST_CASE("entry law names round-trip") {
  for (EntryLaw law : {EntryLaw::gaussian_orthogonal, EntryLaw::gaussian_unit_diag,
                       EntryLaw::rademacher, EntryLaw::uniform_sym})
    CHECK(entry_law_from_string(to_string(law)) == law);
  CHECK_THROWS_AS(entry_law_from_string("triangular"), config_error);
}

TEST_CASE("sphere-uniform starts sit on the sphere and are deterministic") {
  InitialCondition cond;
  cond.kind = InitialKind::sphere_uniform;
  cond.seed = 21;
  const Eigen::VectorXd x = sample_initial(cond, 50);
  CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((x - sample_initial(cond, 50)).cwiseAbs().maxCoeff() == 0.0);

  cond.radius = 2.5;
  CHECK(sample_initial(cond, 50).norm() == doctest::Approx(2.5).epsilon(1e-12));
  cond.radius = -1.0;
  CHECK_THROWS_AS(sample_initial(cond, 50), domain_error);
}

TEST_CASE("iid starts follow the requested law") {
  InitialCondition cond;
  cond.kind = InitialKind::iid;
  cond.iid_law = IidLaw::gaussian_std;
  cond.seed = 22;
  const Eigen::Index N = 20000;
  const Eigen::VectorXd g = sample_initial(cond, N);
  CHECK(std::abs(g.mean()) < 0.03);
  CHECK(g.squaredNorm() / static_cast<double>(N) == doctest::Approx(1.0).epsilon(0.03));

  cond.iid_law = IidLaw::rademacher;
  cond.radius = 3.0;
  const Eigen::VectorXd r = sample_initial(cond, 1000);
  CHECK(r.cwiseAbs().minCoeff() == 3.0);
  CHECK(r.cwiseAbs().maxCoeff() == 3.0);
  CHECK(std::abs(r.sum() / 3.0) < 110.0);  // roughly balanced signs
}

TEST_CASE("first sphere coordinate is asymptotically standard normal") {
  // sqrt(N) x_1 over many starts: variance near 1, rarely tiny
  const Eigen::Index N = 400;
  const int draws = 4000;
  InitialCondition cond;
  cond.kind = InitialKind::sphere_uniform;
  double sum = 0.0, sum2 = 0.0;
  int above = 0;
  for (int d = 0; d < draws; ++d) {
    cond.seed = 1000 + static_cast<std::uint64_t>(d);
    const double h = std::sqrt(static_cast<double>(N)) * sample_initial(cond, N)(0);
    sum += h;
    sum2 += h * h;
    if (std::abs(h) > 0.1) ++above;
  }
  const double mean = sum / draws;
  const double var = sum2 / draws - mean * mean;
  CHECK(var > 0.85);
  CHECK(var < 1.15);
  CHECK(static_cast<double>(above) / draws > 0.9);
}

TEST_CASE("wigm files round-trip bitwise") {
  const auto spec = make_spec(37, EntryLaw::uniform_sym, 33);
  const Eigen::MatrixXd J = sample_wigner(spec);
  const std::string path = temp_path("roundtrip.wigm");
  write_wigm(path, J);
  const Eigen::MatrixXd back = read_wigm(path);
  REQUIRE(back.rows() == 37);
  CHECK((J - back).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("wigm rejects malformed files") {
  CHECK_THROWS_AS(read_wigm(temp_path("missing.wigm")), io_error);

  const std::string bad_magic = temp_path("bad_magic.wigm");
  {
    std::ofstream out(bad_magic, std::ios::binary);
    out.write("NOPE", 4);
  }
  CHECK_THROWS_AS(read_wigm(bad_magic), io_error);
  std::remove(bad_magic.c_str());

  const std::string truncated = temp_path("truncated.wigm");
  write_wigm(truncated, Eigen::MatrixXd::Identity(8, 8));
  {
    std::ifstream in(truncated, std::ios::binary);
    std::string head(100, '\0');
    in.read(head.data(), 100);
    std::ofstream out(truncated, std::ios::binary | std::ios::trunc);
    out.write(head.data(), 100);
  }
  CHECK_THROWS_AS(read_wigm(truncated), io_error);
  std::remove(truncated.c_str());

  const std::string bad_version = temp_path("bad_version.wigm");
  write_wigm(bad_version, Eigen::MatrixXd::Identity(4, 4));
  {
    std::fstream io(bad_version, std::ios::binary | std::ios::in | std::ios::out);
    io.seekp(4);
    const std::uint32_t v = 99;
    io.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  CHECK_THROWS_AS(read_wigm(bad_version), io_error);
  std::remove(bad_version.c_str());

  CHECK_THROWS_AS(write_wigm(temp_path("rect.wigm"), Eigen::MatrixXd::Zero(3, 4)), domain_error);
}
