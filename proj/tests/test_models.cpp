#include <doctest.h>

#include "qb/models.hpp"
#include "qb/observables.hpp"

using namespace qb;

namespace {

double commutator_norm(const Eigen::MatrixXcd& a, const Eigen::VectorXd& diag) {
  const Eigen::MatrixXcd d = diag.cast<Complex>().asDiagonal();
  return (a * d - d * a).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("battery diagonal: spectrum and degeneracies") {
  const Eigen::VectorXd one = battery_energies(1, SpinUnit::Half);
  CHECK(one[0] == doctest::Approx(-0.5));
  CHECK(one[1] == doctest::Approx(0.5));

  const Eigen::VectorXd two = battery_energies(2, SpinUnit::Half);
  CHECK(two[0] == doctest::Approx(-1.0));
  CHECK(two[1] == doctest::Approx(0.0));
  CHECK(two[2] == doctest::Approx(0.0));
  CHECK(two[3] == doctest::Approx(1.0));

  // sigma_z units: levels {-3,-1,1,3} with degeneracies {1,3,3,1}
  const Eigen::VectorXd three = battery_energies(3, SpinUnit::SigmaZ);
  std::map<int, int> degeneracy;
  for (int b = 0; b < 8; ++b) degeneracy[static_cast<int>(three[b])]++;
  CHECK(degeneracy[-3] == 1);
  CHECK(degeneracy[-1] == 3);
  CHECK(degeneracy[1] == 3);
  CHECK(degeneracy[3] == 1);
}

TEST_CASE("xxz matrix elements and U(1) symmetry") {
  const Eigen::MatrixXcd h = build_xxz(2, 1.0, 1.0);
  CHECK(h(1, 2).real() == doctest::Approx(-0.5));  // <up down|H|down up>
  CHECK(h(3, 3).real() == doctest::Approx(-0.25));
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::MatrixXcd h6 = build_xxz(6, 1.3, 0.7);
  CHECK((h6 - h6.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(commutator_norm(h6, total_sz_diagonal(6)) == doctest::Approx(0.0));

  CHECK_THROWS_AS(build_xxz(1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("jordan-wigner operators anticommute canonically") {
  const int n = 4;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXcd ci = jw_annihilation(n, i);
    for (int j = i; j < n; ++j) {
      const Eigen::MatrixXcd cj_dag = jw_annihilation(n, j).adjoint();
      const Eigen::MatrixXcd anti = ci * cj_dag + cj_dag * ci;
      const Eigen::MatrixXcd expected = i == j ? id : Eigen::MatrixXcd::Zero(16, 16);
      CHECK((anti - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXcd cj = jw_annihilation(n, j);
      CHECK((ci * cj + cj * ci).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("csyk Hamiltonian: Hermitian, U(1), and matches the JW oracle") {
  RngStream rng(123);
  CsykCouplings couplings;
  const Eigen::MatrixXcd h = build_csyk(6, 1.0, rng, &couplings);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(commutator_norm(h, total_sz_diagonal(6)) < 1e-10);

  // independent route: assemble from dense JW operator products
  const int n = 6;
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
  const double norm = 1.0 / std::sqrt(std::pow(n, 3));
  std::vector<Eigen::MatrixXcd> c(n), cd(n);
  for (int i = 0; i < n; ++i) {
    c[i] = jw_annihilation(n, i);
    cd[i] = c[i].adjoint();
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
          ref += norm * couplings.at(i, j, k, l) * cd[i] * cd[j] * c[k] * c[l];
  CHECK((ref - h).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(build_csyk(3, 1.0, rng), std::invalid_argument);
}

TEST_CASE("csyk coupling statistics and symmetry relations") {
  RngStream rng(55);
  const double j = 1.4;
  double sum_re = 0.0, sum_im = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  int draws = 0;
  while (count < 20000) {
    const CsykCouplings c = sample_csyk_couplings(6, j, rng);
    ++draws;
    // antisymmetry under index swaps
    CHECK(c.at(1, 0, 2, 3) == -c.at(0, 1, 2, 3));
    CHECK(c.at(0, 1, 3, 2) == -c.at(0, 1, 2, 3));
    CHECK(c.at(2, 3, 0, 1) == std::conj(c.at(0, 1, 2, 3)));
    for (const auto& [key, v] : c.values) {
      // keep only canonical entries (i,j) <= (k,l); the map also stores
      // the conjugate mirrors
      const int l = static_cast<int>(key % 6), k = static_cast<int>(key / 6 % 6);
      const int jj = static_cast<int>(key / 36 % 6), i = static_cast<int>(key / 216);
      if (std::make_pair(i, jj) > std::make_pair(k, l)) continue;
      sum_re += v.real();
      sum_im += v.imag();
      sum_sq += std::norm(v);
      ++count;
    }
  }
  const double mean_re = sum_re / count;
  const double mean_im = sum_im / count;
  const double var = sum_sq / count;
  // 5 sigma standard error of the mean; variance within 5% of J^2
  const double se = j / std::sqrt(static_cast<double>(count));
  CHECK(std::abs(mean_re) < 5.0 * se);
  CHECK(std::abs(mean_im) < 5.0 * se);
  CHECK(var == doctest::Approx(j * j).epsilon(0.05));
  (void)draws;
}

TEST_CASE("xy chain limits and spectrum") {
  // gamma = 1: pure sigma_x sigma_x of strength J'/2 per bond
  const Eigen::MatrixXcd ising = build_xy(2, 1.0, 1.0, 0.0);
  CHECK(ising(0, 3).real() == doctest::Approx(0.5));
  CHECK(ising(1, 2).real() == doctest::Approx(0.5));

  // gamma = 0, h' = 0: XX chain, N=2 spectrum {-1/2, 0, 0, 1/2}
  const Spectrum s = hermitian_eig(build_xy(2, 1.0, 0.0, 0.0));
  CHECK(s.eigenvalues[0] == doctest::Approx(-0.5));
  CHECK(s.eigenvalues[1] == doctest::Approx(0.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(0.0));
  CHECK(s.eigenvalues[3] == doctest::Approx(0.5));

  // the field enters as h'/2 sum sigma_z
  const Eigen::MatrixXcd with_field = build_xy(2, 1.0, 0.3, 0.8);
  CHECK((with_field - build_xy(2, 1.0, 0.3, 0.0) -
         Eigen::MatrixXcd(
             (0.4 * total_sz_diagonal(2)).cast<Complex>().asDiagonal()))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("two-qubit gate generators and their symmetries") {
  const Eigen::Matrix4cd h3 = build_gate2_h(Gate2Kind::Heisenberg, 0.9);
  const Eigen::Matrix4cd h2 = build_gate2_h(Gate2Kind::XX, 0.9);
  Eigen::Matrix4cd mz = Eigen::Matrix4cd::Zero();
  mz.diagonal() << -2.0, 0.0, 0.0, 2.0;  // sigma_z (x) I + I (x) sigma_z
  CHECK((h3 * mz - mz * h3).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((h2 * mz - mz * h2).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  const Eigen::Matrix4cd h1 = build_gate2_h(Gate2Kind::Ising, 0.9);
  CHECK((h1 * mz - mz * h1).cwiseAbs().maxCoeff() > 0.1);
}
