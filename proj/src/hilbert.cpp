#include "qb/hilbert.hpp"

namespace qb {

StateVector domain_wall_state(int n_b) {
  require(n_b >= 1, "domain_wall_state: n_b must be >= 1");
  StateVector psi(2 * n_b);
  psi.amplitudes[(1LL << n_b) - 1] = 1.0;
  return psi;
}

double local_magnetization(const StateVector& state, int site) {
  require(site >= 0 && site < state.n_sites,
          "local_magnetization: site out of range");
  double m = 0.0;
  const auto& a = state.amplitudes;
  for (std::int64_t s = 0; s < a.size(); ++s) {
    m += std::norm(a[s]) * basis::spin(static_cast<std::uint64_t>(s), site);
  }
  return m;
}

DensityMatrix partial_trace_battery(const StateVector& state) {
  require(state.n_sites % 2 == 0, "partial_trace_battery: N must be even");
  const int n_b = state.n_sites / 2;
  const std::int64_t dim_b = 1LL << n_b;
  const std::int64_t dim_c = 1LL << n_b;
  DensityMatrix rho = DensityMatrix::Zero(dim_b, dim_b);
  const auto& a = state.amplitudes;
  for (std::int64_t b = 0; b < dim_b; ++b) {
    for (std::int64_t bp = b; bp < dim_b; ++bp) {
      Complex acc = 0.0;
      for (std::int64_t c = 0; c < dim_c; ++c) {
        acc += a[(b << n_b) | c] * std::conj(a[(bp << n_b) | c]);
      }
      rho(b, bp) = acc;
      rho(bp, b) = std::conj(acc);
    }
  }
  return rho;
}

Spectrum hermitian_eig(const Eigen::MatrixXcd& matrix) {
  require(matrix.rows() == matrix.cols(), "hermitian_eig: matrix not square");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  require((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix);
  require(solver.info() == Eigen::Success, "hermitian_eig: solver failed");
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

double purity(const DensityMatrix& rho) {
  return (rho * rho).trace().real();
}

StateVector random_state(int n_sites, RngStream& rng) {
  StateVector psi(n_sites);
  for (std::int64_t s = 0; s < psi.dim(); ++s) {
    psi.amplitudes[s] = Complex(rng.normal(), rng.normal());
  }
  psi.amplitudes.normalize();
  return psi;
}

void apply_single_site(StateVector& state, int site, const Eigen::Matrix2cd& u) {
  require(site >= 0 && site < state.n_sites, "apply_single_site: bad site");
  const std::uint64_t mask = 1ULL << site;
  auto& a = state.amplitudes;
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(a.size()); ++s) {
    if (s & mask) continue;
    const Complex a0 = a[s];
    const Complex a1 = a[s | mask];
    a[s] = u(0, 0) * a0 + u(0, 1) * a1;
    a[s | mask] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void apply_two_site(StateVector& state, int site_a, int site_b,
                    const Eigen::Matrix4cd& u) {
  require(site_a != site_b, "apply_two_site: sites must differ");
  require(site_a >= 0 && site_a < state.n_sites && site_b >= 0 &&
              site_b < state.n_sites,
          "apply_two_site: site out of range");
  const std::uint64_t ma = 1ULL << site_a;
  const std::uint64_t mb = 1ULL << site_b;
  auto& a = state.amplitudes;
  Complex v[4];
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(a.size()); ++s) {
    if (s & (ma | mb)) continue;
    const std::uint64_t idx[4] = {s, s | ma, s | mb, s | ma | mb};
    for (int l = 0; l < 4; ++l) v[l] = a[idx[l]];
    for (int l = 0; l < 4; ++l) {
      a[idx[l]] = u(l, 0) * v[0] + u(l, 1) * v[1] + u(l, 2) * v[2] + u(l, 3) * v[3];
    }
  }
}

StateVector tensor_product(const StateVector& low, const StateVector& high) {
  StateVector out(low.n_sites + high.n_sites);
  for (std::int64_t h = 0; h < high.dim(); ++h) {
    for (std::int64_t l = 0; l < low.dim(); ++l) {
      out.amplitudes[(h << low.n_sites) | l] =
          high.amplitudes[h] * low.amplitudes[l];
    }
  }
  return out;
}

}  // namespace qb
