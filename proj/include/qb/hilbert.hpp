#pragma once

#include <Eigen/Dense>

#include "qb/common.hpp"

namespace qb {

// Single authoritative basis convention for the whole library.
//
//   * site i <-> bit i of the computational-basis index (site 0 is the
//     least significant bit),
//   * bit 1 = |up>   (sigma_z eigenvalue +1),
//     bit 0 = |down> (sigma_z eigenvalue -1),
//   * sites [0, n_b)   form the charger,
//     sites [n_b, 2n_b) form the battery.
//
// No other module re-derives bit order; everything routes through these
// helpers.
namespace basis {

inline int bit(std::uint64_t index, int site) {
  return static_cast<int>((index >> site) & 1ULL);
}

// sigma_z eigenvalue of `site` in basis state `index`: +1 or -1.
inline int spin(std::uint64_t index, int site) { return 2 * bit(index, site) - 1; }

inline bool is_battery_site(int site, int n_b) { return site >= n_b; }

// Battery sites occupy the high bits; this extracts their pattern.
inline std::uint64_t battery_bits(std::uint64_t index, int n_b) {
  return index >> n_b;
}

inline std::uint64_t charger_bits(std::uint64_t index, int n_b) {
  return index & ((1ULL << n_b) - 1);
}

}  // namespace basis

using DensityMatrix = Eigen::MatrixXcd;

struct StateVector {
  int n_sites = 0;
  Eigen::VectorXcd amplitudes;

  StateVector() = default;
  explicit StateVector(int n)
      : n_sites(n), amplitudes(Eigen::VectorXcd::Zero(1LL << n)) {
    require(n >= 1 && n <= 30, "StateVector: unsupported site count");
  }

  std::int64_t dim() const { return amplitudes.size(); }
  double norm2() const { return amplitudes.squaredNorm(); }
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns, orthonormal
};

// |up>^{n_b} (x) |down>^{n_b}: charger fully excited, battery in its
// ground state. The only nonzero amplitude sits at index 2^{n_b} - 1.
StateVector domain_wall_state(int n_b);

// <sigma_z^site> of a normalized state; in [-1, 1].
double local_magnetization(const StateVector& state, int site);

// Reduced density matrix of the battery (high-bit half of an even chain).
DensityMatrix partial_trace_battery(const StateVector& state);

// Dense Hermitian eigendecomposition, eigenvalues ascending. Throws on
// visibly non-Hermitian input.
Spectrum hermitian_eig(const Eigen::MatrixXcd& matrix);

double purity(const DensityMatrix& rho);

// Haar-random pure state of n sites (Gaussian amplitudes, normalized).
StateVector random_state(int n_sites, RngStream& rng);

// In-place application of a 2x2 unitary to one site. The matrix acts on
// (|down>, |up>) = (bit 0, bit 1).
void apply_single_site(StateVector& state, int site, const Eigen::Matrix2cd& u);

// In-place application of a 4x4 unitary on sites (a, b); local index is
// bit_a + 2*bit_b.
void apply_two_site(StateVector& state, int site_a, int site_b,
                    const Eigen::Matrix4cd& u);

// Kronecker combination: result bit layout is [low: first factor][high:
// second factor], matching the site ordering used everywhere else.
StateVector tensor_product(const StateVector& low, const StateVector& high);

}  // namespace qb
