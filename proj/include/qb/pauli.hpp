#pragma once

#include <bit>

#include "qb/hilbert.hpp"

namespace qb {

// Hermitian N-qubit Pauli operator P = i^{|x&z|} X^x Z^z. With this phase
// convention <psi|P|psi> is real for every normalized state.
//
// Matrix action in the library basis: Z_j has eigenvalue +1 on bit 1, so
//   P|s> = i^{|x&z|} (-1)^{|z & ~s|} |s ^ x>.
struct PauliString {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
};

inline int popcount(std::uint64_t v) { return std::popcount(v); }

// <psi|P|psi>; real up to rounding, the real part is returned.
double pauli_expectation(const StateVector& psi, const PauliString& p);

// Dense matrix of the Hermitian Pauli (small N only; oracle/test use).
Eigen::MatrixXcd pauli_matrix(int n_sites, const PauliString& p);

// Canonical (non-Hermitian base) form op = i^{phase} X^x Z^z, phase mod 4.
// Exact integer arithmetic; the workhorse behind sign tracking in the
// stabilizer tableau.
struct CanonicalPauli {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase = 0;  // exponent of i, mod 4

  static CanonicalPauli from_hermitian(std::uint64_t x, std::uint64_t z,
                                       int sign_bit) {
    // (-1)^sign * i^{|x&z|} X^x Z^z
    return CanonicalPauli{x, z, (2 * sign_bit + popcount(x & z)) & 3};
  }

  // (i^p1 X^x1 Z^z1)(i^p2 X^x2 Z^z2): moving Z^z1 past X^x2 costs
  // (-1)^{|z1 & x2|}.
  CanonicalPauli operator*(const CanonicalPauli& o) const {
    return CanonicalPauli{x ^ o.x, z ^ o.z,
                          (phase + o.phase + 2 * popcount(z & o.x)) & 3};
  }

  // Requires the operator to be Hermitian; returns 0 for +P, 1 for -P.
  int hermitian_sign() const {
    const int rel = (phase - popcount(x & z)) & 3;
    require(rel % 2 == 0, "CanonicalPauli: operator is not Hermitian");
    return rel >> 1;
  }
};

}  // namespace qb
