#pragma once

#include <map>

#include "qb/hilbert.hpp"

namespace qb {

// Coefficient multiplying sigma_z in the battery/charger Hamiltonians.
// Half reproduces H_B = sum_i S_z^i (S_z = sigma_z/2); SigmaZ reproduces
// the integer energy ladder E_k = -n_b + 2k used by the stabilizer-rank
// ergotropy formulas.
enum class SpinUnit { Half, SigmaZ };

inline double spin_scale(SpinUnit u) { return u == SpinUnit::Half ? 0.5 : 1.0; }
inline const char* spin_unit_name(SpinUnit u) {
  return u == SpinUnit::Half ? "half" : "sigma_z";
}

// Diagonal of H_B over the 2^{n_b} battery basis states:
// scale * sum_i sigma_z^i. Index = battery bit pattern.
Eigen::VectorXd battery_energies(int n_b, SpinUnit unit);

// Same diagonal over the full 2^N chain (charger + battery), i.e.
// H_B + H_C in the chosen unit.
Eigen::VectorXd chain_field_diagonal(int n_sites, SpinUnit unit);

// Battery energy of a full-chain basis state (battery bits only).
double battery_energy_of_basis_state(std::uint64_t index, int n_b,
                                     const Eigen::VectorXd& battery_diag);

// H = -J sum_{i<N-1} [Sx Sx + Sy Sy + delta Sz Sz], open boundary,
// S = sigma/2. delta = 1 is the isotropic point used in the experiments.
Eigen::MatrixXcd build_xxz(int n_sites, double j, double delta);

// Complex-SYK couplings over ordered pair indices P=(i<j), Q=(k<l),
// sampled on the canonical half P <= Q (lexicographic) and completed by
// J_{Q,P} = conj(J_{P,Q}); diagonal entries are real. <|J|^2> = j^2.
struct CsykCouplings {
  int n_sites = 0;
  double variance = 0.0;  // j^2
  // key: ((i,j),(k,l)) with i<j, k<l, flattened as i + N*(j + N*(k + N*l))
  std::map<std::uint64_t, Complex> values;

  Complex at(int i, int j, int k, int l) const;
};

CsykCouplings sample_csyk_couplings(int n_sites, double j, RngStream& rng);

// H = N^{-3/2} sum_{P,Q} J_{P,Q} c+_i c+_j c_k c_l with Jordan-Wigner
// fermions c+_j = sigma+_j prod_{m<j} sigma_z^m. Hermitian by the
// coupling symmetry; commutes with sum_i sigma_z^i.
Eigen::MatrixXcd build_csyk(int n_sites, const CsykCouplings& couplings);
Eigen::MatrixXcd build_csyk(int n_sites, double j, RngStream& rng,
                            CsykCouplings* couplings_out = nullptr);

// Jordan-Wigner annihilation operator c_j as a dense matrix; used by the
// anticommutation oracle tests and kept independent of build_csyk's
// bit-level assembly.
Eigen::MatrixXcd jw_annihilation(int n_sites, int site);

// XY chain: (J'/4) sum [(1+gamma) sx sx + (1-gamma) sy sy] + (h'/2) sum sz.
Eigen::MatrixXcd build_xy(int n_sites, double j_prime, double gamma,
                          double h_prime);

enum class Gate2Kind { Ising, XX, Heisenberg };

// Two-qubit gate generators (4x4, local index = bit_a + 2*bit_b):
//   Ising:      J sx(x)sx
//   XX:         J (sx sx + sy sy)
//   Heisenberg: J (sx sx + sy sy + sz sz)
Eigen::Matrix4cd build_gate2_h(Gate2Kind kind, double j_ij);

// Pauli matrices in the library basis (|down>, |up>), sigma_z = diag(-1, +1).
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

// sum_i sigma_z^i as a diagonal (for symmetry checks).
Eigen::VectorXd total_sz_diagonal(int n_sites);

}  // namespace qb
