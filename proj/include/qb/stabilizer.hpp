#pragma once

#include "qb/evolution.hpp"

namespace qb {

// Pure stabilizer state on up to 256 sites: N commuting, independent
// generators, each stored as (x bits, z bits, sign). Row r represents the
// Hermitian Pauli (-1)^{sign_r} i^{|x_r & z_r|} X^{x_r} Z^{z_r}.
class StabilizerTableau {
 public:
  // Product state with sigma_z eigenvalue spin[i] (+1 or -1) on site i.
  static StabilizerTableau product_state(const std::vector<int>& spins);

  // The domain-wall initial state: charger up, battery down.
  static StabilizerTableau domain_wall(int n_b);

  int n_sites() const { return n_; }
  int words() const { return words_; }

  int x_bit(int row, int site) const { return bit(x_, row, site); }
  int z_bit(int row, int site) const { return bit(z_, row, site); }
  int sign(int row) const { return sign_[row]; }

  // Conjugates every generator through the gate's Pauli image map.
  void apply_clifford2(const Clifford2& gate, int site_i, int site_j);

  // +1/-1 if (+/-)Z_site lies in the stabilizer group, else 0.
  int z_expectation(int site) const;

  // Number of independent generators supported entirely on the battery
  // (sites [n/2, n)); the reduced battery state has 2^{n_b - r} equal
  // nonzero eigenvalues.
  int battery_rank() const;

  // Full-group membership sign of an arbitrary Pauli, or 0 if absent
  // (test/diagnostic use).
  int pauli_sign(const PauliString& p) const;

  bool rows_commute() const;
  bool rows_independent() const;

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> x_;  // row-major, words_ words per row
  std::vector<std::uint64_t> z_;
  std::vector<std::uint8_t> sign_;

  int bit(const std::vector<std::uint64_t>& m, int row, int site) const {
    return static_cast<int>((m[static_cast<std::size_t>(row) * words_ +
                               site / 64] >> (site % 64)) & 1ULL);
  }
};

// Runs a Clifford brick-wall circuit on the tableau with the same gate
// sequence layout as the statevector engine.
void apply_brickwall_layer(StabilizerTableau& tab, int layer,
                           FirstLayer first_layer,
                           const std::vector<GateDraw>& gates);

// Ergotropy of a rank-r flat-spectrum battery state against the integer
// ladder E_k = -n_b + 2k (sigma_z units), g_k = C(n_b, k). total_mz is the
// battery magnetization sum_i <sigma_z^i>.
double clifford_ergotropy(int n_b, int r, double total_mz);

// Passive energy of that flat spectrum alone (sigma_z units).
double clifford_passive_energy(int n_b, int r);

// Large-n_b limit of clifford_ergotropy at zero magnetization:
// n_b [1 - 2 G^{-1}(1 - r/n_b)] with G the binary entropy (bits) and the
// inverse taken on [0, 1/2].
double asymptotic_ergotropy(int n_b, int r_inf);

// Binary entropy inverse on [0, 1/2], bisected to 1e-12.
double binary_entropy_inverse(double y);

}  // namespace qb
