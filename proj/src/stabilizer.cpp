#include "qb/stabilizer.hpp"

#include <algorithm>

namespace qb {

namespace {

struct RowRef {
  std::vector<std::uint64_t> x, z;
  int phase = 0;  // canonical i-exponent, mod 4
};

int get_bit(const std::vector<std::uint64_t>& m, int site) {
  return static_cast<int>((m[site / 64] >> (site % 64)) & 1ULL);
}

void set_bit(std::vector<std::uint64_t>& m, int site, int v) {
  const std::uint64_t mask = 1ULL << (site % 64);
  if (v) {
    m[site / 64] |= mask;
  } else {
    m[site / 64] &= ~mask;
  }
}

int popcount_vec(const std::vector<std::uint64_t>& m) {
  int c = 0;
  for (auto w : m) c += std::popcount(w);
  return c;
}

int popcount_and(const std::vector<std::uint64_t>& a,
                 const std::vector<std::uint64_t>& b) {
  int c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

// acc <- acc * row, in the canonical form i^{phase} X^x Z^z.
void multiply_row(RowRef& acc, const RowRef& row) {
  acc.phase = (acc.phase + row.phase + 2 * popcount_and(acc.z, row.x)) & 3;
  for (std::size_t i = 0; i < acc.x.size(); ++i) {
    acc.x[i] ^= row.x[i];
    acc.z[i] ^= row.z[i];
  }
}

}  // namespace

StabilizerTableau StabilizerTableau::product_state(
    const std::vector<int>& spins) {
  StabilizerTableau t;
  t.n_ = static_cast<int>(spins.size());
  require(t.n_ >= 1 && t.n_ <= 256, "StabilizerTableau: unsupported size");
  t.words_ = (t.n_ + 63) / 64;
  t.x_.assign(static_cast<std::size_t>(t.n_) * t.words_, 0);
  t.z_.assign(static_cast<std::size_t>(t.n_) * t.words_, 0);
  t.sign_.assign(t.n_, 0);
  for (int i = 0; i < t.n_; ++i) {
    require(spins[i] == 1 || spins[i] == -1, "product_state: spins are +-1");
    t.z_[static_cast<std::size_t>(i) * t.words_ + i / 64] |= 1ULL << (i % 64);
    t.sign_[i] = spins[i] == 1 ? 0 : 1;  // row i = spin_i * Z_i
  }
  return t;
}

StabilizerTableau StabilizerTableau::domain_wall(int n_b) {
  require(n_b >= 1, "domain_wall: n_b must be >= 1");
  std::vector<int> spins(2 * n_b, -1);
  for (int i = 0; i < n_b; ++i) spins[i] = 1;
  return product_state(spins);
}

void StabilizerTableau::apply_clifford2(const Clifford2& gate, int site_i,
                                        int site_j) {
  require(site_i != site_j && site_i >= 0 && site_i < n_ && site_j >= 0 &&
              site_j < n_,
          "apply_clifford2: bad sites");
  for (int r = 0; r < n_; ++r) {
    const int xa = x_bit(r, site_i), za = z_bit(r, site_i);
    const int xb = x_bit(r, site_j), zb = z_bit(r, site_j);
    const int idx = xa | (za << 1) | (xb << 2) | (zb << 3);
    if (idx == 0) continue;
    const auto& im = gate.image_table[idx];
    auto row_x = x_.begin() + static_cast<std::size_t>(r) * words_;
    auto row_z = z_.begin() + static_cast<std::size_t>(r) * words_;
    auto put = [&](int site, int xv, int zv) {
      const std::uint64_t mask = 1ULL << (site % 64);
      if (xv) row_x[site / 64] |= mask; else row_x[site / 64] &= ~mask;
      if (zv) row_z[site / 64] |= mask; else row_z[site / 64] &= ~mask;
    };
    put(site_i, im.x & 1, im.z & 1);
    put(site_j, (im.x >> 1) & 1, (im.z >> 1) & 1);
    sign_[r] ^= im.sign;
  }
}

int StabilizerTableau::pauli_sign(const PauliString& p) const {
  require(n_ <= 64, "pauli_sign: mask form limited to 64 sites");
  // Solve sum_{r in S} (x_r | z_r) = (p.x | p.z) over GF(2), then compute
  // the actual Pauli product of the subset with exact phase arithmetic.
  std::vector<std::uint64_t> gx(n_), gz(n_);
  for (int r = 0; r < n_; ++r) {
    gx[r] = x_[static_cast<std::size_t>(r) * words_];
    gz[r] = z_[static_cast<std::size_t>(r) * words_];
  }
  std::vector<std::uint64_t> combo(n_, 0);  // combo[r] tracks row content
  std::vector<int> rows(n_);
  for (int r = 0; r < n_; ++r) {
    combo[r] = 1ULL << r;
    rows[r] = r;
  }
  std::uint64_t tx = p.x_mask, tz = p.z_mask, tcombo = 0;
  // eliminate x columns then z columns
  int pivot_row = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (int col = 0; col < n_; ++col) {
      auto bit_at = [&](int r) {
        const std::uint64_t m = 1ULL << col;
        return pass == 0 ? (gx[r] & m) != 0 : (gz[r] & m) != 0;
      };
      int found = -1;
      for (int r = pivot_row; r < n_; ++r) {
        if (bit_at(r)) {
          found = r;
          break;
        }
      }
      if (found < 0) continue;
      std::swap(gx[pivot_row], gx[found]);
      std::swap(gz[pivot_row], gz[found]);
      std::swap(combo[pivot_row], combo[found]);
      for (int r = 0; r < n_; ++r) {
        if (r != pivot_row && bit_at(r)) {
          gx[r] ^= gx[pivot_row];
          gz[r] ^= gz[pivot_row];
          combo[r] ^= combo[pivot_row];
        }
      }
      const std::uint64_t m = 1ULL << col;
      const bool tbit = pass == 0 ? (tx & m) != 0 : (tz & m) != 0;
      if (tbit) {
        tx ^= gx[pivot_row];
        tz ^= gz[pivot_row];
        tcombo ^= combo[pivot_row];
      }
      ++pivot_row;
      if (pivot_row == n_) break;
    }
  }
  if (tx != 0 || tz != 0) return 0;  // not in the group (up to phase)
  // Product of the selected original generators; they commute, so order
  // does not matter.
  RowRef acc;
  acc.x.assign(words_, 0);
  acc.z.assign(words_, 0);
  for (int r = 0; r < n_; ++r) {
    if (!((tcombo >> r) & 1ULL)) continue;
    RowRef row;
    row.x.assign(x_.begin() + static_cast<std::size_t>(r) * words_,
                 x_.begin() + static_cast<std::size_t>(r + 1) * words_);
    row.z.assign(z_.begin() + static_cast<std::size_t>(r) * words_,
                 z_.begin() + static_cast<std::size_t>(r + 1) * words_);
    row.phase = (2 * sign_[r] + popcount_and(row.x, row.z)) & 3;
    multiply_row(acc, row);
  }
  // acc = i^{phase} X^{p.x} Z^{p.z}; compare with the Hermitian target
  // i^{|x&z|} X^x Z^z.
  const int rel = (acc.phase - popcount(p.x_mask & p.z_mask)) & 3;
  require(rel % 2 == 0, "pauli_sign: non-Hermitian product");
  return rel == 0 ? 1 : -1;
}

int StabilizerTableau::z_expectation(int site) const {
  require(site >= 0 && site < n_, "z_expectation: site out of range");
  // Z_site anticommutes with row r iff x_r[site] = 1; for a maximal
  // stabilizer group, commuting with everything implies membership.
  for (int r = 0; r < n_; ++r) {
    if (x_bit(r, site)) return 0;
  }
  std::vector<RowRef> rows(n_);
  for (int r = 0; r < n_; ++r) {
    rows[r].x.assign(x_.begin() + static_cast<std::size_t>(r) * words_,
                     x_.begin() + static_cast<std::size_t>(r + 1) * words_);
    rows[r].z.assign(z_.begin() + static_cast<std::size_t>(r) * words_,
                     z_.begin() + static_cast<std::size_t>(r + 1) * words_);
    rows[r].phase = (2 * sign_[r] + popcount_and(rows[r].x, rows[r].z)) & 3;
  }
  // Echelon form on the x columns; every row operation is an actual Pauli
  // product, so phases stay exact. The tail rows end up x-free and span
  // the full x-free subgroup.
  int px = 0;
  for (int col = 0; col < n_ && px < n_; ++col) {
    int found = -1;
    for (int r = px; r < n_; ++r) {
      if (get_bit(rows[r].x, col)) {
        found = r;
        break;
      }
    }
    if (found < 0) continue;
    std::swap(rows[px], rows[found]);
    for (int r = px + 1; r < n_; ++r) {
      if (get_bit(rows[r].x, col)) multiply_row(rows[r], rows[px]);
    }
    ++px;
  }
  // Reduce +Z_site against the x-free tail (commuting elements, so the
  // multiplication order is immaterial).
  RowRef target;
  target.x.assign(words_, 0);
  target.z.assign(words_, 0);
  set_bit(target.z, site, 1);
  target.phase = 0;
  int pz = px;
  for (int col = 0; col < n_ && pz < n_; ++col) {
    int found = -1;
    for (int r = pz; r < n_; ++r) {
      if (get_bit(rows[r].z, col)) {
        found = r;
        break;
      }
    }
    if (found < 0) continue;
    std::swap(rows[pz], rows[found]);
    for (int r = pz + 1; r < n_; ++r) {
      if (get_bit(rows[r].z, col)) multiply_row(rows[r], rows[pz]);
    }
    if (get_bit(target.z, col)) multiply_row(target, rows[pz]);
    ++pz;
  }
  require(popcount_vec(target.z) == 0 && popcount_vec(target.x) == 0,
          "z_expectation: commuting Z not in the group");
  // target accumulated Z_site * (group element) = i^{phase} I, and the
  // group element has expectation +1, so <Z_site> = i^{-phase} = +-1.
  require(target.phase % 2 == 0, "z_expectation: non-Hermitian remainder");
  return target.phase == 0 ? 1 : -1;
}

int StabilizerTableau::battery_rank() const {
  require(n_ % 2 == 0, "battery_rank: N must be even");
  const int n_b = n_ / 2;
  // GF(2) rank of the generator matrix restricted to the charger columns
  // (x and z halves stacked side by side: 2 n_b columns).
  std::vector<std::vector<std::uint64_t>> rows(n_);
  const int cw = (2 * n_b + 63) / 64;
  for (int r = 0; r < n_; ++r) {
    rows[r].assign(cw, 0);
    for (int c = 0; c < n_b; ++c) {
      if (x_bit(r, c)) set_bit(rows[r], c, 1);
      if (z_bit(r, c)) set_bit(rows[r], n_b + c, 1);
    }
  }
  int rank = 0;
  for (int col = 0; col < 2 * n_b; ++col) {
    int found = -1;
    for (int r = rank; r < n_; ++r) {
      if (get_bit(rows[r], col)) {
        found = r;
        break;
      }
    }
    if (found < 0) continue;
    std::swap(rows[rank], rows[found]);
    for (int r = 0; r < n_; ++r) {
      if (r != rank && get_bit(rows[r], col)) {
        for (int w = 0; w < cw; ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    ++rank;
    if (rank == n_) break;
  }
  return 2 * n_b - rank;
}

bool StabilizerTableau::rows_commute() const {
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) {
      int sp = 0;
      for (int w = 0; w < words_; ++w) {
        const std::size_t ia = static_cast<std::size_t>(a) * words_ + w;
        const std::size_t ib = static_cast<std::size_t>(b) * words_ + w;
        sp ^= std::popcount((x_[ia] & z_[ib]) ^ (z_[ia] & x_[ib])) & 1;
      }
      if (sp) return false;
    }
  }
  return true;
}

bool StabilizerTableau::rows_independent() const {
  std::vector<std::vector<std::uint64_t>> rows(n_);
  const int cw = 2 * words_;
  for (int r = 0; r < n_; ++r) {
    rows[r].assign(cw, 0);
    for (int w = 0; w < words_; ++w) {
      rows[r][w] = x_[static_cast<std::size_t>(r) * words_ + w];
      rows[r][words_ + w] = z_[static_cast<std::size_t>(r) * words_ + w];
    }
  }
  int rank = 0;
  for (int col = 0; col < 2 * n_ && rank < n_; ++col) {
    // x columns live in the first words_ words, z columns in the second
    const int flat = col < n_ ? col : 64 * words_ + (col - n_);
    int found = -1;
    for (int r = rank; r < n_; ++r) {
      if (get_bit(rows[r], flat)) {
        found = r;
        break;
      }
    }
    if (found < 0) continue;
    std::swap(rows[rank], rows[found]);
    for (int r = rank + 1; r < n_; ++r) {
      if (get_bit(rows[r], flat)) {
        for (int w = 0; w < cw; ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    ++rank;
  }
  return rank == n_;
}

void apply_brickwall_layer(StabilizerTableau& tab, int layer,
                           FirstLayer first_layer,
                           const std::vector<GateDraw>& gates) {
  const auto bonds = brickwall_bonds(tab.n_sites(), layer, first_layer);
  require(bonds.size() == gates.size(), "brickwall layer: gate count mismatch");
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    require(gates[b].clifford.has_value(),
            "tableau brickwall: gates must be Clifford");
    tab.apply_clifford2(*gates[b].clifford, bonds[b].first, bonds[b].second);
  }
}

double clifford_passive_energy(int n_b, int r) {
  require(n_b >= 1 && r >= 0 && r <= n_b, "clifford_passive_energy: bad rank");
  if (r == 0) return 0.0;  // uniform over the symmetric ladder
  const long double support = std::pow(2.0L, static_cast<long double>(n_b - r));
  long double cum = 0.0L;
  long double energy = 0.0L;
  for (int k = 0; k <= n_b; ++k) {
    const long double g = binomial_ld(n_b, k);
    const long double e = static_cast<long double>(-n_b + 2 * k);
    if (cum + g >= support) {
      energy += (support - cum) * e;  // partially filled top level k*
      break;
    }
    cum += g;
    energy += g * e;
  }
  return static_cast<double>(energy / support);
}

double clifford_ergotropy(int n_b, int r, double total_mz) {
  require(std::abs(total_mz) <= n_b + 1e-9,
          "clifford_ergotropy: |total_mz| must be <= n_b");
  return total_mz - clifford_passive_energy(n_b, r);
}

double binary_entropy_inverse(double y) {
  require(y >= 0.0 && y <= 1.0, "binary_entropy_inverse: y in [0, 1]");
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 0.5;
  auto entropy = [](double x) {
    if (x <= 0.0 || x >= 1.0) return x <= 0.0 ? 0.0 : 1.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
  };
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (entropy(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double asymptotic_ergotropy(int n_b, int r_inf) {
  require(r_inf >= 0 && r_inf <= n_b, "asymptotic_ergotropy: bad rank");
  const double x = binary_entropy_inverse(1.0 - static_cast<double>(r_inf) / n_b);
  return n_b * (1.0 - 2.0 * x);
}

}  // namespace qb
