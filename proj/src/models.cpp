#include "qb/models.hpp"

namespace qb {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::uint64_t pair_key(int i, int j, int k, int l, int n) {
  return ((static_cast<std::uint64_t>(i) * n + j) * n + k) * n + l;
}

}  // namespace

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, Complex(0, 1), Complex(0, -1), 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << -1, 0, 0, 1;
  return m;
}

Eigen::VectorXd battery_energies(int n_b, SpinUnit unit) {
  require(n_b >= 1, "battery_energies: n_b must be >= 1");
  const double scale = spin_scale(unit);
  Eigen::VectorXd diag(1LL << n_b);
  for (std::uint64_t b = 0; b < (1ULL << n_b); ++b) {
    int sz = 0;
    for (int i = 0; i < n_b; ++i) sz += basis::spin(b, i);
    diag[b] = scale * sz;
  }
  return diag;
}

Eigen::VectorXd chain_field_diagonal(int n_sites, SpinUnit unit) {
  const double scale = spin_scale(unit);
  Eigen::VectorXd diag(1LL << n_sites);
  for (std::uint64_t s = 0; s < (1ULL << n_sites); ++s) {
    int sz = 0;
    for (int i = 0; i < n_sites; ++i) sz += basis::spin(s, i);
    diag[s] = scale * sz;
  }
  return diag;
}

double battery_energy_of_basis_state(std::uint64_t index, int n_b,
                                     const Eigen::VectorXd& battery_diag) {
  return battery_diag[basis::battery_bits(index, n_b)];
}

Eigen::VectorXd total_sz_diagonal(int n_sites) {
  return chain_field_diagonal(n_sites, SpinUnit::SigmaZ);
}

Eigen::MatrixXcd build_xxz(int n_sites, double j, double delta) {
  require(n_sites >= 2, "build_xxz: need at least two sites");
  const std::int64_t dim = 1LL << n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim); ++s) {
    double zz = 0.0;
    for (int i = 0; i + 1 < n_sites; ++i) {
      zz += 0.25 * basis::spin(s, i) * basis::spin(s, i + 1);
      if (basis::bit(s, i) != basis::bit(s, i + 1)) {
        const std::uint64_t sp = s ^ (3ULL << i);  // flip-flop on the bond
        h(sp, s) += -j * 0.5;
      }
    }
    h(s, s) += -j * delta * zz;
  }
  return h;
}

Complex CsykCouplings::at(int i, int j, int k, int l) const {
  double sign = 1.0;
  if (i == j || k == l) return 0.0;
  if (i > j) {
    std::swap(i, j);
    sign = -sign;
  }
  if (k > l) {
    std::swap(k, l);
    sign = -sign;
  }
  auto it = values.find(pair_key(i, j, k, l, n_sites));
  if (it != values.end()) return sign * it->second;
  it = values.find(pair_key(k, l, i, j, n_sites));
  require(it != values.end(), "CsykCouplings: missing entry");
  return sign * std::conj(it->second);
}

CsykCouplings sample_csyk_couplings(int n_sites, double j, RngStream& rng) {
  require(n_sites >= 4, "sample_csyk_couplings: need N >= 4");
  CsykCouplings c;
  c.n_sites = n_sites;
  c.variance = j * j;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n_sites; ++a)
    for (int b = a + 1; b < n_sites; ++b) pairs.emplace_back(a, b);
  const double s = j / std::sqrt(2.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = p; q < pairs.size(); ++q) {
      Complex v;
      if (p == q) {
        v = Complex(j * rng.normal(), 0.0);  // Hermitian diagonal: real
      } else {
        v = Complex(s * rng.normal(), s * rng.normal());
      }
      c.values[pair_key(pairs[p].first, pairs[p].second, pairs[q].first,
                        pairs[q].second, n_sites)] = v;
      if (p != q) {
        c.values[pair_key(pairs[q].first, pairs[q].second, pairs[p].first,
                          pairs[p].second, n_sites)] = std::conj(v);
      }
    }
  }
  return c;
}

namespace {

// c_site |s>: Jordan-Wigner string over sites below `site`; returns false
// if the mode is empty. The string multiplies the sigma_z eigenvalues of
// the lower sites.
bool jw_annihilate(std::uint64_t& s, int site, double& sign) {
  if (!basis::bit(s, site)) return false;
  for (int m = 0; m < site; ++m) {
    if (!basis::bit(s, m)) sign = -sign;
  }
  s ^= 1ULL << site;
  return true;
}

bool jw_create(std::uint64_t& s, int site, double& sign) {
  if (basis::bit(s, site)) return false;
  for (int m = 0; m < site; ++m) {
    if (!basis::bit(s, m)) sign = -sign;
  }
  s ^= 1ULL << site;
  return true;
}

}  // namespace

Eigen::MatrixXcd build_csyk(int n_sites, const CsykCouplings& couplings) {
  require(n_sites >= 4, "build_csyk: need N >= 4 (no quadruples otherwise)");
  const std::int64_t dim = 1LL << n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const double norm = 1.0 / std::sqrt(std::pow(static_cast<double>(n_sites), 3));
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n_sites; ++a)
    for (int b = a + 1; b < n_sites; ++b) pairs.emplace_back(a, b);

  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim); ++s) {
    for (const auto& [k, l] : pairs) {
      std::uint64_t s1 = s;
      double sign1 = 1.0;
      if (!jw_annihilate(s1, l, sign1)) continue;  // c_l first
      if (!jw_annihilate(s1, k, sign1)) continue;
      for (const auto& [i, jdx] : pairs) {
        std::uint64_t s2 = s1;
        double sign2 = sign1;
        if (!jw_create(s2, jdx, sign2)) continue;  // then c+_j, c+_i
        if (!jw_create(s2, i, sign2)) continue;
        h(s2, s) += norm * sign2 * couplings.at(i, jdx, k, l);
      }
    }
  }
  return h;
}

Eigen::MatrixXcd build_csyk(int n_sites, double j, RngStream& rng,
                            CsykCouplings* couplings_out) {
  CsykCouplings c = sample_csyk_couplings(n_sites, j, rng);
  Eigen::MatrixXcd h = build_csyk(n_sites, c);
  if (couplings_out != nullptr) *couplings_out = std::move(c);
  return h;
}

Eigen::MatrixXcd jw_annihilation(int n_sites, int site) {
  require(site >= 0 && site < n_sites, "jw_annihilation: bad site");
  Eigen::Matrix2cd lower;  // sigma^- maps |up> to |down>
  lower << 0, 1, 0, 0;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (int m = 0; m < n_sites; ++m) {
    Eigen::Matrix2cd factor;
    if (m < site) {
      factor = pauli_z();
    } else if (m == site) {
      factor = lower;
    } else {
      factor = Eigen::Matrix2cd::Identity();
    }
    acc = kron(factor, acc);  // earlier sites stay in the low bits
  }
  return acc;
}

Eigen::MatrixXcd build_xy(int n_sites, double j_prime, double gamma,
                          double h_prime) {
  require(n_sites >= 2, "build_xy: need at least two sites");
  const std::int64_t dim = 1LL << n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim); ++s) {
    double field = 0.0;
    for (int i = 0; i < n_sites; ++i) field += basis::spin(s, i);
    h(s, s) += 0.5 * h_prime * field;
    for (int i = 0; i + 1 < n_sites; ++i) {
      const bool equal = basis::bit(s, i) == basis::bit(s, i + 1);
      // <s^flip| (1+g) sx sx + (1-g) sy sy |s> = 2g (equal bits) or 2.
      const double amp = equal ? 2.0 * gamma : 2.0;
      h(s ^ (3ULL << i), s) += 0.25 * j_prime * amp;
    }
  }
  return h;
}

Eigen::Matrix4cd build_gate2_h(Gate2Kind kind, double j_ij) {
  require(j_ij >= 0.0, "build_gate2_h: coupling must be nonnegative");
  auto two_site = [](const Eigen::Matrix2cd& m) {
    // same Pauli on both sites; local index = bit_a + 2*bit_b
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        k.block(2 * i, 2 * j, 2, 2) = m(i, j) * m;
    return k;
  };
  Eigen::Matrix4cd h = j_ij * two_site(pauli_x());
  if (kind == Gate2Kind::XX || kind == Gate2Kind::Heisenberg) {
    h += j_ij * two_site(pauli_y());
  }
  if (kind == Gate2Kind::Heisenberg) {
    h += j_ij * two_site(pauli_z());
  }
  return h;
}

}  // namespace qb
