#include "qb/evolution.hpp"

namespace qb {

Eigen::MatrixXcd Propagator::unitary(double t) const {
  const auto& v = spectrum_.eigenvectors;
  Eigen::VectorXcd phases(spectrum_.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::exp(Complex(0, -spectrum_.eigenvalues[k] * t));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

StateVector Propagator::evolve(const StateVector& psi0, double t) const {
  const auto& v = spectrum_.eigenvectors;
  require(v.rows() == psi0.dim(), "Propagator: dimension mismatch");
  Eigen::VectorXcd c = v.adjoint() * psi0.amplitudes;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    c[k] *= std::exp(Complex(0, -spectrum_.eigenvalues[k] * t));
  }
  StateVector out = psi0;
  out.amplitudes = v * c;
  return out;
}

std::vector<StateVector> exact_evolve(const Eigen::MatrixXcd& hamiltonian,
                                      const StateVector& psi0,
                                      const std::vector<double>& times) {
  require(hamiltonian.rows() == psi0.dim(), "exact_evolve: dimension mismatch");
  require(!times.empty() && times.front() >= 0.0,
          "exact_evolve: times must start at t >= 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    require(times[k] > times[k - 1], "exact_evolve: times must ascend");
  }
  Propagator prop(hamiltonian);
  const auto& v = prop.spectrum().eigenvectors;
  const auto& lam = prop.spectrum().eigenvalues;
  Eigen::VectorXcd c0 = v.adjoint() * psi0.amplitudes;
  std::vector<StateVector> out;
  out.reserve(times.size());
  Eigen::VectorXcd c(c0.size());
  for (double t : times) {
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      c[k] = c0[k] * std::exp(Complex(0, -lam[k] * t));
    }
    StateVector psi = psi0;
    psi.amplitudes = v * c;
    out.push_back(std::move(psi));
  }
  return out;
}

Eigen::MatrixXcd sample_haar(int dim, RngStream& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    Complex d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

Eigen::Matrix4cd sample_haar2(RngStream& rng) {
  return Eigen::Matrix4cd(sample_haar(4, rng));
}

Eigen::Matrix4cd sample_u1_haar2(RngStream& rng) {
  // local index: 0 = |00>, 1 = |10>_a, 2 = |01>_b, 3 = |11>
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  const double th0 = rng.uniform(0.0, 2.0 * kPi);
  const double th2 = rng.uniform(0.0, 2.0 * kPi);
  Eigen::MatrixXcd v = sample_haar(2, rng);
  u(0, 0) = std::exp(Complex(0, th0));
  u(3, 3) = std::exp(Complex(0, th2));
  u(1, 1) = v(0, 0);
  u(1, 2) = v(0, 1);
  u(2, 1) = v(1, 0);
  u(2, 2) = v(1, 1);
  return u;
}

namespace {

// Symplectic product of 4-bit Pauli labels v = xa | za<<1 | xb<<2 | zb<<3;
// 1 iff the operators anticommute.
int symplectic_product(int v, int w) {
  auto xa = [](int p) { return p & 1; };
  auto za = [](int p) { return (p >> 1) & 1; };
  auto xb = [](int p) { return (p >> 2) & 1; };
  auto zb = [](int p) { return (p >> 3) & 1; };
  return (xa(v) * za(w) + za(v) * xa(w) + xb(v) * zb(w) + zb(v) * xb(w)) & 1;
}

CanonicalPauli canonical_of(const Clifford2::PauliImage& im) {
  return CanonicalPauli::from_hermitian(im.x, im.z, im.sign);
}

Clifford2::PauliImage image_of(int label, std::uint8_t sign) {
  Clifford2::PauliImage im;
  im.x = static_cast<std::uint8_t>((label & 1) | ((label >> 1) & 2));
  im.z = static_cast<std::uint8_t>(((label >> 1) & 1) | ((label >> 2) & 2));
  im.sign = sign;
  return im;
}

int label_of(const Clifford2::PauliImage& im) {
  return (im.x & 1) | ((im.z & 1) << 1) | ((im.x & 2) << 1) | ((im.z & 2) << 2);
}

void build_image_table(Clifford2& c) {
  const CanonicalPauli img_xa = canonical_of(c.generator_images[0]);
  const CanonicalPauli img_za = canonical_of(c.generator_images[1]);
  const CanonicalPauli img_xb = canonical_of(c.generator_images[2]);
  const CanonicalPauli img_zb = canonical_of(c.generator_images[3]);
  for (int idx = 0; idx < 16; ++idx) {
    const int xa = idx & 1, za = (idx >> 1) & 1, xb = (idx >> 2) & 1,
              zb = (idx >> 3) & 1;
    const std::uint64_t x = static_cast<std::uint64_t>(xa | (xb << 1));
    const std::uint64_t z = static_cast<std::uint64_t>(za | (zb << 1));
    // sigma(x,z) = i^{|x&z|} Xa^xa Xb^xb Za^za Zb^zb
    CanonicalPauli acc{0, 0, popcount(x & z)};
    if (xa) acc = acc * img_xa;
    if (xb) acc = acc * img_xb;
    if (za) acc = acc * img_za;
    if (zb) acc = acc * img_zb;
    Clifford2::PauliImage im;
    im.x = static_cast<std::uint8_t>(acc.x);
    im.z = static_cast<std::uint8_t>(acc.z);
    im.sign = static_cast<std::uint8_t>(acc.hermitian_sign());
    c.image_table[idx] = im;
  }
}

Eigen::Matrix4cd image_matrix(const Clifford2::PauliImage& im) {
  Eigen::MatrixXcd m = pauli_matrix(2, PauliString{im.x, im.z});
  if (im.sign) m = -m;
  return Eigen::Matrix4cd(m);
}

void synthesize_matrix(Clifford2& c) {
  const Eigen::Matrix4cd mza = image_matrix(c.image_table[2]);   // Z_a
  const Eigen::Matrix4cd mzb = image_matrix(c.image_table[8]);   // Z_b
  const Eigen::Matrix4cd mxa = image_matrix(c.image_table[1]);   // X_a
  const Eigen::Matrix4cd mxb = image_matrix(c.image_table[4]);   // X_b
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  // |00> holds two down spins (sigma_z = -1 each), so U|00> is the joint
  // -1 eigenvector of the Z images.
  const Eigen::Matrix4cd proj = 0.25 * (id - mza) * (id - mzb);
  Eigen::Vector4cd col0;
  bool found = false;
  for (int t = 0; t < 4 && !found; ++t) {
    col0 = proj.col(t);
    if (col0.norm() > 1e-6) found = true;
  }
  require(found, "Clifford2: projector vanished on the whole basis");
  col0.normalize();
  // deterministic global phase: largest component real positive
  int arg_max = 0;
  for (int t = 1; t < 4; ++t) {
    if (std::abs(col0[t]) > std::abs(col0[arg_max])) arg_max = t;
  }
  col0 *= std::conj(col0[arg_max]) / std::abs(col0[arg_max]);
  c.matrix.col(0) = col0;
  c.matrix.col(1) = mxa * col0;
  c.matrix.col(2) = mxb * col0;
  c.matrix.col(3) = mxa * mxb * col0;
}

}  // namespace

Clifford2 clifford2_from_images(
    const std::array<Clifford2::PauliImage, 4>& gen) {
  const int fa = label_of(gen[0]), ga = label_of(gen[1]), fb = label_of(gen[2]),
            gb = label_of(gen[3]);
  require(symplectic_product(fa, ga) == 1 && symplectic_product(fb, gb) == 1 &&
              symplectic_product(fa, fb) == 0 &&
              symplectic_product(fa, gb) == 0 &&
              symplectic_product(ga, fb) == 0 &&
              symplectic_product(ga, gb) == 0,
          "clifford2_from_images: images are not symplectic");
  Clifford2 c;
  c.generator_images = gen;
  build_image_table(c);
  synthesize_matrix(c);
  return c;
}

Clifford2 sample_clifford2(RngStream& rng) {
  // Pick the symplectic images in nested uniform stages: 15 * 8 * 3 * 2 =
  // 720 tuples, each equally likely, then 4 sign bits (11520 elements).
  auto pick = [&rng](const std::vector<int>& options) {
    return options[rng.below(options.size())];
  };
  std::vector<int> cand;
  cand.reserve(16);

  for (int v = 1; v < 16; ++v) cand.push_back(v);
  const int fa = pick(cand);

  cand.clear();
  for (int v = 0; v < 16; ++v) {
    if (symplectic_product(fa, v) == 1) cand.push_back(v);
  }
  const int ga = pick(cand);

  cand.clear();
  for (int v = 1; v < 16; ++v) {
    if (symplectic_product(fa, v) == 0 && symplectic_product(ga, v) == 0) {
      cand.push_back(v);
    }
  }
  const int fb = pick(cand);

  cand.clear();
  for (int v = 0; v < 16; ++v) {
    if (symplectic_product(fa, v) == 0 && symplectic_product(ga, v) == 0 &&
        symplectic_product(fb, v) == 1) {
      cand.push_back(v);
    }
  }
  const int gb = pick(cand);

  std::array<Clifford2::PauliImage, 4> gen;
  const int labels[4] = {fa, ga, fb, gb};
  for (int k = 0; k < 4; ++k) {
    gen[k] = image_of(labels[k], static_cast<std::uint8_t>(rng.below(2)));
  }
  return clifford2_from_images(gen);
}

const char* gate_family_name(GateFamily f) {
  switch (f) {
    case GateFamily::Haar: return "haar";
    case GateFamily::U1Haar: return "u1";
    case GateFamily::Clifford: return "clifford";
    case GateFamily::Ising: return "ising";
    case GateFamily::XX: return "xx";
    case GateFamily::Heisenberg: return "heisenberg";
  }
  return "?";
}

bool gate_family_is_hamiltonian(GateFamily f) {
  return f == GateFamily::Ising || f == GateFamily::XX ||
         f == GateFamily::Heisenberg;
}

GateDraw draw_gate(GateFamily family, double j, double tau, RngStream& rng) {
  GateDraw d;
  switch (family) {
    case GateFamily::Haar:
      d.matrix = sample_haar2(rng);
      break;
    case GateFamily::U1Haar:
      d.matrix = sample_u1_haar2(rng);
      break;
    case GateFamily::Clifford: {
      d.clifford = sample_clifford2(rng);
      d.matrix = d.clifford->matrix;
      break;
    }
    default: {
      const Gate2Kind kind = family == GateFamily::Ising ? Gate2Kind::Ising
                             : family == GateFamily::XX  ? Gate2Kind::XX
                                                         : Gate2Kind::Heisenberg;
      const double j_ij = rng.uniform(0.0, j);
      const Eigen::Matrix4cd h = build_gate2_h(kind, j_ij);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
      Eigen::Vector4cd phases;
      for (int k = 0; k < 4; ++k) {
        phases[k] = std::exp(Complex(0, -es.eigenvalues()[k] * tau));
      }
      d.matrix = es.eigenvectors() * phases.asDiagonal() *
                 es.eigenvectors().adjoint();
      break;
    }
  }
  return d;
}

std::vector<std::pair<int, int>> brickwall_bonds(int n_sites, int layer,
                                                 FirstLayer first_layer) {
  const bool odd_pattern =
      (layer % 2 == 0) == (first_layer == FirstLayer::OddPattern);
  std::vector<std::pair<int, int>> bonds;
  const int start = odd_pattern ? 0 : 1;
  for (int i = start; i + 1 < n_sites; i += 2) bonds.emplace_back(i, i + 1);
  return bonds;
}

std::vector<std::vector<GateDraw>> sample_brickwall_gates(
    const CircuitSpec& spec, RngStream& rng) {
  require(spec.n_sites % 2 == 0, "brickwall: N must be even");
  require(spec.depth >= 0, "brickwall: depth must be >= 0");
  std::vector<std::vector<GateDraw>> layers(spec.depth);
  for (int l = 0; l < spec.depth; ++l) {
    const auto bonds = brickwall_bonds(spec.n_sites, l, spec.first_layer);
    layers[l].reserve(bonds.size());
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      layers[l].push_back(draw_gate(spec.family, spec.j, spec.tau, rng));
    }
  }
  return layers;
}

void apply_brickwall_layer(StateVector& psi, int n_sites, int layer,
                           FirstLayer first_layer,
                           const std::vector<GateDraw>& gates) {
  const auto bonds = brickwall_bonds(n_sites, layer, first_layer);
  require(bonds.size() == gates.size(), "brickwall layer: gate count mismatch");
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    apply_two_site(psi, bonds[b].first, bonds[b].second, gates[b].matrix);
  }
}

std::vector<StateVector> run_brickwall(const CircuitSpec& spec,
                                       const StateVector& psi0, RngStream& rng,
                                       bool record_each_layer) {
  require(spec.n_sites == psi0.n_sites, "brickwall: state size mismatch");
  require(spec.n_sites % 2 == 0, "brickwall: N must be even");
  std::vector<StateVector> out;
  StateVector psi = psi0;
  if (record_each_layer) out.push_back(psi);
  for (int l = 0; l < spec.depth; ++l) {
    const auto bonds = brickwall_bonds(spec.n_sites, l, spec.first_layer);
    std::vector<GateDraw> gates;
    gates.reserve(bonds.size());
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      gates.push_back(draw_gate(spec.family, spec.j, spec.tau, rng));
    }
    apply_brickwall_layer(psi, spec.n_sites, l, spec.first_layer, gates);
    if (record_each_layer) out.push_back(psi);
  }
  if (!record_each_layer) out.push_back(psi);
  return out;
}

std::vector<StateVector> pulsed_charge(const StateVector& psi_gs, int pulses) {
  require(pulses >= 1, "pulsed_charge: need at least one pulse");
  const double c = std::cos(kPi / 4.0);
  Eigen::Matrix2cd rot;
  rot << c, Complex(0, -c), Complex(0, -c), c;  // exp(-i sigma_x pi/4)
  std::vector<StateVector> out;
  out.reserve(pulses);
  StateVector psi = psi_gs;
  for (int k = 0; k < pulses; ++k) {
    for (int site = 0; site < psi.n_sites; ++site) {
      apply_single_site(psi, site, rot);
    }
    out.push_back(psi);
  }
  return out;
}

}  // namespace qb
