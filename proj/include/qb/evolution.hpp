#pragma once

#include <array>
#include <optional>

#include "qb/models.hpp"
#include "qb/pauli.hpp"

namespace qb {

// Exact continuous-time propagation through one eigendecomposition of H.
class Propagator {
 public:
  explicit Propagator(const Eigen::MatrixXcd& hamiltonian)
      : spectrum_(hermitian_eig(hamiltonian)) {}

  const Spectrum& spectrum() const { return spectrum_; }

  // U(t) = V e^{-i Lambda t} V^dagger (test/diagnostic use; O(D^2) memory).
  Eigen::MatrixXcd unitary(double t) const;

  StateVector evolve(const StateVector& psi0, double t) const;

 private:
  Spectrum spectrum_;
};

// psi(t_k) for an ascending time grid; one diagonalization total.
std::vector<StateVector> exact_evolve(const Eigen::MatrixXcd& hamiltonian,
                                      const StateVector& psi0,
                                      const std::vector<double>& times);

// d x d Haar-random unitary: Ginibre draw, QR, phase fix making the
// triangular factor's diagonal real positive.
Eigen::MatrixXcd sample_haar(int dim, RngStream& rng);
Eigen::Matrix4cd sample_haar2(RngStream& rng);

// Magnetization-block unitary: random phases on |00> and |11>, Haar U(2)
// on span{|01>, |10>}. Commutes with Z(x)I + I(x)Z exactly.
Eigen::Matrix4cd sample_u1_haar2(RngStream& rng);

// A two-qubit Clifford element, carried both as the conjugation action on
// Pauli generators (for tableau simulation) and as a 4x4 matrix (for
// statevector simulation). Mask bit 0 = first site, bit 1 = second site.
struct Clifford2 {
  struct PauliImage {
    std::uint8_t x = 0;
    std::uint8_t z = 0;
    std::uint8_t sign = 0;  // 0: +, 1: -
  };
  // images of X_a, Z_a, X_b, Z_b under U ( . ) U^dagger
  std::array<PauliImage, 4> generator_images;
  // image of every 2-qubit Hermitian Pauli, indexed xa | za<<1 | xb<<2 | zb<<3
  std::array<PauliImage, 16> image_table;
  Eigen::Matrix4cd matrix;
};

// Uniform over the 11520-element two-qubit Clifford group: uniform
// symplectic image tuple (720 choices) times 4 sign bits.
Clifford2 sample_clifford2(RngStream& rng);

// Deterministic Clifford2 from explicit generator images (testing and the
// identity/CNOT fixtures). Throws if the images are not symplectic.
Clifford2 clifford2_from_images(const std::array<Clifford2::PauliImage, 4>& gen);

enum class GateFamily { Haar, U1Haar, Clifford, Ising, XX, Heisenberg };

const char* gate_family_name(GateFamily f);
bool gate_family_is_hamiltonian(GateFamily f);

// One sampled brick-wall gate. For the Clifford family the tableau action
// is populated as well; Hamiltonian families draw J_ij ~ U[0, j] per gate
// and exponentiate with gate time tau.
struct GateDraw {
  Eigen::Matrix4cd matrix;
  std::optional<Clifford2> clifford;
};

GateDraw draw_gate(GateFamily family, double j, double tau, RngStream& rng);

enum class FirstLayer { OddPattern, EvenPattern };

struct CircuitSpec {
  int n_sites = 0;
  int depth = 0;
  FirstLayer first_layer = FirstLayer::OddPattern;
  GateFamily family = GateFamily::Haar;
  double j = 1.0;    // coupling scale for Hamiltonian-generated gates
  double tau = 1.0;  // gate time for Hamiltonian-generated gates
};

// Bonds of brick-wall layer `layer` (0-based): the odd pattern couples
// (0,1),(2,3),...; the even pattern couples (1,2),(3,4),....
std::vector<std::pair<int, int>> brickwall_bonds(int n_sites, int layer,
                                                 FirstLayer first_layer);

// Runs the circuit on a statevector; returns the state after every layer
// (index 0 = depth 0) or only the final state.
std::vector<StateVector> run_brickwall(const CircuitSpec& spec,
                                       const StateVector& psi0, RngStream& rng,
                                       bool record_each_layer = true);

// Pre-sampled gate sequence, so the statevector and tableau engines can
// consume identical circuits.
std::vector<std::vector<GateDraw>> sample_brickwall_gates(
    const CircuitSpec& spec, RngStream& rng);

void apply_brickwall_layer(StateVector& psi, int n_sites, int layer,
                           FirstLayer first_layer,
                           const std::vector<GateDraw>& gates);

// K applications of exp(-i H_C pi/4), H_C = sum_i sigma_x: each pulse is
// the product of single-site rotations (I - i sigma_x)/sqrt(2). Returns
// the state after each pulse.
std::vector<StateVector> pulsed_charge(const StateVector& psi_gs, int pulses);

}  // namespace qb
