#pragma once

#include "qb/models.hpp"
#include "qb/pauli.hpp"

namespace qb {

enum class SreMethod { Naive, Fast };

struct SreResult {
  double alpha = 2.0;
  double value = 0.0;  // bits
  SreMethod method = SreMethod::Fast;
};

// Stabilizer Renyi entropy by direct enumeration of all 4^N Pauli
// strings, O(8^N); reference implementation, N <= 8.
SreResult sre_naive(const StateVector& state, double alpha);

// Same quantity in O(N 4^N): for each x-mask build f_x(s) =
// conj(psi(s^x)) psi(s), Walsh-Hadamard transform over s to get every
// <X^x Z^z> at once, restore the i^{|x&z|} phase, accumulate |<P>|^{2a}.
// N <= 14; optionally threaded over x-masks (thread count never affects
// the result).
SreResult sre_fast(const StateVector& state, double alpha, int n_threads = 1);

// In-place Walsh-Hadamard transform (unnormalized).
void walsh_hadamard(std::vector<Complex>& data);

// W = Tr[H_B rho(t)] - e0 for a pure full-chain state; battery_diag is
// the 2^{n_b} battery-energy diagonal and e0 the initial battery energy.
double stored_work(const StateVector& state, const Eigen::VectorXd& battery_diag,
                   double e0);

double battery_energy(const StateVector& state,
                      const Eigen::VectorXd& battery_diag);

// sum_i p_i eps_i with populations nonincreasing against levels
// nondecreasing (both expanded with degeneracy).
double passive_energy(const Eigen::VectorXd& eigvals_desc,
                      const Eigen::VectorXd& levels_asc);

// Ergotropy of rho against a diagonal battery Hamiltonian via the sorted
// spectral construction.
double ergotropy(const DensityMatrix& rho, const Eigen::VectorXd& battery_diag);

// Running time average <X>(t) = (1/t) int_0^t X dt' (trapezoid); entry 0
// is X(0).
std::vector<double> time_average(const std::vector<double>& times,
                                 const std::vector<double>& values);

// Block-diagonal steady battery state of the half-filled chain: sector of
// n_up = n_b/2 + m carries weight p_m = C(n_b,n_b/2+m) C(n_b,n_b/2-m) /
// C(N,N/2) spread over d_m = C(n_b,n_b/2+m) states.
struct BlockStateModel {
  int n_sites = 0;  // N = 2 n_b
  int n_b = 0;
  std::vector<double> m;        // sector magnetization, ascending
  std::vector<double> weights;  // p_m
  std::vector<int> dims;        // d_m
};

BlockStateModel block_state_model(int n_sites);

// Ergotropy of the exact block state via the generic passive-state
// construction; sector energies are m (spin-1/2 units). The mean energy
// vanishes by symmetry, so the result is -E_p.
double steady_ergotropy_exact(const BlockStateModel& model);

// Gaussian closed form sqrt(N / 4 pi).
double steady_ergotropy_gauss(int n_sites);

// Pointwise mean and standard error over independent realizations of a
// time-series triple (W, E, M2). Deterministic given the master seed.
struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> stderr_;
};

struct DisorderAverage {
  std::vector<double> times;
  SeriesStats w, e, m2;
};

// run(sample_index, stream) fills the three series for one realization.
using DisorderRun = std::function<void(
    int sample, RngStream& rng, std::vector<double>& w, std::vector<double>& e,
    std::vector<double>& m2)>;

DisorderAverage disorder_average(const std::vector<double>& times,
                                 const DisorderRun& run, int n_samples,
                                 std::uint64_t master_seed, int n_threads = 1);

}  // namespace qb
