#include "qb/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qb {

double pauli_expectation(const StateVector& psi, const PauliString& p) {
  const auto& a = psi.amplitudes;
  const std::uint64_t dim = static_cast<std::uint64_t>(a.size());
  Complex acc = 0.0;
  for (std::uint64_t s = 0; s < dim; ++s) {
    // Z^z picks up -1 per z-site holding a down spin
    const int neg = popcount(p.z_mask & ~s & (dim - 1)) & 1;
    const Complex term = std::conj(a[s ^ p.x_mask]) * a[s];
    acc += neg ? -term : term;
  }
  const int ph = popcount(p.x_mask & p.z_mask) & 3;
  static const Complex kI[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                Complex(0, -1)};
  return (kI[ph] * acc).real();
}

Eigen::MatrixXcd pauli_matrix(int n_sites, const PauliString& p) {
  const std::int64_t dim = 1LL << n_sites;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  static const Complex kI[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                Complex(0, -1)};
  const Complex phase = kI[popcount(p.x_mask & p.z_mask) & 3];
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim); ++s) {
    const int neg = popcount(p.z_mask & ~s & (dim - 1)) & 1;
    m(s ^ p.x_mask, s) = neg ? -phase : phase;
  }
  return m;
}

namespace {

double sre_from_moment_sum(double sum, int n_sites, double alpha) {
  return std::log2(sum / std::pow(2.0, n_sites)) / (1.0 - alpha);
}

}  // namespace

SreResult sre_naive(const StateVector& state, double alpha) {
  require(state.n_sites <= 8, "sre_naive: N too large (cost 8^N), use sre_fast");
  require(alpha != 1.0, "sre: alpha = 1 is excluded");
  const std::uint64_t masks = 1ULL << state.n_sites;
  double sum = 0.0;
  for (std::uint64_t x = 0; x < masks; ++x) {
    for (std::uint64_t z = 0; z < masks; ++z) {
      const double e = pauli_expectation(state, PauliString{x, z});
      sum += std::pow(e * e, alpha);
    }
  }
  return SreResult{alpha, sre_from_moment_sum(sum, state.n_sites, alpha),
                   SreMethod::Naive};
}

void walsh_hadamard(std::vector<Complex>& data) {
  const std::size_t n = data.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Complex a = data[j];
        const Complex b = data[j + h];
        data[j] = a + b;
        data[j + h] = a - b;
      }
    }
  }
}

SreResult sre_fast(const StateVector& state, double alpha, int n_threads) {
  require(state.n_sites <= 14, "sre_fast: N too large (cost N 4^N)");
  require(alpha != 1.0, "sre: alpha = 1 is excluded");
  const int n = state.n_sites;
  const std::uint64_t dim = 1ULL << n;
  const auto& a = state.amplitudes;
  const bool alpha_is_two = alpha == 2.0;

  // Fixed chunking: the reduction order is independent of thread count.
  const std::size_t n_chunks = std::min<std::uint64_t>(dim, 64);
  std::vector<double> chunk_sums(n_chunks, 0.0);
  const std::uint64_t per = dim / n_chunks;

  parallel_for(n_chunks, n_threads, [&](std::size_t chunk) {
    const std::uint64_t x_begin = chunk * per;
    const std::uint64_t x_end = chunk + 1 == n_chunks ? dim : x_begin + per;
    std::vector<Complex> f(dim);
    double local = 0.0;
    for (std::uint64_t x = x_begin; x < x_end; ++x) {
      for (std::uint64_t s = 0; s < dim; ++s) {
        // sign flips of Z^z act on s via the transform kernel (-1)^{z.s};
        // our Z convention counts down spins, handled by the |z| parity
        // below.
        f[s] = std::conj(a[s ^ x]) * a[s];
      }
      walsh_hadamard(f);
      for (std::uint64_t z = 0; z < dim; ++z) {
        // WHT gives sum_s (-1)^{|z&s|} f(s); the library convention is
        // (-1)^{|z & ~s|} = (-1)^{|z|} (-1)^{|z&s|}, and the i^{|x&z|}
        // phase makes the expectation real: with f's symmetry the real
        // part of i^{|x&z|} (+-)F(z) is the Pauli expectation.
        const int xz = popcount(x & z);
        const int zpar = popcount(z) & 1;
        Complex v = f[z];
        if (zpar) v = -v;
        double e;
        switch (xz & 3) {
          case 0: e = v.real(); break;
          case 1: e = -v.imag(); break;
          case 2: e = -v.real(); break;
          default: e = v.imag(); break;
        }
        const double e2 = e * e;
        local += alpha_is_two ? e2 * e2 : std::pow(e2, alpha);
      }
    }
    chunk_sums[chunk] = local;
  });
  const double sum = std::accumulate(chunk_sums.begin(), chunk_sums.end(), 0.0);
  return SreResult{alpha, sre_from_moment_sum(sum, n, alpha), SreMethod::Fast};
}

double battery_energy(const StateVector& state,
                      const Eigen::VectorXd& battery_diag) {
  require(state.n_sites % 2 == 0, "battery_energy: N must be even");
  const int n_b = state.n_sites / 2;
  require(battery_diag.size() == (1LL << n_b),
          "battery_energy: diagonal size mismatch");
  const auto& a = state.amplitudes;
  double e = 0.0;
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(a.size()); ++s) {
    e += std::norm(a[s]) * battery_diag[basis::battery_bits(s, n_b)];
  }
  return e;
}

double stored_work(const StateVector& state, const Eigen::VectorXd& battery_diag,
                   double e0) {
  return battery_energy(state, battery_diag) - e0;
}

double passive_energy(const Eigen::VectorXd& eigvals_desc,
                      const Eigen::VectorXd& levels_asc) {
  require(eigvals_desc.size() == levels_asc.size(),
          "passive_energy: length mismatch");
  double e = 0.0;
  for (Eigen::Index i = 0; i < eigvals_desc.size(); ++i) {
    e += eigvals_desc[i] * levels_asc[i];
  }
  return e;
}

double ergotropy(const DensityMatrix& rho, const Eigen::VectorXd& battery_diag) {
  require(rho.rows() == battery_diag.size(), "ergotropy: dimension mismatch");
  Spectrum spec = hermitian_eig(rho);
  require(spec.eigenvalues.minCoeff() > -1e-8, "ergotropy: rho is not PSD");
  const double mean_energy =
      (rho.diagonal().real().array() * battery_diag.array()).sum();
  Eigen::VectorXd desc = spec.eigenvalues.reverse();
  Eigen::VectorXd levels = battery_diag;
  std::sort(levels.begin(), levels.end());
  return mean_energy - passive_energy(desc, levels);
}

std::vector<double> time_average(const std::vector<double>& times,
                                 const std::vector<double>& values) {
  require(times.size() == values.size() && !times.empty(),
          "time_average: shape mismatch");
  require(times.front() >= 0.0, "time_average: times start at 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    require(times[k] > times[k - 1], "time_average: times must ascend");
  }
  std::vector<double> avg(values.size());
  avg[0] = values[0];
  double integral = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    integral += 0.5 * (values[k] + values[k - 1]) * (times[k] - times[k - 1]);
    avg[k] = integral / times[k];
  }
  return avg;
}

BlockStateModel block_state_model(int n_sites) {
  require(n_sites >= 2 && n_sites % 2 == 0, "block_state_model: N even >= 2");
  BlockStateModel model;
  model.n_sites = n_sites;
  model.n_b = n_sites / 2;
  const int n_b = model.n_b;
  const long double total = binomial_ld(n_sites, n_sites / 2);
  for (int k = 0; k <= n_b; ++k) {
    model.m.push_back(k - 0.5 * n_b);
    model.dims.push_back(static_cast<int>(binomial_ld(n_b, k)));
    model.weights.push_back(static_cast<double>(
        binomial_ld(n_b, k) * binomial_ld(n_b, n_b - k) / total));
  }
  return model;
}

double steady_ergotropy_exact(const BlockStateModel& model) {
  const int n_b = model.n_b;
  const std::size_t dim = 1ULL << n_b;
  Eigen::VectorXd eigs(dim);
  Eigen::VectorXd levels(dim);
  std::size_t pos = 0;
  for (std::size_t sector = 0; sector < model.m.size(); ++sector) {
    const double lam = model.weights[sector] / model.dims[sector];
    for (int c = 0; c < model.dims[sector]; ++c, ++pos) {
      eigs[pos] = lam;
      levels[pos] = model.m[sector];
    }
  }
  require(pos == dim, "steady_ergotropy_exact: dimension bookkeeping");
  std::sort(eigs.begin(), eigs.end(), std::greater<double>());
  std::sort(levels.begin(), levels.end());
  return -passive_energy(eigs, levels);  // mean energy is 0 by symmetry
}

double steady_ergotropy_gauss(int n_sites) {
  require(n_sites >= 4, "steady_ergotropy_gauss: N >= 4");
  return std::sqrt(n_sites / (4.0 * kPi));
}

DisorderAverage disorder_average(const std::vector<double>& times,
                                 const DisorderRun& run, int n_samples,
                                 std::uint64_t master_seed, int n_threads) {
  require(n_samples >= 1, "disorder_average: need at least one sample");
  const std::size_t len = times.size();
  std::vector<std::vector<double>> w(n_samples), e(n_samples), m2(n_samples);
  parallel_for(n_samples, n_threads, [&](std::size_t s) {
    RngStream rng(master_seed, s);
    run(static_cast<int>(s), rng, w[s], e[s], m2[s]);
    require(w[s].size() == len && e[s].size() == len && m2[s].size() == len,
            "disorder_average: series length mismatch");
  });
  auto reduce = [&](const std::vector<std::vector<double>>& series) {
    SeriesStats st;
    st.mean.assign(len, 0.0);
    st.stderr_.assign(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
      double mean = 0.0;
      for (int s = 0; s < n_samples; ++s) mean += series[s][k];
      mean /= n_samples;
      double var = 0.0;
      for (int s = 0; s < n_samples; ++s) {
        var += (series[s][k] - mean) * (series[s][k] - mean);
      }
      st.mean[k] = mean;
      st.stderr_[k] = n_samples > 1
                          ? std::sqrt(var / (n_samples - 1.0) / n_samples)
                          : 0.0;
    }
    return st;
  };
  DisorderAverage out;
  out.times = times;
  out.w = reduce(w);
  out.e = reduce(e);
  out.m2 = reduce(m2);
  return out;
}

}  // namespace qb
