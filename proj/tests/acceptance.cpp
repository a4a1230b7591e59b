// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "qb/experiments.hpp"

using namespace qb;

namespace {

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> results;

void record(const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  results.push_back({name, pass, detail, seconds});
  std::printf("[%s] %-28s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// C1: the N = 2 trajectory reproduces the exact closed forms
// W(t) = sin^2(t/2), M2(t) = -log2[(1 + sin^4 t + cos^4 t)/2].
void criterion1() {
  Timer timer;
  const Eigen::MatrixXcd h =
      Eigen::MatrixXcd(chain_field_diagonal(2, SpinUnit::Half).asDiagonal()) +
      build_xxz(2, 1.0, 1.0);
  const StateVector psi0 = domain_wall_state(1);
  const Eigen::VectorXd bdiag = battery_energies(1, SpinUnit::Half);
  const double e0 = battery_energy(psi0, bdiag);
  std::vector<double> times(200);
  for (int k = 0; k < 200; ++k) times[k] = 0.05 * (k + 1);
  const auto states = exact_evolve(h, psi0, times);
  double dw = 0.0, dm = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double t = times[k];
    const double w_ref = std::pow(std::sin(0.5 * t), 2);
    const double st = std::sin(t), ct = std::cos(t);
    const double m_ref =
        -std::log2(0.5 * (1.0 + st * st * st * st + ct * ct * ct * ct));
    dw = std::max(dw, std::abs(stored_work(states[k], bdiag, e0) - w_ref));
    dm = std::max(dm, std::abs(sre_fast(states[k], 2.0).value - m_ref));
  }
  record("C1 two-site-closed-forms", dw < 1e-9 && dm < 1e-9,
         fmt("max|dW|=%.2e max|dM2|=%.2e at 200 points (tol 1e-9)", dw, dm),
         timer.seconds());
}

// C2: short-time domain-wall oracle at N = 4, 6, 8.
void criterion2() {
  Timer timer;
  double dw = 0.0, dm = 0.0, emax = 0.0;
  for (int n : {4, 6, 8}) {
    const int n_b = n / 2;
    const Eigen::MatrixXcd h =
        Eigen::MatrixXcd(chain_field_diagonal(n, SpinUnit::Half).asDiagonal()) +
        build_xxz(n, 1.0, 1.0);
    const StateVector psi0 = domain_wall_state(n_b);
    const Eigen::VectorXd bdiag = battery_energies(n_b, SpinUnit::Half);
    const double e0 = battery_energy(psi0, bdiag);
    std::vector<double> times;
    for (int k = 1; k <= 30; ++k) times.push_back(0.01 * k);
    const auto states = exact_evolve(h, psi0, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto pred = perturbative_predictions(1.0, times[k]);
      dw = std::max(dw, std::abs(stored_work(states[k], bdiag, e0) - pred.w));
      dm = std::max(dm, std::abs(sre_fast(states[k], 2.0).value - pred.m2));
      emax = std::max(emax,
                      ergotropy(partial_trace_battery(states[k]), bdiag));
    }
  }
  record("C2 perturbative-oracle", dw < 5e-3 && dm < 5e-3 && emax < 1e-3,
         fmt("max|dW|=%.2e max|dM2|=%.2e maxE=%.2e (tol 5e-3/5e-3/1e-3)", dw,
             dm, emax),
         timer.seconds());
}

// C3: fast and naive SRE agree; additivity; Clifford invariance.
void criterion3() {
  Timer timer;
  double dual = 0.0;
  int idx = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep, ++idx) {
      RngStream rng(202500 + idx);
      const StateVector psi = random_state(n, rng);
      dual = std::max(dual, std::abs(sre_fast(psi, 2.0).value -
                                     sre_naive(psi, 2.0).value));
    }
  }
  double additivity = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    RngStream rng(77000 + rep);
    const StateVector a = random_state(4, rng);
    const StateVector b = random_state(3, rng);
    additivity = std::max(
        additivity, std::abs(sre_fast(tensor_product(a, b), 2.0).value -
                             sre_fast(a, 2.0).value - sre_fast(b, 2.0).value));
  }
  double invariance = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    RngStream rng(88000 + rep);
    const StateVector psi = random_state(8, rng);
    const double before = sre_fast(psi, 2.0).value;
    CircuitSpec spec{8, 10, FirstLayer::OddPattern, GateFamily::Clifford, 1.0,
                     1.0};
    const auto states = run_brickwall(spec, psi, rng, false);
    invariance =
        std::max(invariance, std::abs(sre_fast(states.back(), 2.0).value - before));
  }
  record("C3 sre-dual-implementation",
         dual < 1e-9 && additivity < 1e-8 && invariance < 1e-8,
         fmt("dual=%.2e additivity=%.2e clifford-inv=%.2e "
             "(tol 1e-9/1e-8/1e-8)",
             dual, additivity, invariance),
         timer.seconds());
}

// C4: tableau and statevector engines agree exactly on 50 random Clifford
// brick-wall circuits at N = 10, depth 20.
void criterion4() {
  Timer timer;
  const int n = 10, n_b = 5, depth = 20;
  bool exact = true;
  double m2_max = 0.0, fp_gap = 0.0;
  for (int circuit = 0; circuit < 50 && exact; ++circuit) {
    RngStream rng(300000, circuit);
    CircuitSpec spec{n, depth, FirstLayer::OddPattern, GateFamily::Clifford,
                     1.0, 1.0};
    const auto layers = sample_brickwall_gates(spec, rng);
    StabilizerTableau tab = StabilizerTableau::domain_wall(n_b);
    StateVector psi = domain_wall_state(n_b);
    for (int l = 0; l < depth && exact; ++l) {
      apply_brickwall_layer(tab, l, spec.first_layer, layers[l]);
      apply_brickwall_layer(psi, n, l, spec.first_layer, layers[l]);
      double mz_tab = 0.0, mz_sv = 0.0;
      for (int site = 0; site < n; ++site) {
        const int zt = tab.z_expectation(site);
        const double zs = local_magnetization(psi, site);
        fp_gap = std::max(fp_gap, std::abs(zs - zt));
        if (std::lround(zs) != zt) exact = false;
        if (site >= n_b) {
          mz_tab += zt;
          mz_sv += zs;
        }
      }
      const int r_tab = tab.battery_rank();
      const DensityMatrix rho = partial_trace_battery(psi);
      const Spectrum spec_rho = hermitian_eig(rho);
      int nonzero = 0;
      for (Eigen::Index k = 0; k < spec_rho.eigenvalues.size(); ++k) {
        if (spec_rho.eigenvalues[k] > 0.5 * std::pow(2.0, -n_b)) ++nonzero;
      }
      const int r_sv = n_b - static_cast<int>(std::lround(std::log2(nonzero)));
      if (r_tab != r_sv) exact = false;
      const double e_tab = clifford_ergotropy(n_b, r_tab, mz_tab);
      const double e_sv =
          clifford_ergotropy(n_b, r_sv, std::lround(mz_sv));
      if (e_tab != e_sv) exact = false;
      m2_max = std::max(m2_max, sre_fast(psi, 2.0).value);
    }
  }
  record("C4 tableau-equivalence", exact && m2_max < 1e-9,
         fmt("discrete observables %s, fp gap=%.2e, max M2=%.2e (tol 1e-9)",
             exact ? "identical" : "DIFFER", fp_gap, m2_max),
         timer.seconds());
}

// C5: the large-n_b ergotropy law converges to the exact rank formula.
void criterion5() {
  Timer timer;
  auto gap = [](int n_b) {
    return std::abs(asymptotic_ergotropy(n_b, n_b / 2) -
                    clifford_ergotropy(n_b, n_b / 2, 0.0)) /
           n_b;
  };
  const double g16 = gap(16), g32 = gap(32), g64 = gap(64), g128 = gap(128);
  const bool pass =
      g32 < 0.08 && g64 < 0.05 && g16 > g32 && g32 > g64 && g64 > g128;
  record("C5 proposition-convergence", pass,
         fmt("gap/n_b = %.4f, %.4f, %.4f, %.4f at n_b = 16, 32, 64, 128 "
             "(tol 0.08@32, 0.05@64, decreasing)",
             g16, g32, g64, g128),
         timer.seconds());
}

// C6: steady-state block ergotropy against the Gaussian closed form.
void criterion6() {
  Timer timer;
  std::vector<double> sizes{8, 12, 16, 20};
  std::vector<double> values;
  for (double n : sizes) {
    values.push_back(steady_ergotropy_exact(
        block_state_model(static_cast<int>(n))));
  }
  const FitResult fit = fit_power_law(sizes, values);
  const double a2 = fit.parameters[1];
  const double ratio = values[2] / steady_ergotropy_gauss(16);
  const bool pass = a2 >= 0.4 && a2 <= 0.6 && std::abs(ratio - 1.0) <= 0.15;
  record("C6 steady-state-scaling", pass,
         fmt("a2=%.4f (req [0.4,0.6]); exact/gauss@N=16 = %.4f "
             "(req within 15%% of 1)",
             a2, ratio),
         timer.seconds());
}

// C7: cSYK growth exponents and magnetization conservation.
CsykResult csyk8;
void criterion7() {
  Timer timer;
  CsykConfig cfg;
  cfg.n = 8;
  cfg.j = 1.0;
  cfg.grid = {25.0, 0.05};
  cfg.n_disorder = 8;
  cfg.seed = 424242;
  cfg.threads = 0;
  csyk8 = run_csyk_charge(cfg);
  const bool pass = csyk8.growth_alpha >= 1.5 && csyk8.growth_alpha <= 2.5 &&
                    csyk8.growth_beta >= 1.5 && csyk8.growth_beta <= 2.5 &&
                    csyk8.max_mz_drift < 1e-9;
  record("C7 csyk-growth-exponents", pass,
         fmt("alpha=%.3f beta=%.3f (req [1.5,2.5]); mz drift=%.2e "
             "(tol 1e-9)",
             csyk8.growth_alpha, csyk8.growth_beta, csyk8.max_mz_drift),
         timer.seconds());
}

// C8: master-curve collapse of the rescaled (E, M2) relation at N = 6, 8.
void criterion8() {
  Timer timer;
  CsykConfig cfg;
  cfg.n = 6;
  cfg.grid = {25.0, 0.05};
  cfg.n_disorder = 8;
  cfg.seed = 434343;
  cfg.threads = 0;
  const CsykResult csyk6 = run_csyk_charge(cfg);
  const double dev = max_vertical_deviation(
      csyk6.master.e_tilde, csyk6.master.m2_tilde, csyk8.master.e_tilde,
      csyk8.master.m2_tilde);
  // The horizontal gap (first-crossing abscissae) is the well-conditioned
  // companion diagnostic where the curves rise nearly vertically.
  auto first_crossing = [](const std::vector<double>& x,
                           const std::vector<double>& y, double level) {
    for (std::size_t k = 1; k < y.size(); ++k) {
      if (y[k] >= level) {
        const double w = (level - y[k - 1]) / (y[k] - y[k - 1]);
        return x[k - 1] + w * (x[k] - x[k - 1]);
      }
      if (x[k] < x[k - 1]) break;  // leave the increasing prefix
    }
    return -1.0;
  };
  double dev_h = 0.0;
  for (double level = 0.1; level <= 0.9; level += 0.1) {
    const double x6 = first_crossing(csyk6.master.e_tilde,
                                     csyk6.master.m2_tilde, level);
    const double x8 = first_crossing(csyk8.master.e_tilde,
                                     csyk8.master.m2_tilde, level);
    if (x6 >= 0.0 && x8 >= 0.0) dev_h = std::max(dev_h, std::abs(x6 - x8));
  }
  record("C8 master-curve-collapse", dev < 0.1,
         fmt("max vertical deviation %.4f (tol 0.1); transposed gap %.4f",
             dev, dev_h),
         timer.seconds());
}

// C9: U(1) brick-wall saturation value and tanh-power fit quality.
void criterion9() {
  Timer timer;
  BrickwallConfig cfg;
  cfg.n = 10;
  cfg.depth = 60;
  cfg.family = GateFamily::U1Haar;
  cfg.n_seeds = 20;
  cfg.seed = 515151;
  cfg.threads = 0;
  const BrickwallResult res = run_brickwall_experiment(cfg);
  const double ratio = res.m2_sat / res.log2_binom;

  const std::size_t cut = presaturation_end(res.mean.m2, 0.95);
  std::vector<double> e(res.mean.e.begin(), res.mean.e.begin() + cut);
  std::vector<double> m2(res.mean.m2.begin(), res.mean.m2.begin() + cut);
  const FitResult fit = fit_tanh_power(e, m2);
  double var = 0.0, mean = 0.0;
  for (double v : m2) mean += v;
  mean /= static_cast<double>(m2.size());
  for (double v : m2) var += (v - mean) * (v - mean);
  const double rel_sse = fit.residual_sse / var;
  const bool pass = std::abs(ratio - 1.0) <= 0.15 && rel_sse < 0.05;
  record("C9 u1-saturation", pass,
         fmt("M2_sat=%.3f bits vs log2 C(10,5)=%.3f (ratio %.3f, req 15%%); "
             "tanh-power SSE/var=%.4f (req < 0.05)",
             res.m2_sat, res.log2_binom, ratio, rel_sse),
         timer.seconds());
}

// C10: pulsed-XY battery: SRE peak location, non-injectivity of P_max vs
// initial magic, and maximal power at low magic.
void criterion10() {
  Timer timer;
  XyConfig cfg;
  cfg.n = 8;
  cfg.gammas = {0.2, 1.0};
  cfg.h_min = 0.0;
  cfg.h_max = 2.0;
  cfg.h_step = 0.02;
  cfg.pulses = 64;
  cfg.threads = 0;
  const auto records = run_xy_pulsed(cfg);

  // The per-claim gamma assignments follow the scenario's pinned examples:
  // the SRE maximum near criticality is the gamma = 1 statement, the
  // gamma = 0.2 curve instead shows its kink (steepest drop) near h = 1
  // before decreasing, and the injectivity witness lives at gamma = 0.2.
  bool peak_ok = false;
  bool kink_ok = false;
  bool witness_ok = false;
  bool lowmagic_ok = true;
  std::string note;
  for (double gamma : cfg.gammas) {
    std::vector<PmaxRecord> slice;
    for (const auto& r : records) {
      if (r.gamma == gamma) slice.push_back(r);
    }
    double m2_max = 0.0, h_peak = 0.0;
    for (const auto& r : slice) {
      if (r.initial_sre > m2_max) {
        m2_max = r.initial_sre;
        h_peak = r.h;
      }
    }
    if (gamma == 1.0) {
      peak_ok = h_peak >= 0.8 && h_peak <= 1.2;
    } else {
      // steepest drop of M2(h) sits near h = 1; decreasing beyond it
      double drop = 0.0, h_kink = 0.0;
      for (std::size_t k = 1; k < slice.size(); ++k) {
        const double d = slice[k - 1].initial_sre - slice[k].initial_sre;
        if (d > drop) {
          drop = d;
          h_kink = slice[k].h;
        }
      }
      bool decreasing = true;
      for (std::size_t k = 1; k < slice.size(); ++k) {
        if (slice[k].h > 1.2 &&
            slice[k].initial_sre > slice[k - 1].initial_sre + 1e-9) {
          decreasing = false;
        }
      }
      kink_ok = h_kink >= 0.8 && h_kink <= 1.2 && decreasing;
      note += fmt("g=0.2: kink h=%.2f (M2 argmax h=%.2f); ", h_kink, h_peak);
    }

    // global-max power must sit at small initial magic
    double p_best = -1.0, m2_at_best = 0.0;
    for (const auto& r : slice) {
      if (r.p_max > p_best) {
        p_best = r.p_max;
        m2_at_best = r.initial_sre;
      }
    }
    if (m2_at_best > 0.25 * m2_max) lowmagic_ok = false;
    if (gamma == 1.0) note += fmt("g=1: peak h=%.2f; ", h_peak);
    note += fmt("g=%.1f P_max at M2/M2max=%.2f; ", gamma, m2_at_best / m2_max);

    if (gamma == 0.2) {
      // witness: equal magic (within 5%) but very different power
      for (std::size_t a = 0; a < slice.size() && !witness_ok; ++a) {
        for (std::size_t b = a + 1; b < slice.size() && !witness_ok; ++b) {
          const double ma = slice[a].initial_sre, mb = slice[b].initial_sre;
          const double pa = slice[a].p_max, pb = slice[b].p_max;
          if (std::max(ma, mb) <= 0.0) continue;
          if (std::abs(ma - mb) / std::max(ma, mb) <= 0.05 &&
              std::abs(pa - pb) / std::max(pa, pb) > 0.20) {
            witness_ok = true;
          }
        }
      }
    }
  }
  record("C10 xy-non-monotonicity",
         peak_ok && kink_ok && witness_ok && lowmagic_ok,
         note + fmt("injectivity witness %s", witness_ok ? "found" : "MISSING"),
         timer.seconds());
}

// C11: byte-identical CSV bodies on rerun with the same config and seed.
void criterion11() {
  Timer timer;
  XxzConfig xcfg;
  xcfg.n = 6;
  xcfg.grid = {5.0, 0.05};
  xcfg.seed = 616161;
  const std::string xxz_a = run_record_csv(run_xxz_charge(xcfg));
  const std::string xxz_b = run_record_csv(run_xxz_charge(xcfg));

  CsykConfig ccfg;
  ccfg.n = 6;
  ccfg.grid = {5.0, 0.1};
  ccfg.n_disorder = 2;
  ccfg.seed = 717171;
  ccfg.threads = 2;  // thread count must not change bytes
  const std::string csyk_a = run_record_csv(run_csyk_charge(ccfg).mean);
  ccfg.threads = 1;
  const std::string csyk_b = run_record_csv(run_csyk_charge(ccfg).mean);

  BrickwallConfig bcfg;
  bcfg.n = 8;
  bcfg.depth = 12;
  bcfg.n_seeds = 3;
  bcfg.family = GateFamily::Clifford;
  bcfg.seed = 818181;
  const std::string bw_a = run_record_csv(run_brickwall_experiment(bcfg).mean);
  const std::string bw_b = run_record_csv(run_brickwall_experiment(bcfg).mean);

  const bool pass = xxz_a == xxz_b && csyk_a == csyk_b && bw_a == bw_b;
  record("C11 reproducibility", pass,
         fmt("xxz %s, csyk %s (across thread counts), clifford brickwall %s",
             xxz_a == xxz_b ? "identical" : "DIFFERS",
             csyk_a == csyk_b ? "identical" : "DIFFERS",
             bw_a == bw_b ? "identical" : "DIFFERS"),
         timer.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance suite: 11 criteria\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  int failures = 0;
  for (const auto& c : results) {
    if (!c.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures;
}
