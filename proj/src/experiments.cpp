#include "qb/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace qb {

std::vector<double> TimeGrid::times() const {
  require(tmax > 0.0 && dt > 0.0, "TimeGrid: tmax and dt must be positive");
  const int steps = static_cast<int>(std::llround(tmax / dt));
  std::vector<double> t(steps + 1);
  for (int k = 0; k <= steps; ++k) t[k] = k * dt;
  return t;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void RunRecord::finalize_averages() {
  avg_w = time_average(times, w);
  avg_e = time_average(times, e);
  avg_m2 = time_average(times, m2);
}

std::string run_record_csv(const RunRecord& rec) {
  std::string out = "t,W,E,M2,avgW,avgE,avgM2\n";
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    out += format_full(rec.times[k]);
    for (const auto* col : {&rec.w, &rec.e, &rec.m2, &rec.avg_w, &rec.avg_e,
                            &rec.avg_m2}) {
      out += ',';
      out += format_full((*col)[k]);
    }
    out += '\n';
  }
  return out;
}

void write_run_record(const RunRecord& rec, const std::string& out_prefix) {
  {
    std::ofstream csv(out_prefix + ".csv", std::ios::binary);
    require(csv.good(), "write_run_record: cannot open " + out_prefix + ".csv");
    csv << run_record_csv(rec);
  }
  Json side = rec.meta;
  side["seed"] = rec.seed;
  side["unit"] = spin_unit_name(rec.unit);
  std::ofstream js(out_prefix + ".json", std::ios::binary);
  require(js.good(), "write_run_record: cannot open " + out_prefix + ".json");
  js << side.dump(2) << '\n';
}

namespace {

void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_f64(std::string& s, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int b = 0; b < 8; ++b) {
    s.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
}

double take_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_qbsv(const StateVector& psi, const std::string& path) {
  std::string blob = "QBSV";
  put_u16(blob, 1);
  put_u16(blob, static_cast<std::uint16_t>(psi.n_sites));
  for (std::int64_t s = 0; s < psi.dim(); ++s) {
    put_f64(blob, psi.amplitudes[s].real());
    put_f64(blob, psi.amplitudes[s].imag());
  }
  std::ofstream f(path, std::ios::binary);
  require(f.good(), "write_qbsv: cannot open " + path);
  f.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

StateVector read_qbsv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "read_qbsv: cannot open " + path);
  std::string blob((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  require(blob.size() >= 8 && blob.compare(0, 4, "QBSV") == 0,
          "read_qbsv: bad magic");
  const auto* p = reinterpret_cast<const unsigned char*>(blob.data());
  const std::uint16_t version = static_cast<std::uint16_t>(p[4] | (p[5] << 8));
  const std::uint16_t n = static_cast<std::uint16_t>(p[6] | (p[7] << 8));
  require(version == 1, "read_qbsv: unsupported version");
  require(n >= 1 && n <= 24, "read_qbsv: implausible site count");
  const std::size_t dim = 1ULL << n;
  require(blob.size() == 8 + 16 * dim, "read_qbsv: truncated body");
  StateVector psi(n);
  for (std::size_t s = 0; s < dim; ++s) {
    psi.amplitudes[s] = Complex(take_f64(p + 8 + 16 * s),
                                take_f64(p + 8 + 16 * s + 8));
  }
  return psi;
}

namespace {

double total_sz(const StateVector& psi) {
  const auto& a = psi.amplitudes;
  double m = 0.0;
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(a.size()); ++s) {
    m += std::norm(a[s]) * (2 * std::popcount(s) - psi.n_sites);
  }
  return m;
}

// log-log growth exponent over the window j*t in [0.1, 1.0]; values at or
// below 1e-12 are excluded as numerically empty.
double growth_exponent(const std::vector<double>& times,
                       const std::vector<double>& values, double j) {
  std::vector<double> ts, vs;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double jt = j * times[k];
    if (jt >= 0.1 - 1e-12 && jt <= 1.0 + 1e-12 && values[k] > 1e-12) {
      ts.push_back(times[k]);
      vs.push_back(values[k]);
    }
  }
  require(ts.size() >= 3, "growth_exponent: window too empty");
  return fit_power_law(ts, vs).parameters[1];
}

Json time_grid_json(const TimeGrid& g) {
  return Json{{"tmax", g.tmax}, {"dt", g.dt}};
}

// Trajectory k always consumes stream k of the master seed.
std::vector<int> stream_indices(int n) {
  std::vector<int> idx(n);
  for (int k = 0; k < n; ++k) idx[k] = k;
  return idx;
}

}  // namespace

RunRecord run_xxz_charge(const XxzConfig& cfg) {
  if (cfg.n < 2 || cfg.n > 14 || cfg.n % 2 != 0) {
    throw SizeCapError("xxz: N must be even with 2 <= N <= 14");
  }
  const int n_b = cfg.n / 2;
  const auto times = cfg.grid.times();
  const Eigen::MatrixXcd h =
      Eigen::MatrixXcd(chain_field_diagonal(cfg.n, cfg.unit).asDiagonal()) +
      build_xxz(cfg.n, cfg.j, cfg.delta);
  const Eigen::VectorXd bdiag = battery_energies(n_b, cfg.unit);
  const StateVector psi0 = domain_wall_state(n_b);
  const double e0 = battery_energy(psi0, bdiag);
  const auto states = exact_evolve(h, psi0, times);

  RunRecord rec;
  rec.times = times;
  rec.seed = cfg.seed;
  rec.unit = cfg.unit;
  rec.w.resize(times.size());
  rec.e.resize(times.size());
  rec.m2.resize(times.size());
  parallel_for(times.size(), cfg.threads, [&](std::size_t k) {
    rec.w[k] = stored_work(states[k], bdiag, e0);
    rec.e[k] = ergotropy(partial_trace_battery(states[k]), bdiag);
    rec.m2[k] = sre_fast(states[k], 2.0, 1).value;
  });
  rec.finalize_averages();

  double onset = -1.0;
  std::size_t onset_idx = times.size();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (rec.e[k] > 1e-6) {
      onset = times[k];
      onset_idx = k;
      break;
    }
  }
  rec.meta = Json{{"scenario", "xxz"},
                  {"n", cfg.n},
                  {"j", cfg.j},
                  {"delta", cfg.delta},
                  {"grid", time_grid_json(cfg.grid)},
                  {"threads", cfg.threads},
                  {"ergotropy_onset_time", onset}};
  // averaged-series correlation over the growth window: past the
  // ergotropy onset, before the averaged magic saturates
  std::size_t sat_idx = presaturation_end(rec.avg_m2, 0.95);
  if (sat_idx <= onset_idx) sat_idx = times.size();
  if (onset_idx + 3 < sat_idx) {
    std::vector<double> am(rec.avg_m2.begin() + onset_idx,
                           rec.avg_m2.begin() + sat_idx);
    std::vector<double> ae(rec.avg_e.begin() + onset_idx,
                           rec.avg_e.begin() + sat_idx);
    rec.meta["pearson_avg_m2_vs_avg_e"] = pearson(ae, am);
  }
  return rec;
}

CsykResult run_csyk_charge(const CsykConfig& cfg) {
  if (cfg.n < 6 || cfg.n > 12 || cfg.n % 2 != 0) {
    throw SizeCapError("csyk: N must be even with 6 <= N <= 12");
  }
  require(cfg.n_disorder >= 1, "csyk: n_disorder must be >= 1");
  const int n_b = cfg.n / 2;
  const auto times = cfg.grid.times();
  const Eigen::VectorXd bdiag = battery_energies(n_b, cfg.unit);
  const Eigen::VectorXd field = chain_field_diagonal(cfg.n, cfg.unit);
  const StateVector psi0 = domain_wall_state(n_b);
  const double e0 = battery_energy(psi0, bdiag);

  std::vector<double> drift(cfg.n_disorder, 0.0);
  auto one_sample = [&](int sample, RngStream& rng, std::vector<double>& w,
                        std::vector<double>& e, std::vector<double>& m2) {
    const Eigen::MatrixXcd h = Eigen::MatrixXcd(field.asDiagonal()) +
                               build_csyk(cfg.n, cfg.j, rng);
    const auto states = exact_evolve(h, psi0, times);
    w.resize(times.size());
    e.resize(times.size());
    m2.resize(times.size());
    const double mz0 = total_sz(states[0]);
    double max_drift = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      w[k] = stored_work(states[k], bdiag, e0);
      e[k] = ergotropy(partial_trace_battery(states[k]), bdiag);
      m2[k] = sre_fast(states[k], 2.0, 1).value;
      max_drift = std::max(max_drift, std::abs(total_sz(states[k]) - mz0));
    }
    drift[sample] = max_drift;
  };
  const DisorderAverage avg = disorder_average(times, one_sample, cfg.n_disorder,
                                               cfg.seed, cfg.threads);

  CsykResult res;
  res.mean.times = times;
  res.mean.w = avg.w.mean;
  res.mean.e = avg.e.mean;
  res.mean.m2 = avg.m2.mean;
  res.mean.finalize_averages();
  res.mean.seed = cfg.seed;
  res.mean.unit = cfg.unit;
  res.se_w = avg.w.stderr_;
  res.se_e = avg.e.stderr_;
  res.se_m2 = avg.m2.stderr_;
  res.growth_alpha = growth_exponent(times, res.mean.m2, cfg.j);
  res.growth_beta = growth_exponent(times, res.mean.e, cfg.j);
  res.tanh_sum = fit_tanh_sum(res.mean.e, res.mean.m2);
  res.m2_sat = saturation_value(res.mean.m2);
  res.master = master_curve_rescale(res.mean.e, res.mean.m2, res.m2_sat, cfg.n);
  res.max_mz_drift = *std::max_element(drift.begin(), drift.end());

  res.mean.meta = Json{
      {"scenario", "csyk"},
      {"n", cfg.n},
      {"j", cfg.j},
      {"grid", time_grid_json(cfg.grid)},
      {"n_disorder", cfg.n_disorder},
      {"stream_indices", stream_indices(cfg.n_disorder)},
      {"threads", cfg.threads},
      {"growth_alpha", res.growth_alpha},
      {"growth_beta", res.growth_beta},
      {"m2_sat", res.m2_sat},
      {"max_mz_drift", res.max_mz_drift},
      {"tanh_sum",
       Json{{"a", res.tanh_sum.parameters[0]},
            {"b", res.tanh_sum.parameters[1]},
            {"c", res.tanh_sum.parameters[2]},
            {"d", res.tanh_sum.parameters[3]},
            {"sse", res.tanh_sum.residual_sse},
            {"b_over_d",
             res.tanh_sum.parameters[3] != 0.0
                 ? res.tanh_sum.parameters[1] / res.tanh_sum.parameters[3]
                 : 0.0},
            {"converged", res.tanh_sum.converged}}},
      {"se_w", res.se_w},
      {"se_e", res.se_e},
      {"se_m2", res.se_m2}};
  return res;
}

BrickwallResult run_brickwall_experiment(const BrickwallConfig& cfg) {
  if (cfg.n % 2 != 0) throw SizeCapError("brickwall: N must be even");
  const bool tableau_only = cfg.family == GateFamily::Clifford;
  if (tableau_only) {
    if (cfg.n > 256) throw SizeCapError("brickwall: Clifford caps at N = 256");
  } else if (cfg.n > 14) {
    throw SizeCapError("brickwall: statevector families cap at N = 14");
  }
  require(cfg.depth >= 0 && cfg.n_seeds >= 1, "brickwall: bad depth/seeds");
  const int n_b = cfg.n / 2;
  const double scale = spin_scale(cfg.unit);
  std::vector<double> layers(cfg.depth + 1);
  for (int l = 0; l <= cfg.depth; ++l) layers[l] = l;

  std::vector<std::vector<double>> rank_series(cfg.n_seeds);
  auto one_seed = [&](int sample, RngStream& rng, std::vector<double>& w,
                      std::vector<double>& e, std::vector<double>& m2) {
    const std::size_t len = layers.size();
    w.assign(len, 0.0);
    e.assign(len, 0.0);
    m2.assign(len, 0.0);
    if (tableau_only) {
      rank_series[sample].assign(len, 0.0);
      StabilizerTableau tab = StabilizerTableau::domain_wall(n_b);
      for (std::size_t l = 0; l < len; ++l) {
        if (l > 0) {
          const auto bonds =
              brickwall_bonds(cfg.n, static_cast<int>(l) - 1, cfg.first_layer);
          std::vector<GateDraw> gates;
          gates.reserve(bonds.size());
          for (std::size_t b = 0; b < bonds.size(); ++b) {
            gates.push_back(draw_gate(cfg.family, cfg.j, cfg.tau, rng));
          }
          apply_brickwall_layer(tab, static_cast<int>(l) - 1, cfg.first_layer,
                                gates);
        }
        double mz = 0.0;
        for (int site = n_b; site < cfg.n; ++site) {
          mz += tab.z_expectation(site);
        }
        const int r = tab.battery_rank();
        rank_series[sample][l] = r;
        w[l] = scale * (n_b + mz);
        e[l] = scale * clifford_ergotropy(n_b, r, mz);
        m2[l] = 0.0;  // Clifford evolution keeps the state a stabilizer state
      }
      return;
    }
    const Eigen::VectorXd bdiag = battery_energies(n_b, cfg.unit);
    StateVector psi = domain_wall_state(n_b);
    const double e0 = battery_energy(psi, bdiag);
    for (std::size_t l = 0; l < len; ++l) {
      if (l > 0) {
        const auto bonds =
            brickwall_bonds(cfg.n, static_cast<int>(l) - 1, cfg.first_layer);
        std::vector<GateDraw> gates;
        gates.reserve(bonds.size());
        for (std::size_t b = 0; b < bonds.size(); ++b) {
          gates.push_back(draw_gate(cfg.family, cfg.j, cfg.tau, rng));
        }
        apply_brickwall_layer(psi, cfg.n, static_cast<int>(l) - 1,
                              cfg.first_layer, gates);
      }
      w[l] = stored_work(psi, bdiag, e0);
      e[l] = ergotropy(partial_trace_battery(psi), bdiag);
      m2[l] = sre_fast(psi, 2.0, 1).value;
    }
  };
  const DisorderAverage avg =
      disorder_average(layers, one_seed, cfg.n_seeds, cfg.seed, cfg.threads);

  BrickwallResult res;
  res.mean.times = layers;
  res.mean.w = avg.w.mean;
  res.mean.e = avg.e.mean;
  res.mean.m2 = avg.m2.mean;
  res.mean.seed = cfg.seed;
  res.mean.unit = cfg.unit;
  res.mean.finalize_averages();
  res.se_w = avg.w.stderr_;
  res.se_e = avg.e.stderr_;
  res.se_m2 = avg.m2.stderr_;
  res.mean.meta = Json{{"scenario", "brickwall"},
                       {"n", cfg.n},
                       {"depth", cfg.depth},
                       {"family", gate_family_name(cfg.family)},
                       {"j", cfg.j},
                       {"tau", cfg.tau},
                       {"first_layer", cfg.first_layer == FirstLayer::OddPattern
                                           ? "odd"
                                           : "even"},
                       {"n_seeds", cfg.n_seeds},
                       {"stream_indices", stream_indices(cfg.n_seeds)},
                       {"threads", cfg.threads},
                       {"se_w", res.se_w},
                       {"se_e", res.se_e},
                       {"se_m2", res.se_m2}};
  if (tableau_only) {
    res.rank.assign(layers.size(), 0.0);
    res.rank_ergotropy = res.mean.e;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      for (int s = 0; s < cfg.n_seeds; ++s) res.rank[l] += rank_series[s][l];
      res.rank[l] /= cfg.n_seeds;
    }
    res.mean.meta["mean_rank"] = res.rank;
  }
  if (cfg.family == GateFamily::U1Haar) {
    res.m2_sat = saturation_value(res.mean.m2);
    res.log2_binom = std::log2(binomial(cfg.n, cfg.n / 2));
    res.mean.meta["m2_sat"] = res.m2_sat;
    res.mean.meta["log2_binom_half"] = res.log2_binom;
    res.mean.meta["m2_sat_ratio"] = res.m2_sat / res.log2_binom;
  }
  return res;
}

std::vector<PmaxRecord> run_xy_pulsed(const XyConfig& cfg) {
  if (cfg.n > 12 || cfg.n < 2) throw SizeCapError("xy: caps at 2 <= N <= 12");
  require(cfg.pulses >= 1 && cfg.h_step > 0.0 && cfg.h_max >= cfg.h_min,
          "xy: bad pulse/grid settings");
  std::vector<std::pair<double, double>> grid;
  for (double gamma : cfg.gammas) {
    const int steps = static_cast<int>(std::llround((cfg.h_max - cfg.h_min) /
                                                    cfg.h_step));
    for (int k = 0; k <= steps; ++k) {
      grid.emplace_back(gamma, cfg.h_min + k * cfg.h_step);
    }
  }
  std::vector<PmaxRecord> records(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t g) {
    const auto [gamma, h] = grid[g];
    const Eigen::MatrixXcd ham =
        build_xy(cfg.n, cfg.j_prime, gamma, h * cfg.j_prime);
    const Spectrum spec = hermitian_eig(ham);
    StateVector gs(cfg.n);
    gs.amplitudes = spec.eigenvectors.col(0);
    const double e_gs = spec.eigenvalues[0];
    PmaxRecord rec;
    rec.gamma = gamma;
    rec.h = h;
    rec.initial_sre = sre_fast(gs, 2.0, 1).value;
    const auto pulsed = pulsed_charge(gs, cfg.pulses);
    rec.p_max = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= cfg.pulses; ++k) {
      const double wk =
          (ham * pulsed[k - 1].amplitudes).dot(pulsed[k - 1].amplitudes).real() -
          e_gs;
      const double power = wk / k;
      if (power > rec.p_max) {
        rec.p_max = power;
        rec.argmax_k = k;
      }
    }
    records[g] = rec;
  });
  return records;
}

std::string pmax_csv(const std::vector<PmaxRecord>& records) {
  std::string out = "gamma,h,initial_sre,p_max,argmax_k\n";
  for (const auto& r : records) {
    out += format_full(r.gamma);
    out += ',';
    out += format_full(r.h);
    out += ',';
    out += format_full(r.initial_sre);
    out += ',';
    out += format_full(r.p_max);
    out += ',';
    out += std::to_string(r.argmax_k);
    out += '\n';
  }
  return out;
}

void write_pmax_records(const std::vector<PmaxRecord>& records, const Json& meta,
                        const std::string& out_prefix) {
  {
    std::ofstream csv(out_prefix + ".csv", std::ios::binary);
    require(csv.good(), "write_pmax_records: cannot open " + out_prefix + ".csv");
    csv << pmax_csv(records);
  }
  std::ofstream js(out_prefix + ".json", std::ios::binary);
  require(js.good(), "write_pmax_records: cannot open " + out_prefix + ".json");
  js << meta.dump(2) << '\n';
}

}  // namespace qb
