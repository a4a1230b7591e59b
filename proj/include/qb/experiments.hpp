#pragma once

#include <string>

#include <json.hpp>

#include "qb/analysis.hpp"
#include "qb/observables.hpp"
#include "qb/stabilizer.hpp"

namespace qb {

using Json = nlohmann::json;

// Thrown when a requested run exceeds the desk-scale size caps; the CLI
// maps it to exit code 3 (invalid configs exit 2).
struct SizeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  double tmax = 20.0;
  double dt = 0.05;
  std::vector<double> times() const;
};

// One experiment's time series plus enough metadata to reproduce it.
struct RunRecord {
  std::vector<double> times;
  std::vector<double> w, e, m2;
  std::vector<double> avg_w, avg_e, avg_m2;
  std::uint64_t seed = 0;
  SpinUnit unit = SpinUnit::Half;
  Json meta;  // effective config, fits, extra diagnostics

  void finalize_averages();
};

// CSV body: header + one row per time, columns
// t,W,E,M2,avgW,avgE,avgM2, every value in 17-significant-digit
// scientific notation so reruns are byte-comparable.
std::string run_record_csv(const RunRecord& rec);
void write_run_record(const RunRecord& rec, const std::string& out_prefix);

// Versioned binary statevector: "QBSV", u16 version, u16 N, then 2^N
// little-endian (re, im) float64 pairs.
void write_qbsv(const StateVector& psi, const std::string& path);
StateVector read_qbsv(const std::string& path);

// ---- scenario configs ----

struct XxzConfig {
  int n = 8;
  double j = 1.0;
  double delta = 1.0;
  TimeGrid grid;
  SpinUnit unit = SpinUnit::Half;
  std::uint64_t seed = 1;  // stamped only; the run is deterministic
  int threads = 1;
};

struct CsykConfig {
  int n = 8;
  double j = 1.0;
  TimeGrid grid{25.0, 0.05};
  int n_disorder = 8;
  SpinUnit unit = SpinUnit::Half;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct BrickwallConfig {
  int n = 10;
  int depth = 60;
  GateFamily family = GateFamily::U1Haar;
  double j = 1.0;    // Hamiltonian-generated gates
  double tau = 1.0;  // gate time
  FirstLayer first_layer = FirstLayer::OddPattern;
  int n_seeds = 20;
  SpinUnit unit = SpinUnit::SigmaZ;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct XyConfig {
  int n = 8;
  double j_prime = 1.0;
  std::vector<double> gammas{0.2, 1.0};
  double h_min = 0.0;
  double h_max = 2.0;
  double h_step = 0.02;
  int pulses = 64;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct PmaxRecord {
  double gamma = 0.0;
  double h = 0.0;
  double initial_sre = 0.0;  // bits
  double p_max = 0.0;        // energy per pulse
  int argmax_k = 0;
};

// ---- runners ----

// Domain-wall state charged through H_B + H_C + H_XXZ; records W, E, M2
// and running averages, the ergotropy onset time, and the correlation of
// the averaged series past the onset.
RunRecord run_xxz_charge(const XxzConfig& cfg);

struct CsykResult {
  RunRecord mean;  // disorder-averaged series
  std::vector<double> se_w, se_e, se_m2;
  double growth_alpha = 0.0;  // M2 ~ t^alpha on the early window
  double growth_beta = 0.0;   // E ~ t^beta
  FitResult tanh_sum;         // M2 vs E
  double m2_sat = 0.0;
  MasterCurve master;
  double max_mz_drift = 0.0;  // U(1) conservation residual
};

CsykResult run_csyk_charge(const CsykConfig& cfg);

struct BrickwallResult {
  RunRecord mean;  // per-layer series averaged over circuit seeds
  std::vector<double> se_w, se_e, se_m2;
  // Clifford family only: seed-averaged battery rank and the
  // rank-formula ergotropy (sigma_z units).
  std::vector<double> rank;
  std::vector<double> rank_ergotropy;
  // U(1) family only
  double m2_sat = 0.0;
  double log2_binom = 0.0;
};

BrickwallResult run_brickwall_experiment(const BrickwallConfig& cfg);

std::vector<PmaxRecord> run_xy_pulsed(const XyConfig& cfg);

std::string pmax_csv(const std::vector<PmaxRecord>& records);
void write_pmax_records(const std::vector<PmaxRecord>& records, const Json& meta,
                        const std::string& out_prefix);

// 17-significant-digit scientific formatting shared by all writers.
std::string format_full(double v);

}  // namespace qb
