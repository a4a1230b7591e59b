#pragma once

#include <functional>
#include <vector>

#include "qb/common.hpp"

namespace qb {

struct FitResult {
  std::vector<double> parameters;
  double residual_sse = 0.0;
  bool converged = false;
  int restarts_used = 0;
};

// Derivative-free Nelder-Mead minimizer; fully deterministic.
struct SimplexOptions {
  int max_iterations = 4000;
  double f_tolerance = 1e-14;
  double initial_step = 0.25;  // relative simplex size
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opts = {});

// M2 ~ A tanh(B E) + C tanh(D E^2); least squares with >= 16 deterministic
// restarts over a log-spaced (B, D) start grid. parameters = {A, B, C, D}.
FitResult fit_tanh_sum(const std::vector<double>& e,
                       const std::vector<double>& m2);

// M2 ~ a1 tanh(a2 E^{a3}) with a3 constrained positive. parameters =
// {a1, a2, a3}.
FitResult fit_tanh_power(const std::vector<double>& e,
                         const std::vector<double>& m2);

// y ~ a1 N^{a2}: linear least squares in log-log space; residual_sse is
// reported in log space. parameters = {a1, a2}.
FitResult fit_power_law(const std::vector<double>& n_values,
                        const std::vector<double>& y);

// M2 normalized by its saturation value, E by sqrt(N).
struct MasterCurve {
  std::vector<double> e_tilde;
  std::vector<double> m2_tilde;
};

MasterCurve master_curve_rescale(const std::vector<double>& e,
                                 const std::vector<double>& m2, double m2_sat,
                                 int n_sites);

// Tail mean over the final 20% of a series; the saturation estimator used
// for normalizations.
double saturation_value(const std::vector<double>& series);

// Index of the first entry reaching `fraction` of the saturation value;
// the pre-saturation window is [0, index).
std::size_t presaturation_end(const std::vector<double>& series,
                              double fraction = 0.95);

// Short-time domain-wall closed forms: p = sin^2(Jt/2), W = p,
// M2 = -log2[1 - 4p(1-p)(1-2p)^2], E = 0. Valid for Jt << 2; the warn
// flag trips beyond Jt = 1.
struct PerturbativePrediction {
  double p = 0.0;
  double w = 0.0;
  double m2 = 0.0;
  double e = 0.0;
  bool beyond_validity = false;
};

PerturbativePrediction perturbative_predictions(double j, double t);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Max vertical gap between two parametric curves over their common
// abscissa range, each restricted to its strictly-increasing prefix and
// compared on an interpolated grid.
double max_vertical_deviation(const std::vector<double>& x1,
                              const std::vector<double>& y1,
                              const std::vector<double>& x2,
                              const std::vector<double>& y2,
                              int grid_points = 64);

}  // namespace qb
