#include "qb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qb {

SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const SimplexOptions& opts) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  std::vector<std::vector<double>> x(n + 1, x0);
  for (int i = 0; i < n; ++i) {
    const double step = x0[i] != 0.0 ? opts.initial_step * std::abs(x0[i])
                                     : opts.initial_step;
    x[i + 1][i] += step;
  }
  std::vector<double> fx(n + 1);
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);

  auto order = [&]() {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> x2(n + 1);
    std::vector<double> fx2(n + 1);
    for (int i = 0; i <= n; ++i) {
      x2[i] = x[idx[i]];
      fx2[i] = fx[idx[i]];
    }
    x.swap(x2);
    fx.swap(fx2);
  };

  bool converged = false;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    order();
    if (std::abs(fx[n] - fx[0]) <=
        opts.f_tolerance * (1.0 + std::abs(fx[0]))) {
      converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < n; ++d) centroid[d] += x[i][d];
    }
    for (int d = 0; d < n; ++d) centroid[d] /= n;

    auto along = [&](double coeff) {
      std::vector<double> p(n);
      for (int d = 0; d < n; ++d) p[d] = centroid[d] + coeff * (centroid[d] - x[n][d]);
      return p;
    };
    const auto xr = along(alpha);
    const double fr = f(xr);
    if (fr < fx[0]) {
      const auto xe = along(gamma);
      const double fe = f(xe);
      if (fe < fr) {
        x[n] = xe;
        fx[n] = fe;
      } else {
        x[n] = xr;
        fx[n] = fr;
      }
    } else if (fr < fx[n - 1]) {
      x[n] = xr;
      fx[n] = fr;
    } else {
      const auto xc = along(-rho);
      const double fc = f(xc);
      if (fc < fx[n]) {
        x[n] = xc;
        fx[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int d = 0; d < n; ++d) {
            x[i][d] = x[0][d] + sigma * (x[i][d] - x[0][d]);
          }
          fx[i] = f(x[i]);
        }
      }
    }
  }
  order();
  return SimplexResult{x[0], fx[0], converged};
}

namespace {

double variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double a : v) mean += a;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double a : v) var += (a - mean) * (a - mean);
  return var / static_cast<double>(v.size());
}

// Shared driver: restart the simplex over a deterministic start grid and
// keep the lowest SSE (ties broken by restart order).
FitResult restart_fit(const std::function<double(const std::vector<double>&)>& sse,
                      const std::vector<std::vector<double>>& starts) {
  FitResult best;
  best.residual_sse = std::numeric_limits<double>::infinity();
  SimplexOptions opts;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    SimplexResult res = nelder_mead(sse, starts[r], opts);
    if (res.f < best.residual_sse) {
      best.residual_sse = res.f;
      best.parameters = res.x;
      best.converged = res.converged;
    }
  }
  best.restarts_used = static_cast<int>(starts.size());
  // polish from the winning point
  SimplexOptions fine;
  fine.max_iterations = 8000;
  fine.initial_step = 0.02;
  SimplexResult res = nelder_mead(sse, best.parameters, fine);
  if (res.f <= best.residual_sse) {
    best.residual_sse = res.f;
    best.parameters = res.x;
    best.converged = res.converged || best.converged;
  }
  return best;
}

}  // namespace

FitResult fit_tanh_sum(const std::vector<double>& e,
                       const std::vector<double>& m2) {
  require(e.size() == m2.size() && e.size() >= 8,
          "fit_tanh_sum: need >= 8 points");
  FitResult degenerate;
  if (variance(m2) < 1e-16) {
    degenerate.parameters = {0.0, 0.0, 0.0, 0.0};
    degenerate.converged = false;
    return degenerate;
  }
  auto sse = [&](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const double model =
          p[0] * std::tanh(p[1] * e[k]) + p[2] * std::tanh(p[3] * e[k] * e[k]);
      const double d = model - m2[k];
      s += d * d;
    }
    return s;
  };
  const double m2max = *std::max_element(m2.begin(), m2.end());
  const double bs[4] = {0.05, 0.3, 1.5, 8.0};
  const double ds[4] = {0.01, 0.1, 1.0, 5.0};
  std::vector<std::vector<double>> starts;
  for (double b : bs) {
    for (double d : ds) {
      starts.push_back({0.7 * m2max, b, 0.3 * m2max, d});
    }
  }
  return restart_fit(sse, starts);
}

FitResult fit_tanh_power(const std::vector<double>& e,
                         const std::vector<double>& m2) {
  require(e.size() == m2.size() && e.size() >= 8,
          "fit_tanh_power: need >= 8 points");
  FitResult degenerate;
  if (variance(m2) < 1e-16) {
    degenerate.parameters = {0.0, 0.0, 1.0};
    degenerate.converged = false;
    return degenerate;
  }
  // a3 > 0 via log transform of the internal parameter
  auto sse = [&](const std::vector<double>& p) {
    const double a3 = std::exp(p[2]);
    double s = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const double model =
          p[0] * std::tanh(p[1] * std::pow(std::max(e[k], 0.0), a3));
      const double d = model - m2[k];
      s += d * d;
    }
    return s;
  };
  const double m2max = *std::max_element(m2.begin(), m2.end());
  const double a2s[4] = {0.02, 0.2, 1.0, 5.0};
  const double a3s[4] = {0.5, 1.0, 2.0, 3.0};
  std::vector<std::vector<double>> starts;
  for (double a2 : a2s) {
    for (double a3 : a3s) {
      starts.push_back({m2max, a2, std::log(a3)});
    }
  }
  FitResult fit = restart_fit(sse, starts);
  fit.parameters[2] = std::exp(fit.parameters[2]);
  return fit;
}

FitResult fit_power_law(const std::vector<double>& n_values,
                        const std::vector<double>& y) {
  require(n_values.size() == y.size() && n_values.size() >= 2,
          "fit_power_law: need >= 2 points");
  for (std::size_t k = 0; k < y.size(); ++k) {
    require(n_values[k] > 0.0 && y[k] > 0.0,
            "fit_power_law: inputs must be positive");
  }
  const std::size_t n = y.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lx = std::log(n_values[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  require(std::abs(denom) > 1e-30, "fit_power_law: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  FitResult fit;
  fit.parameters = {std::exp(intercept), slope};
  double sse = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::log(y[k]) - (intercept + slope * std::log(n_values[k]));
    sse += r * r;
  }
  fit.residual_sse = sse;
  fit.converged = true;
  fit.restarts_used = 0;
  return fit;
}

MasterCurve master_curve_rescale(const std::vector<double>& e,
                                 const std::vector<double>& m2, double m2_sat,
                                 int n_sites) {
  require(m2_sat > 0.0, "master_curve_rescale: saturation must be positive");
  require(e.size() == m2.size(), "master_curve_rescale: shape mismatch");
  MasterCurve mc;
  const double root_n = std::sqrt(static_cast<double>(n_sites));
  mc.e_tilde.reserve(e.size());
  mc.m2_tilde.reserve(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    mc.e_tilde.push_back(e[k] / root_n);
    mc.m2_tilde.push_back(m2[k] / m2_sat);
  }
  return mc;
}

double saturation_value(const std::vector<double>& series) {
  require(!series.empty(), "saturation_value: empty series");
  const std::size_t start = series.size() - std::max<std::size_t>(
                                                1, series.size() / 5);
  double mean = 0.0;
  for (std::size_t k = start; k < series.size(); ++k) mean += series[k];
  return mean / static_cast<double>(series.size() - start);
}

std::size_t presaturation_end(const std::vector<double>& series,
                              double fraction) {
  const double sat = saturation_value(series);
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k] >= fraction * sat) return k;
  }
  return series.size();
}

PerturbativePrediction perturbative_predictions(double j, double t) {
  PerturbativePrediction out;
  const double s = std::sin(0.5 * j * t);
  out.p = s * s;
  out.w = out.p;
  const double q = 1.0 - 2.0 * out.p;
  out.m2 = -std::log2(1.0 - 4.0 * out.p * (1.0 - out.p) * q * q);
  out.e = 0.0;
  out.beyond_validity = std::abs(j * t) > 1.0;
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 3, "pearson: need >= 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  require(sxx > 1e-30 && syy > 1e-30, "pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double max_vertical_deviation(const std::vector<double>& x1,
                              const std::vector<double>& y1,
                              const std::vector<double>& x2,
                              const std::vector<double>& y2,
                              int grid_points) {
  auto increasing_prefix = [](const std::vector<double>& x) {
    std::size_t end = 1;
    while (end < x.size() && x[end] > x[end - 1]) ++end;
    return end;
  };
  const std::size_t n1 = increasing_prefix(x1);
  const std::size_t n2 = increasing_prefix(x2);
  require(n1 >= 2 && n2 >= 2, "max_vertical_deviation: curves too short");
  const double lo = std::max(x1.front(), x2.front());
  const double hi = std::min(x1[n1 - 1], x2[n2 - 1]);
  require(hi > lo, "max_vertical_deviation: no overlapping range");
  auto interp = [](const std::vector<double>& x, const std::vector<double>& y,
                   std::size_t n, double q) {
    std::size_t k = 1;
    while (k < n - 1 && x[k] < q) ++k;
    const double w = (q - x[k - 1]) / (x[k] - x[k - 1]);
    return y[k - 1] + w * (y[k] - y[k - 1]);
  };
  double dev = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    const double q = lo + (hi - lo) * g / (grid_points - 1.0);
    dev = std::max(dev,
                   std::abs(interp(x1, y1, n1, q) - interp(x2, y2, n2, q)));
  }
  return dev;
}

}  // namespace qb
