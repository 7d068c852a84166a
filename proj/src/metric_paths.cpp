#include "qlmass/metric_paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qlmass/errors.hpp"
#include "qlmass/numerics.hpp"

namespace qlmass {

namespace {

// Samples extended across both poles with the given parity (+1 even, -1
// odd); interpolation near theta = 0 or pi then keeps centered stencils.
struct PolarExtended {
  std::vector<double> theta;
  std::vector<double> values;

  PolarExtended(std::span<const double> th, std::span<const double> v,
                int parity, int pad = 8) {
    const int n = static_cast<int>(th.size());
    theta.resize(n + 2 * pad);
    values.resize(n + 2 * pad);
    for (int j = 0; j < pad; ++j) {
      theta[pad - 1 - j] = -th[j + 1];
      values[pad - 1 - j] = parity * v[j + 1];
      theta[n + pad + j] = 2.0 * std::numbers::pi - th[n - 2 - j];
      values[n + pad + j] = parity * v[n - 2 - j];
    }
    for (int i = 0; i < n; ++i) {
      theta[pad + i] = th[i];
      values[pad + i] = v[i];
    }
  }

  double at(double t, int stencil = 8) const {
    return interp_local(theta, values, t, stencil);
  }
};

// Cumulative area C(theta) = 2 pi int_0^theta f h on a dense uniform grid.
// C is smooth in theta (quadratic at the poles), so the inverse is taken by
// Newton on the forward map rather than interpolating theta as a function of
// C, which would be sqrt-type there.
struct CumulativeArea {
  std::vector<double> theta;
  std::vector<double> value;  // strictly increasing
  std::vector<double> dens;   // C' = 2 pi f h

  double at(double t) const { return interp_local(theta, value, t); }

  double inverse(double target) const {
    if (target <= value.front()) return theta.front();
    if (target >= value.back()) return theta.back();
    auto C = [&](double t) { return interp_local(theta, value, t); };
    auto Cp = [&](double t) { return interp_local(theta, dens, t); };
    return solve_monotone(C, Cp, theta.front(), theta.back(), target, 1e-15);
  }
};

CumulativeArea cumulative_area(const AxisymmetricMetric& g, int refine = 32) {
  const int n = g.size();
  const int m = (n - 1) * refine + 1;  // m - 1 even for even refine
  std::vector<double> dens_samples(n);
  for (int i = 0; i < n; ++i) dens_samples[i] = g.f()[i] * g.h()[i];

  auto thd = linspace(0.0, std::numbers::pi, m);
  std::vector<double> dens(m);
  PolarExtended dens_ext(g.theta(), dens_samples, -1);  // f h is odd
  for (int i = 0; i < m; ++i)
    dens[i] = 2.0 * std::numbers::pi * dens_ext.at(thd[i]);

  // The table keeps only the Simpson pair boundaries: every stored value has
  // the full 4th-order accumulation accuracy, and interpolation between them
  // stays clean.
  const double h = thd[1] - thd[0];
  const int mc = (m + 1) / 2;
  CumulativeArea c;
  c.theta.resize(mc);
  c.value.resize(mc);
  c.dens.resize(mc);
  c.theta[0] = thd[0];
  c.value[0] = 0.0;
  c.dens[0] = dens[0];
  for (int j = 1; j < mc; ++j) {
    const int i = 2 * j;
    c.theta[j] = thd[i];
    c.dens[j] = dens[i];
    c.value[j] = c.value[j - 1] +
                 h * (dens[i - 2] + 4.0 * dens[i - 1] + dens[i]) / 3.0;
  }
  for (int j = 1; j < mc; ++j)
    if (!(c.value[j] > c.value[j - 1]))
      throw Error(ErrorCode::degenerate_grid,
                  "cumulative area not strictly increasing (internal)");
  return c;
}

}  // namespace

AxisymmetricMetric area_equalize(const AxisymmetricMetric& g1,
                                 const AxisymmetricMetric& g2,
                                 double area_tol) {
  const double a1 = area(g1), a2 = area(g2);
  if (std::abs(a1 - a2) > area_tol * std::max(a1, a2))
    throw Error(ErrorCode::unequal_areas, "area(g1) = " + std::to_string(a1) +
                                              " vs area(g2) = " +
                                              std::to_string(a2));
  const int n = g1.size();
  auto c1 = cumulative_area(g1);
  auto c2 = cumulative_area(g2);
  const double scale = c2.value.back() / c1.value.back();

  std::vector<double> th(g1.theta().begin(), g1.theta().end());
  std::vector<double> f(n), h(n);
  PolarExtended h2_ext(g2.theta(), g2.h(), -1);
  for (int i = 1; i < n - 1; ++i) {
    const double phi = c2.inverse(scale * c1.at(th[i]));
    const double h2v = h2_ext.at(phi);
    h[i] = h2v;
    // Matched cumulative areas force the pulled-back density to equal
    // f1 h1; imposing it exactly avoids differentiating phi.
    f[i] = g1.f()[i] * g1.h()[i] / h2v;
  }
  h[0] = 0.0;
  h[n - 1] = 0.0;
  // Pole limits of f~ = f1 h1 / h2(phi) by even extrapolation in theta^2
  // from the interior values (consistent with the neighbours to high order).
  {
    const int pts = 5;
    std::vector<double> x(pts), y(pts);
    for (int j = 0; j < pts; ++j) {
      x[j] = th[j + 1] * th[j + 1];
      y[j] = f[j + 1];
    }
    f[0] = interp_local(x, y, 0.0, pts);
    for (int j = 0; j < pts; ++j) {
      const double d = std::numbers::pi - th[n - 2 - j];
      x[j] = d * d;
      y[j] = f[n - 2 - j];
    }
    f[n - 1] = interp_local(x, y, 0.0, pts);
  }
  return AxisymmetricMetric(std::move(th), std::move(f), std::move(h));
}

TraceFreePath build_path(const AxisymmetricMetric& g1,
                         const AxisymmetricMetric& g2, int n_s) {
  auto g2e = area_equalize(g1, g2);
  const int n = g1.size();

  TraceFreePath p;
  p.s_grid = linspace(0.0, 1.0, n_s);
  p.log_ratio.resize(n);
  for (int i = 1; i < n - 1; ++i)
    p.log_ratio[i] = std::log((g2e.f()[i] * g1.h()[i]) /
                              (g1.f()[i] * g2e.h()[i]));
  // At the poles smooth closure gives r = (f2~/f1)^2, which also makes the
  // s = 1 endpoint land on the equalized metric exactly.
  p.log_ratio[0] = 2.0 * std::log(g2e.f().front() / g1.f().front());
  p.log_ratio[n - 1] = 2.0 * std::log(g2e.f().back() / g1.f().back());

  p.metrics.reserve(n_s);
  std::vector<double> th(g1.theta().begin(), g1.theta().end());
  for (int k = 0; k < n_s; ++k) {
    const double s = p.s_grid[k];
    std::vector<double> f(n), h(n);
    for (int i = 0; i < n; ++i) {
      const double e = std::exp(0.5 * s * p.log_ratio[i]);
      f[i] = g1.f()[i] * e;
      h[i] = g1.h()[i] / e;
    }
    h[0] = 0.0;
    h[n - 1] = 0.0;
    p.metrics.emplace_back(th, std::move(f), std::move(h));
  }

  // Velocities by 4th-order finite differences in s; the velocity norm is
  // |g'|_g^2 = (2 f'/f)^2 + (2 h'/h)^2, with the pole value of h'/h taken
  // from the closed form -(1/2) log r.
  p.f_dot.assign(n_s, std::vector<double>(n));
  p.h_dot.assign(n_s, std::vector<double>(n));
  p.gdot_norm2.assign(n_s, std::vector<double>(n));
  std::vector<double> col(n_s);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n_s; ++k) col[k] = p.metrics[k].f()[i];
    auto df = grid_derivative(p.s_grid, col, 1, 5);
    for (int k = 0; k < n_s; ++k) col[k] = p.metrics[k].h()[i];
    auto dh = grid_derivative(p.s_grid, col, 1, 5);
    for (int k = 0; k < n_s; ++k) {
      p.f_dot[k][i] = df[k];
      p.h_dot[k][i] = dh[k];
    }
  }
  double defect = 0.0, max_norm2 = 0.0;
  for (int k = 0; k < n_s; ++k) {
    for (int i = 0; i < n; ++i) {
      const double rf = 2.0 * p.f_dot[k][i] / p.metrics[k].f()[i];
      const double rh = (i == 0 || i == n - 1)
                            ? -p.log_ratio[i]
                            : 2.0 * p.h_dot[k][i] / p.metrics[k].h()[i];
      defect = std::max(defect, std::abs(rf + rh));
      const double norm2 = rf * rf + rh * rh;
      p.gdot_norm2[k][i] = norm2;
      max_norm2 = std::max(max_norm2, norm2);
    }
  }
  p.trace_defect = defect;
  p.alpha = 0.25 * max_norm2;

  double beta = std::numeric_limits<double>::infinity();
  int bad_k = -1, bad_i = -1;
  for (int k = 0; k < n_s; ++k) {
    auto K = gaussian_curvature(p.metrics[k]);
    for (int i = 0; i < n; ++i)
      if (K.values[i] < beta) {
        beta = K.values[i];
        bad_k = k;
        bad_i = i;
      }
  }
  p.beta = beta;
  if (!(beta > 0.0))
    throw Error(ErrorCode::positive_curvature_lost,
                "K(g(s)) <= 0 at s index " + std::to_string(bad_k) +
                    ", theta index " + std::to_string(bad_i) +
                    " (K = " + std::to_string(beta) + ")");
  return p;
}

PathConstants path_constants(const TraceFreePath& path) {
  return {path.alpha, path.beta};
}

}  // namespace qlmass
