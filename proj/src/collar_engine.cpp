#include "qlmass/collar_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlmass/errors.hpp"
#include "qlmass/numerics.hpp"

namespace qlmass {

double Grid2D::min() const {
  double r = std::numeric_limits<double>::infinity();
  for (double x : v)
    if (!std::isnan(x)) r = std::min(r, x);
  return r;
}

double Grid2D::max_abs() const {
  double r = 0.0;
  for (double x : v)
    if (!std::isnan(x)) r = std::max(r, std::abs(x));
  return r;
}

namespace {

double antiderivative(double v, double m) {
  if (m == 0.0) return v;
  return std::sqrt(v * (v - 2.0 * m)) +
         2.0 * m * std::log(std::sqrt(v) + std::sqrt(v - 2.0 * m));
}

}  // namespace

SchwarzschildProfile::SchwarzschildProfile(double m, double r0, double t_max,
                                           int n_samples)
    : m_(m), r0_(r0), t_max_(t_max) {
  if (!(r0 > 0.0))
    throw Error(ErrorCode::invalid_input, "profile needs r0 > 0");
  if (!(r0 > 2.0 * m))
    throw Error(ErrorCode::invalid_input,
                "profile starts at or inside the horizon (r0 <= 2m)");
  if (!(t_max > 0.0))
    throw Error(ErrorCode::invalid_input, "profile needs t_max > 0");

  t_grid_ = linspace(0.0, t_max, n_samples);
  samples_ = integrate_ode(
      [m](double, double v) { return std::sqrt(1.0 - 2.0 * m / v); }, 0.0, r0,
      t_grid_, 1e-13, 1e-14);

  auto vp = grid_derivative(t_grid_, samples_, 1, 7);
  for (int i = 0; i < n_samples; ++i) {
    ode_residual_ = std::max(
        ode_residual_, std::abs(vp[i] - speed(samples_[i])));
    inverse_agreement_ = std::max(
        inverse_agreement_, std::abs(samples_[i] - value(t_grid_[i])));
  }
}

double profile_value(double m, double r0, double t) {
  if (t == 0.0) return r0;
  const double base = antiderivative(r0, m);
  auto speed = [m](double v) { return std::sqrt(1.0 - 2.0 * m / v); };
  // v' <= 1 for m >= 0; for m < 0 the speed is largest at v = r0.
  const double lo = r0;
  double hi = (m >= 0.0) ? r0 + t : r0 + t * speed(r0);
  hi *= 1.0 + 1e-12;
  auto F = [&](double v) { return antiderivative(v, m) - base; };
  auto dF = [&](double v) { return 1.0 / speed(v); };
  return solve_monotone(F, dF, lo, hi, t, 1e-15);
}

double profile_t_of(double m, double r0, double v) {
  return antiderivative(v, m) - antiderivative(r0, m);
}

double SchwarzschildProfile::value(double t) const {
  return profile_value(m_, r0_, t);
}

double SchwarzschildProfile::t_of(double v) const {
  return profile_t_of(m_, r0_, v);
}

SchwarzschildProfile solve_profile(double m, double r0, double t_max,
                                   int n_samples) {
  return SchwarzschildProfile(m, r0, t_max, n_samples);
}

PathCurvatureTerms curvature_terms(const TraceFreePath& path,
                                   const SurfaceField& H1) {
  const int ns = path.n_s(), nx = path.n_theta();
  if (H1.size() != nx)
    throw Error(ErrorCode::mismatched_grids, "H1 not on the path grid");
  PathCurvatureTerms t;
  t.G = Grid2D(ns, nx);
  t.gdot2 = Grid2D(ns, nx);
  std::vector<double> invH(nx);
  for (int j = 0; j < nx; ++j) {
    if (!(H1.values[j] > 0.0))
      throw Error(ErrorCode::invalid_input, "H1 must be positive");
    invH[j] = 1.0 / H1.values[j];
  }
  SurfaceField invH_field(invH, "length");
  t.chi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ns; ++i) {
    auto K = gaussian_curvature(path.metrics[i]);
    auto lap = laplace_beltrami(path.metrics[i], invH_field);
    for (int j = 0; j < nx; ++j) {
      const double g = 2.0 * K.values[j] - 2.0 * H1.values[j] * lap.values[j];
      t.G.at(i, j) = g;
      t.gdot2.at(i, j) = path.gdot_norm2[i][j];
      t.chi = std::min(t.chi, g);
    }
  }
  return t;
}

MassParameters choose_mass_parameter(const AxisymmetricMetric& g1,
                                     const SurfaceField& H1,
                                     const TraceFreePath& path) {
  const int nx = g1.size();
  auto terms = curvature_terms(path, H1);
  const double chi = terms.chi;
  double maxH2 = 0.0;
  for (int j = 0; j < nx; ++j)
    maxH2 = std::max(maxH2, H1.values[j] * H1.values[j]);
  if (!(chi > 0.5 * maxH2))
    throw Error(ErrorCode::condition_violated,
                "chi = " + std::to_string(chi) + " <= (1/2) max H1^2 = " +
                    std::to_string(0.5 * maxH2));

  MassParameters p;
  p.chi = chi;
  p.xi = SurfaceField(std::vector<double>(nx), "dimensionless");
  p.m_pointwise = SurfaceField(std::vector<double>(nx), "length");
  const double r0 = area_radius(g1);
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nx; ++j) {
    const double H2 = H1.values[j] * H1.values[j];
    const double xi = 0.5 * (1.0 + H2 / (2.0 * chi));
    p.xi.values[j] = xi;
    const double mj = 0.5 * r0 * (1.0 - H2 / (2.0 * xi * chi));
    p.m_pointwise.values[j] = mj;
    m = std::min(m, mj);
  }
  p.m = m;
  if (!(m > 0.0))
    throw Error(ErrorCode::non_positive_mass,
                "mass formula gives m = " + std::to_string(m));
  // Re-verify the inequality the mass choice is meant to deliver.
  const double c = 1.0 / (1.0 - 2.0 * m / r0);
  for (int j = 0; j < nx; ++j) {
    const double H2 = H1.values[j] * H1.values[j];
    if (!(0.5 * H2 * c < chi * (1.0 + 1e-12)))
      throw Error(ErrorCode::condition_violated,
                  "(1/2) H1^2 (1 - 2m/r0)^-1 >= chi at theta index " +
                      std::to_string(j));
  }
  return p;
}

double CollarSpec::gamma_ss(int j) const {
  return k * k * A.values[j] * A.values[j];
}

double CollarSpec::gamma_thth(int i, int j) const {
  const double w = v_at_s[i] / r0;
  const double f = path.metrics[i].f()[j];
  return w * w * f * f;
}

double CollarSpec::gamma_phph(int i, int j) const {
  const double w = v_at_s[i] / r0;
  const double h = path.metrics[i].h()[j];
  return w * w * h * h;
}

CollarSpec build_collar(const AxisymmetricMetric& g1, const SurfaceField& H1,
                        const AxisymmetricMetric& g2, double epsilon,
                        const CollarOptions& opts) {
  if (!(epsilon > 0.0))
    throw Error(ErrorCode::usage_error,
                "epsilon must be positive (degenerate collar, k = 0)");
  const int nx = g1.size();
  if (H1.size() != nx)
    throw Error(ErrorCode::mismatched_grids, "H1 not on g1's grid");

  CollarSpec spec{.epsilon = epsilon,
                  .r0 = area_radius(g1),
                  .chi = 0.0,
                  .m = 0.0,
                  .k = 0.0,
                  .m_overridden = false,
                  .zero_tol = opts.zero_tol,
                  .path = build_path(g1, g2, opts.n_s),
                  .terms = {},
                  .H1 = H1,
                  .xi = {},
                  .A = {},
                  .profile = SchwarzschildProfile(0.0, 1.0, 1.0, 5),
                  .v_at_s = {}};
  const double r0 = spec.r0;

  if (opts.m_override) {
    spec.m = *opts.m_override;
    spec.m_overridden = true;
    spec.terms = curvature_terms(spec.path, H1);
    spec.chi = spec.terms.chi;
    if (!(r0 > 2.0 * spec.m))
      throw Error(ErrorCode::invalid_input, "override mass puts r0 <= 2m");
    const double c = 1.0 / (1.0 - 2.0 * spec.m / r0);
    spec.xi = SurfaceField(std::vector<double>(nx), "dimensionless");
    for (int j = 0; j < nx; ++j) {
      const double H2 = H1.values[j] * H1.values[j];
      spec.xi.values[j] = 0.5 * (1.0 + H2 / (2.0 * spec.chi));
      if (0.5 * H2 * c > spec.chi * (1.0 + 1e-9))
        throw Error(ErrorCode::condition_violated,
                    "override mass violates (1/2) H1^2 (1-2m/r0)^-1 <= chi");
    }
  } else {
    auto params = choose_mass_parameter(g1, H1, spec.path);
    spec.terms = curvature_terms(spec.path, H1);
    spec.chi = params.chi;
    spec.m = params.m;
    spec.xi = params.xi;
  }

  // k fixes the end metric: v_m(k) = (1 + eps) r0.
  const double v_target = (1.0 + epsilon) * r0;
  spec.k = profile_t_of(spec.m, r0, v_target);
  spec.profile = SchwarzschildProfile(spec.m, r0, spec.k);
  const double v_check = spec.profile.samples().back();
  if (std::abs(v_check / r0 - (1.0 + epsilon)) > 1e-10)
    throw Error(ErrorCode::bracket_violation,
                "profile end misses (1+eps) r0: v(k) = " +
                    std::to_string(v_check));

  // Paper bracket: eps r0 <= k <= eps r0 (1 - 2m/r0)^{-1/2}; the upper
  // endpoint equals eps r0 min_x sqrt(2 Xi chi)/H1 for the formula mass.
  const double k_lo = epsilon * r0;
  const double k_hi = epsilon * r0 / std::sqrt(1.0 - 2.0 * spec.m / r0);
  if (spec.k < k_lo * (1.0 - 1e-9) || spec.k > k_hi * (1.0 + 1e-9))
    throw Error(ErrorCode::bracket_violation,
                "k = " + std::to_string(spec.k) + " outside [" +
                    std::to_string(k_lo) + ", " + std::to_string(k_hi) + "]");

  spec.A = SurfaceField(std::vector<double>(nx), "dimensionless");
  const double root = std::sqrt(1.0 - 2.0 * spec.m / r0);
  for (int j = 0; j < nx; ++j)
    spec.A.values[j] = 2.0 * root / (H1.values[j] * r0);

  spec.v_at_s.resize(spec.path.n_s());
  for (int i = 0; i < spec.path.n_s(); ++i)
    spec.v_at_s[i] = spec.profile.value(spec.k * spec.path.s_grid[i]);
  return spec;
}

Grid2D collar_scalar_curvature_analytic(const CollarSpec& spec) {
  const int ns = spec.n_s(), nx = spec.n_theta();
  Grid2D R(ns, nx);
  const double c = 1.0 / (1.0 - 2.0 * spec.m / spec.r0);
  const double r02 = spec.r0 * spec.r0;
  const double k2 = spec.k * spec.k;
  for (int i = 0; i < ns; ++i) {
    const double v2 = spec.v_at_s[i] * spec.v_at_s[i];
    for (int j = 0; j < nx; ++j) {
      const double H2 = spec.H1.values[j] * spec.H1.values[j];
      const double bulk = spec.terms.G.at(i, j) - 0.5 * H2 * c;
      const double shear = (H2 / 16.0) * c * spec.terms.gdot2.at(i, j) / k2;
      R.at(i, j) = r02 * (bulk / v2 - shear);
    }
  }
  return R;
}

Grid2D collar_scalar_curvature_fd(const CollarSpec& spec, int halfwidth) {
  // Generic diagonal-metric scalar curvature in coordinates (s, theta, phi).
  // Only the smooth metric components are finite-differenced; the
  // Christoffel symbols and their derivatives are assembled from those
  // metric derivatives pointwise. Evaluation stays on the band
  // theta in [0.35, pi - 0.35], away from the polar coordinate singularity.
  const int ns = spec.n_s(), nx = spec.n_theta();
  const int stencil = 2 * halfwidth + 1;

  auto comp = [&](int a, int i, int j) {
    switch (a) {
      case 0: return spec.gamma_ss(j);
      case 1: return spec.gamma_thth(i, j);
      default: return spec.gamma_phph(i, j);
    }
  };

  std::span<const double> sg = spec.path.s_grid;
  std::span<const double> th = spec.path.metrics.front().theta();

  // d1[d][a] and d2[d][e][a] for d, e in {s, theta}; phi derivatives vanish.
  std::vector<Grid2D> d1(6, Grid2D(ns, nx));   // [d * 3 + a]
  std::vector<Grid2D> d2(12, Grid2D(ns, nx));  // [(2d + e) * 3 + a]
  {
    std::vector<double> col(ns), row(nx);
    for (int a = 0; a < 3; ++a) {
      for (int j = 0; j < nx; ++j) {
        for (int i = 0; i < ns; ++i) col[i] = comp(a, i, j);
        auto ds = grid_derivative(sg, col, 1, std::min(stencil, ns));
        auto dss = grid_derivative(sg, col, 2, std::min(stencil + 2, ns));
        for (int i = 0; i < ns; ++i) {
          d1[a].at(i, j) = ds[i];
          d2[a].at(i, j) = dss[i];
        }
      }
      for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < nx; ++j) row[j] = comp(a, i, j);
        auto dt = grid_derivative(th, row, 1, std::min(stencil, nx));
        auto dtt = grid_derivative(th, row, 2, std::min(stencil + 2, nx));
        for (int j = 0; j < nx; ++j) {
          d1[3 + a].at(i, j) = dt[j];
          d2[9 + a].at(i, j) = dtt[j];
        }
      }
      // Mixed derivative: s-derivative of the theta-derivative field.
      for (int j = 0; j < nx; ++j) {
        for (int i = 0; i < ns; ++i) col[i] = d1[3 + a].at(i, j);
        auto dst = grid_derivative(sg, col, 1, std::min(stencil, ns));
        for (int i = 0; i < ns; ++i) {
          d2[3 + a].at(i, j) = dst[i];  // (d=0,e=1)
          d2[6 + a].at(i, j) = dst[i];  // (d=1,e=0)
        }
      }
    }
  }

  Grid2D R(ns, nx);
  for (auto& x : R.v) x = std::numeric_limits<double>::quiet_NaN();
  int jlo = 0, jhi = nx - 1;
  while (jlo < nx && th[jlo] < 0.35) ++jlo;
  while (jhi >= 0 && th[jhi] > std::numbers::pi - 0.35) --jhi;
  // Centered stencils only in s as well; offset rows are left out.
  const int swin = std::min(2 * (halfwidth + 1), std::max(0, (ns - 3) / 2));

  for (int i = swin; i <= ns - 1 - swin; ++i)
    for (int j = jlo; j <= jhi; ++j) {
      double g[3];
      for (int a = 0; a < 3; ++a) g[a] = comp(a, i, j);
      auto pd1 = [&](int d, int a) {
        return d < 2 ? d1[d * 3 + a].at(i, j) : 0.0;
      };
      auto pd2 = [&](int d, int e, int a) {
        if (d > 1 || e > 1) return 0.0;
        return d2[(2 * d + e) * 3 + a].at(i, j);
      };
      // B_kij = d_i g_jk + d_j g_ik - d_k g_ij for the diagonal metric.
      auto B = [&](int k, int a, int b) {
        double t = 0.0;
        if (b == k) t += pd1(a, k);
        if (a == k) t += pd1(b, k);
        if (a == b) t -= pd1(k, a);
        return t;
      };
      auto dB = [&](int d, int k, int a, int b) {
        double t = 0.0;
        if (b == k) t += pd2(d, a, k);
        if (a == k) t += pd2(d, b, k);
        if (a == b) t -= pd2(d, k, a);
        return t;
      };
      auto G = [&](int k, int a, int b) { return 0.5 * B(k, a, b) / g[k]; };
      auto dG = [&](int d, int k, int a, int b) {
        return 0.5 * (dB(d, k, a, b) / g[k] -
                      B(k, a, b) * pd1(d, k) / (g[k] * g[k]));
      };
      double scalar = 0.0;
      for (int b = 0; b < 3; ++b) {
        double r = 0.0;
        for (int a = 0; a < 3; ++a) {
          if (a < 2) r += dG(a, a, b, b);
          if (b < 2) r -= dG(b, a, a, b);
          for (int l = 0; l < 3; ++l)
            r += G(a, a, l) * G(l, b, b) - G(a, b, l) * G(l, a, b);
        }
        scalar += r / g[b];
      }
      R.at(i, j) = scalar;
    }
  return R;
}

CurvatureComparison collar_scalar_curvature(const CollarSpec& spec,
                                            int oracle_halfwidth) {
  CurvatureComparison c{collar_scalar_curvature_analytic(spec),
                        collar_scalar_curvature_fd(spec, oracle_halfwidth),
                        0.0};
  const double scale =
      std::max(c.analytic.max_abs(), 1e-12 / (spec.r0 * spec.r0));
  double worst = 0.0;
  for (int i = 0; i < c.analytic.ns; ++i)
    for (int j = 0; j < c.analytic.nx; ++j) {
      const double o = c.oracle.at(i, j);
      if (std::isnan(o)) continue;
      worst = std::max(worst, std::abs(o - c.analytic.at(i, j)));
    }
  c.max_rel_discrepancy = worst / scale;
  return c;
}

SurfaceField leaf_mean_curvature(const CollarSpec& spec, double s) {
  if (s < 0.0 || s > 1.0)
    throw Error(ErrorCode::invalid_input, "leaf parameter outside [0, 1]");
  const double v = spec.profile.value(spec.k * s);
  const int nx = spec.n_theta();
  SurfaceField H(std::vector<double>(nx), "1/length");
  const double root = spec.profile.speed(v);
  for (int j = 0; j < nx; ++j)
    H.values[j] = 2.0 * root / (spec.A.values[j] * v);
  return H;
}

CollarCertificate certify(const CollarSpec& spec) {
  CollarCertificate cert;
  const int nx = spec.n_theta();
  const double eps = spec.epsilon;

  auto cmp = collar_scalar_curvature(spec, 2);
  cert.min_scalar_curvature = cmp.analytic.min();
  cert.strict_scalar = cert.min_scalar_curvature > spec.zero_tol;
  cert.oracle_discrepancy = cmp.max_rel_discrepancy;

  cert.min_leaf_H = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.n_s(); ++i) {
    const double v = spec.v_at_s[i];
    const double root = spec.profile.speed(v);
    for (int j = 0; j < nx; ++j)
      cert.min_leaf_H =
          std::min(cert.min_leaf_H, 2.0 * root / (spec.A.values[j] * v));
  }

  // Induced metric on Sigma_1 against (1+eps)^2 g2 (the equalized endpoint).
  const double wend = spec.v_at_s.back() / spec.r0;
  const auto& gend = spec.path.metrics.back();
  double endc0 = 0.0;
  for (int j = 0; j < nx; ++j) {
    const double f2 = gend.f()[j] * gend.f()[j];
    const double h2 = gend.h()[j] * gend.h()[j];
    const double d = std::abs(wend * wend - (1.0 + eps) * (1.0 + eps));
    endc0 = std::max(endc0, d * std::max(f2, h2));
  }
  cert.end_metric_check = endc0;

  cert.Hhat = leaf_mean_curvature(spec, 1.0);
  // Algebraic route: with q = 1 - 2m/r0 and v(k) = (1+eps) r0,
  // Hhat = H1 (1+eps)^-1 sqrt((eps + q) / ((1+eps) q)); agreement with the
  // leaf formula checks the k solve and the algebra chain.
  const double q = 1.0 - 2.0 * spec.m / spec.r0;
  const double ratio =
      std::sqrt((eps + q) / ((1.0 + eps) * q)) / (1.0 + eps);
  cert.Hhat_formula = SurfaceField(std::vector<double>(nx), "1/length");
  cert.margin = std::numeric_limits<double>::infinity();
  cert.hhat_below_H1 = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < nx; ++j) {
    const double H1j = spec.H1.values[j];
    cert.Hhat_formula.values[j] = ratio * H1j;
    cert.hhat_route_agreement =
        std::max(cert.hhat_route_agreement,
                 std::abs(cert.Hhat.values[j] - cert.Hhat_formula.values[j]));
    cert.margin =
        std::min(cert.margin, cert.Hhat.values[j] - H1j / (1.0 + eps));
    cert.hhat_below_H1 =
        std::max(cert.hhat_below_H1, cert.Hhat.values[j] - H1j);
  }

  // Scalar-curvature positivity sufficient condition, pointwise worst case:
  // alpha < 2 eps^2 (1 - Xi) H1^2 / (Xi (H1 + eps sqrt(2 Xi chi))^2).
  cert.alpha_threshold = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nx; ++j) {
    const double H1j = spec.H1.values[j];
    const double xij = spec.xi.values[j];
    const double den = H1j + eps * std::sqrt(2.0 * xij * spec.chi);
    const double thr =
        2.0 * eps * eps * (1.0 - xij) * H1j * H1j / (xij * den * den);
    if (thr < cert.alpha_threshold) {
      cert.alpha_threshold = thr;
      cert.alpha_binding_index = j;
    }
  }
  cert.alpha_inequality_ok = spec.path.alpha < cert.alpha_threshold;

  // Pointwise lower-bound field r0^2 chi (v^-2 (1 - Xi) - Xi alpha / (2 k^2)).
  cert.eq9_min_slack = std::numeric_limits<double>::infinity();
  const double r02 = spec.r0 * spec.r0;
  const double k2 = spec.k * spec.k;
  for (int i = 0; i < spec.n_s(); ++i) {
    const double v2 = spec.v_at_s[i] * spec.v_at_s[i];
    for (int j = 0; j < nx; ++j) {
      const double xij = spec.xi.values[j];
      const double lb =
          r02 * spec.chi *
          ((1.0 - xij) / v2 - 0.5 * xij * spec.path.alpha / k2);
      cert.eq9_min_slack =
          std::min(cert.eq9_min_slack, cmp.analytic.at(i, j) - lb);
    }
  }

  cert.valid = cert.min_scalar_curvature > -spec.zero_tol &&
               cert.min_leaf_H > 0.0 && cert.margin > 0.0 &&
               cert.end_metric_check < 1e-8 &&
               cert.hhat_below_H1 < spec.zero_tol;
  return cert;
}

}  // namespace qlmass
