#ifndef QLMASS_COLLAR_ENGINE_HPP
#define QLMASS_COLLAR_ENGINE_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "qlmass/metric_paths.hpp"
#include "qlmass/surface_geometry.hpp"

namespace qlmass {

struct Grid2D {
  int ns = 0, nx = 0;
  std::vector<double> v;

  Grid2D() = default;
  Grid2D(int s, int x) : ns(s), nx(x), v(static_cast<size_t>(s) * x, 0.0) {}
  double& at(int i, int j) { return v[static_cast<size_t>(i) * nx + j]; }
  double at(int i, int j) const { return v[static_cast<size_t>(i) * nx + j]; }
  double min() const;
  double max_abs() const;
};

// Areal profile of the spatial Schwarzschild metric dt^2 + v(t)^2 g_*:
// v' = sqrt(1 - 2m/v), v(0) = r0. The primary evaluation path inverts the
// closed-form antiderivative
//   T(v) = sqrt(v (v - 2m)) + 2m log(sqrt(v) + sqrt(v - 2m)),
// and an adaptive ODE solve provides the cross-checking samples.
class SchwarzschildProfile {
 public:
  SchwarzschildProfile(double m, double r0, double t_max, int n_samples = 129);

  double m() const { return m_; }
  double r0() const { return r0_; }
  double t_max() const { return t_max_; }
  std::span<const double> t_grid() const { return t_grid_; }
  std::span<const double> samples() const { return samples_; }

  double value(double t) const;      // v(t) by Newton on T
  double t_of(double v) const;       // T(v) - T(r0)
  double speed(double v) const { return std::sqrt(1.0 - 2.0 * m_ / v); }

  double ode_residual() const { return ode_residual_; }
  double inverse_agreement() const { return inverse_agreement_; }

 private:
  double m_, r0_, t_max_;
  std::vector<double> t_grid_, samples_;
  double ode_residual_ = 0.0, inverse_agreement_ = 0.0;
};

SchwarzschildProfile solve_profile(double m, double r0, double t_max,
                                   int n_samples = 129);

// Closed-form profile evaluation without the ODE cross-check, for inner
// loops (parameter searches evaluate thousands of (m, k) cells).
double profile_value(double m, double r0, double t);
double profile_t_of(double m, double r0, double v);

// Per-(s, theta) quantities the collar curvature formula consumes:
// G = R(g(s)) - 2 H1 Delta_{g(s)}(1/H1) and the velocity norm |g'|^2_g.
struct PathCurvatureTerms {
  Grid2D G;
  Grid2D gdot2;
  double chi = 0.0;  // min of G over the grid
};

PathCurvatureTerms curvature_terms(const TraceFreePath& path,
                                   const SurfaceField& H1);

struct MassParameters {
  double chi = 0.0;
  SurfaceField xi;      // (1/2)(1 + H1^2 / (2 chi)) pointwise
  double m = 0.0;       // min over x of the pointwise mass formula
  SurfaceField m_pointwise;
};

// Fixes (chi, Xi, m) for the collar of given boundary data along a path.
// Throws ConditionViolated when chi <= (1/2) max H1^2 and NonPositiveMass
// when the mass formula fails to be positive.
MassParameters choose_mass_parameter(const AxisymmetricMetric& g1,
                                     const SurfaceField& H1,
                                     const TraceFreePath& path);

struct CollarOptions {
  int n_s = 65;
  std::optional<double> m_override;  // bypass the mass formula (validated)
  double zero_tol = 1e-8;            // numerical-zero slack in certificates
};

// Collar metric gamma = k^2 A(x)^2 ds^2 + r0^-2 v_m(k s)^2 g(s) on
// [0,1] x Sigma, assembled from Bartnik data (g1, H1) and target metric g2.
struct CollarSpec {
  double epsilon = 0.0;
  double r0 = 0.0;
  double chi = 0.0;
  double m = 0.0;
  double k = 0.0;
  bool m_overridden = false;
  double zero_tol = 1e-8;
  TraceFreePath path;
  PathCurvatureTerms terms;
  SurfaceField H1;
  SurfaceField xi;
  SurfaceField A;
  SchwarzschildProfile profile;
  std::vector<double> v_at_s;  // v_m(k s_j) on the path's s grid

  int n_s() const { return path.n_s(); }
  int n_theta() const { return path.n_theta(); }
  // Metric components at (s_i, theta_j): {gamma_ss, gamma_thth, gamma_phph}.
  double gamma_ss(int j) const;
  double gamma_thth(int i, int j) const;
  double gamma_phph(int i, int j) const;
};

CollarSpec build_collar(const AxisymmetricMetric& g1, const SurfaceField& H1,
                        const AxisymmetricMetric& g2, double epsilon,
                        const CollarOptions& opts = {});

// Closed-form scalar curvature of the collar metric on the full grid.
Grid2D collar_scalar_curvature_analytic(const CollarSpec& spec);

// Independent oracle: scalar curvature by direct finite differences of the
// Christoffel symbols of gamma on the (s, theta) grid. Evaluated away from
// the coordinate singularity at the poles; entries outside the window are
// NaN. halfwidth 1 gives the 2nd-order scheme, 2 (default) the 4th-order
// one, 4 the 8th-order one.
Grid2D collar_scalar_curvature_fd(const CollarSpec& spec, int halfwidth = 2);

struct CurvatureComparison {
  Grid2D analytic;
  Grid2D oracle;              // NaN outside the evaluation window
  double max_rel_discrepancy; // relative to the analytic field scale
};

CurvatureComparison collar_scalar_curvature(const CollarSpec& spec,
                                            int oracle_halfwidth = 2);

SurfaceField leaf_mean_curvature(const CollarSpec& spec, double s);

struct CollarCertificate {
  double min_scalar_curvature = 0.0;
  bool strict_scalar = false;   // min R > zero_tol (Schwarzschild slabs sit at 0)
  double min_leaf_H = 0.0;
  double end_metric_check = 0.0;
  SurfaceField Hhat;            // leaf mean curvature at s = 1
  SurfaceField Hhat_formula;    // the algebraic route through (m, epsilon)
  double hhat_route_agreement = 0.0;
  double margin = 0.0;          // min_x (Hhat - H1/(1+eps))
  double hhat_below_H1 = 0.0;   // max_x (Hhat - H1); < 0 pointwise required
  bool alpha_inequality_ok = false;
  double alpha_threshold = 0.0; // binding pointwise threshold
  int alpha_binding_index = -1;
  double eq9_min_slack = 0.0;   // min (R - lower bound field)
  double oracle_discrepancy = 0.0;
  bool valid = false;
};

CollarCertificate certify(const CollarSpec& spec);

}  // namespace qlmass

#endif
