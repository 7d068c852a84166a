#include "qlmass/surface_geometry.hpp"

#include <cmath>
#include <numbers>

#include "qlmass/errors.hpp"

namespace qlmass {

namespace {
constexpr int kMinGrid = 33;
constexpr int kStencil = 7;   // 6th-order interior differentiation
constexpr int kEdgeStencil = 9;  // pole limits need the extra accuracy

void require_finite(std::span<const double> v, const char* name) {
  for (size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw Error(ErrorCode::invalid_input,
                  std::string(name) + " non-finite at index " + std::to_string(i));
}

// Derivative of a field with known parity across both poles (smooth
// axisymmetric data is even or odd there). Reflected ghost points restore
// centered stencils near theta = 0 and theta = pi.
std::vector<double> polar_derivative(std::span<const double> theta,
                                     std::span<const double> u, int deriv,
                                     int parity, int stencil = kStencil) {
  const int n = static_cast<int>(theta.size());
  const int pad = stencil / 2 + 1;
  std::vector<double> th(n + 2 * pad), v(n + 2 * pad);
  for (int j = 0; j < pad; ++j) {
    th[pad - 1 - j] = -theta[j + 1];
    v[pad - 1 - j] = parity * u[j + 1];
    th[n + pad + j] = 2.0 * std::numbers::pi - theta[n - 2 - j];
    v[n + pad + j] = parity * u[n - 2 - j];
  }
  for (int i = 0; i < n; ++i) {
    th[pad + i] = theta[i];
    v[pad + i] = u[i];
  }
  auto d = grid_derivative(th, v, deriv, stencil);
  return std::vector<double>(d.begin() + pad, d.begin() + pad + n);
}
}  // namespace

AxisymmetricMetric::AxisymmetricMetric(std::vector<double> theta,
                                       std::vector<double> f,
                                       std::vector<double> h,
                                       double closure_tol)
    : theta_(std::move(theta)), f_(std::move(f)), h_(std::move(h)) {
  const int n = static_cast<int>(theta_.size());
  if (n < kMinGrid)
    throw Error(ErrorCode::invalid_input,
                "grid needs at least " + std::to_string(kMinGrid) + " points, got " +
                    std::to_string(n));
  if (f_.size() != theta_.size() || h_.size() != theta_.size())
    throw Error(ErrorCode::mismatched_grids, "f/h size differs from theta grid");
  require_finite(theta_, "theta");
  require_finite(f_, "f");
  require_finite(h_, "h");
  if (std::abs(theta_.front()) > 1e-12 ||
      std::abs(theta_.back() - std::numbers::pi) > 1e-12)
    throw Error(ErrorCode::invalid_input, "theta grid must span [0, pi]");
  kind_ = classify_grid(theta_);
  for (int i = 0; i < n; ++i) {
    if (!(f_[i] > 0.0))
      throw Error(ErrorCode::invalid_input, "f must be positive, index " + std::to_string(i));
    const bool pole = (i == 0 || i == n - 1);
    if (pole ? h_[i] != 0.0 : !(h_[i] > 0.0))
      throw Error(ErrorCode::invalid_input,
                  pole ? "h must vanish at the poles, index " + std::to_string(i)
                       : "h must be positive away from poles, index " + std::to_string(i));
  }
  // h is odd across each pole for a smooth closure; reflected centered
  // stencils give the one-sided limits.
  auto hp = polar_derivative(theta_, h_, 1, -1, kEdgeStencil);
  hp0_ = hp.front();
  hp1_ = hp.back();
  if (std::abs(hp0_ - f_.front()) > closure_tol * f_.front())
    throw Error(ErrorCode::pole_closure_violated,
                "north pole: |h'(0) - f(0)| = " + std::to_string(std::abs(hp0_ - f_.front())));
  if (std::abs(hp1_ + f_.back()) > closure_tol * f_.back())
    throw Error(ErrorCode::pole_closure_violated,
                "south pole: |h'(pi) + f(pi)| = " + std::to_string(std::abs(hp1_ + f_.back())));
  weights_ = quadrature_weights(theta_, kind_);
}

AxisymmetricMetric AxisymmetricMetric::round_sphere(double r0, int n,
                                                    GridKind kind) {
  std::vector<double> th(n);
  if (kind == GridKind::uniform) {
    th = linspace(0.0, std::numbers::pi, n);
  } else {
    for (int i = 0; i < n; ++i)
      th[i] = std::numbers::pi * 0.5 * (1.0 - std::cos(std::numbers::pi * i / (n - 1)));
    th.front() = 0.0;
    th.back() = std::numbers::pi;
  }
  std::vector<double> f(n, r0), h(n);
  for (int i = 0; i < n; ++i) h[i] = r0 * std::sin(th[i]);
  h.front() = 0.0;
  h.back() = 0.0;
  return AxisymmetricMetric(std::move(th), std::move(f), std::move(h));
}

AxisymmetricMetric AxisymmetricMetric::scaled(double lambda) const {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::invalid_input, "scale factor must be positive");
  std::vector<double> f(f_), h(h_);
  for (auto& v : f) v *= lambda;
  for (auto& v : h) v *= lambda;
  return AxisymmetricMetric(theta_, std::move(f), std::move(h));
}

bool AxisymmetricMetric::same_grid(const AxisymmetricMetric& other,
                                   double tol) const {
  if (size() != other.size()) return false;
  for (int i = 0; i < size(); ++i)
    if (std::abs(theta_[i] - other.theta_[i]) > tol) return false;
  return true;
}

SurfaceField gaussian_curvature(const AxisymmetricMetric& g) {
  // K = -(1/(f h)) d/dtheta (h'/f); at the poles both w' = (h'/f)' and h
  // vanish, and the one-sided limit is K = -w''(pole) / (f h').
  const int n = g.size();
  auto hp = polar_derivative(g.theta(), g.h(), 1, -1);
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = hp[i] / g.f()[i];  // even across poles
  auto wp = polar_derivative(g.theta(), w, 1, +1);
  std::vector<double> K(n);
  for (int i = 1; i < n - 1; ++i) {
    K[i] = -wp[i] / (g.f()[i] * g.h()[i]);
    if (!std::isfinite(K[i]))
      throw Error(ErrorCode::degenerate_grid,
                  "non-finite curvature at index " + std::to_string(i));
  }
  auto wpp = polar_derivative(g.theta(), w, 2, +1);
  K[0] = -wpp.front() / (g.f().front() * g.h_prime_north());
  K[n - 1] = -wpp.back() / (g.f().back() * g.h_prime_south());
  if (!std::isfinite(K[0]) || !std::isfinite(K[n - 1]))
    throw Error(ErrorCode::degenerate_grid, "non-finite curvature at a pole");
  return SurfaceField(std::move(K), "1/length^2");
}

SurfaceField laplace_beltrami(const AxisymmetricMetric& g,
                              const SurfaceField& u) {
  // Delta u = (1/(f h)) d/dtheta ((h/f) u'); at the poles the axisymmetric
  // closure u'(pole) = 0 gives Delta u = 2 u''(pole) / f(pole)^2.
  const int n = g.size();
  if (u.size() != n)
    throw Error(ErrorCode::mismatched_grids, "field size differs from metric grid");
  // Gauge away the constant part so constants map to exactly zero.
  std::vector<double> shifted(u.values);
  for (auto& v : shifted) v -= u.values[0];
  auto up = polar_derivative(g.theta(), shifted, 1, +1);
  std::vector<double> flux(n);
  for (int i = 0; i < n; ++i) flux[i] = g.h()[i] * up[i] / g.f()[i];
  auto fluxp = polar_derivative(g.theta(), flux, 1, +1);
  std::vector<double> lap(n);
  for (int i = 1; i < n - 1; ++i) lap[i] = fluxp[i] / (g.f()[i] * g.h()[i]);
  auto upp = polar_derivative(g.theta(), shifted, 2, +1);
  lap[0] = 2.0 * upp.front() / (g.f().front() * g.f().front());
  lap[n - 1] = 2.0 * upp.back() / (g.f().back() * g.f().back());
  return SurfaceField(std::move(lap), u.units + "/length^2");
}

double area(const AxisymmetricMetric& g) {
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i)
    s += g.weights()[i] * g.f()[i] * g.h()[i];
  return 2.0 * std::numbers::pi * s;
}

double integrate(const AxisymmetricMetric& g, const SurfaceField& u) {
  if (u.size() != g.size())
    throw Error(ErrorCode::mismatched_grids, "field size differs from metric grid");
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i)
    s += g.weights()[i] * g.f()[i] * g.h()[i] * u.values[i];
  return 2.0 * std::numbers::pi * s;
}

double area_radius(const AxisymmetricMetric& g) {
  return std::sqrt(area(g) / (4.0 * std::numbers::pi));
}

namespace {

NormReport grid_norms(std::span<const double> theta,
                      const std::vector<double>& u, double tau) {
  NormReport r;
  r.tau = tau;
  auto u1 = grid_derivative(theta, u, 1, kStencil);
  auto u2 = grid_derivative(theta, u, 2, kStencil);
  for (size_t i = 0; i < u.size(); ++i) {
    r.c0 = std::max(r.c0, std::abs(u[i]));
    r.c1 = std::max(r.c1, std::abs(u1[i]));
    r.c2 = std::max(r.c2, std::abs(u2[i]));
  }
  const int n = static_cast<int>(u.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double q = std::abs(u2[i] - u2[j]) / std::pow(theta[j] - theta[i], tau);
      r.holder = std::max(r.holder, q);
    }
  return r;
}

NormReport max_report(const NormReport& a, const NormReport& b) {
  NormReport r;
  r.c0 = std::max(a.c0, b.c0);
  r.c1 = std::max(a.c1, b.c1);
  r.c2 = std::max(a.c2, b.c2);
  r.holder = std::max(a.holder, b.holder);
  r.tau = a.tau;
  return r;
}

}  // namespace

NormReport c2tau_distance(const SurfaceField& a, const SurfaceField& b,
                          const AxisymmetricMetric& grid_of, double tau) {
  if (a.size() != b.size() || a.size() != grid_of.size())
    throw Error(ErrorCode::mismatched_grids, "c2tau_distance: size mismatch");
  std::vector<double> d(a.values.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
  return grid_norms(grid_of.theta(), d, tau);
}

NormReport c2tau_distance(const AxisymmetricMetric& a,
                          const AxisymmetricMetric& b, double tau) {
  if (!a.same_grid(b))
    throw Error(ErrorCode::mismatched_grids, "c2tau_distance: metrics on different grids");
  const int n = a.size();
  std::vector<double> uf(n), uh(n);
  for (int i = 0; i < n; ++i) {
    uf[i] = (a.f()[i] * a.f()[i] - b.f()[i] * b.f()[i]) / (a.f()[i] * a.f()[i]);
    if (i == 0 || i == n - 1) continue;
    uh[i] = (a.h()[i] * a.h()[i] - b.h()[i] * b.h()[i]) / (a.h()[i] * a.h()[i]);
  }
  const double rn = b.h_prime_north() / a.h_prime_north();
  const double rs = b.h_prime_south() / a.h_prime_south();
  uh[0] = 1.0 - rn * rn;
  uh[n - 1] = 1.0 - rs * rs;
  return max_report(grid_norms(a.theta(), uf, tau),
                    grid_norms(a.theta(), uh, tau));
}

}  // namespace qlmass
