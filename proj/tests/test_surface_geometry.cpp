#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qlmass/errors.hpp"
#include "qlmass/numerics.hpp"
#include "qlmass/surface_geometry.hpp"

using namespace qlmass;
using std::numbers::pi;

namespace {

// Metric f = 1, h = sin(theta) * (1 + a sin^2(theta)); used across the
// derived-value tests below.
AxisymmetricMetric bump_metric(int n, double a,
                               GridKind kind = GridKind::uniform) {
  std::vector<double> th(n);
  if (kind == GridKind::uniform)
    th = linspace(0.0, pi, n);
  else
    for (int i = 0; i < n; ++i)
      th[i] = pi * 0.5 * (1.0 - std::cos(pi * i / (n - 1)));
  th.front() = 0.0;
  th.back() = pi;
  std::vector<double> f(n, 1.0), h(n);
  for (int i = 0; i < n; ++i) {
    const double s = std::sin(th[i]);
    h[i] = s * (1.0 + a * s * s);
  }
  h.front() = h.back() = 0.0;
  return AxisymmetricMetric(th, f, h);
}

// Independent curvature oracle: plain 2nd-order centered differences at a
// point, Richardson-extrapolated from resolutions n and 2n.
double curvature_oracle_at_equator(double a, int n) {
  auto K_at = [&](int m) {
    const double dth = pi / (m - 1);
    auto h = [&](double t) {
      const double s = std::sin(t);
      return s * (1.0 + a * s * s);
    };
    auto w = [&](double t) { return (h(t + dth) - h(t - dth)) / (2.0 * dth); };
    const double t0 = pi / 2.0;
    const double wp = (w(t0 + dth) - w(t0 - dth)) / (2.0 * dth);
    return -wp / h(t0);
  };
  const double k1 = K_at(n), k2 = K_at(2 * n);
  return k2 + (k2 - k1) / 3.0;
}

}  // namespace

TEST_CASE("metric construction validates invariants") {
  CHECK_NOTHROW(AxisymmetricMetric::round_sphere(1.0, 65));
  CHECK_NOTHROW(AxisymmetricMetric::round_sphere(2.5, 33, GridKind::chebyshev));

  // Too few points.
  auto th = linspace(0.0, pi, 9);
  std::vector<double> f(9, 1.0), h(9, 0.0);
  CHECK_THROWS_AS(AxisymmetricMetric(th, f, h), Error);

  // Broken pole closure: h'(0) = 2 but f(0) = 1.
  auto th2 = linspace(0.0, pi, 65);
  std::vector<double> f2(65, 1.0), h2(65);
  for (int i = 0; i < 65; ++i) h2[i] = 2.0 * std::sin(th2[i]);
  h2.front() = h2.back() = 0.0;
  CHECK_THROWS_AS(AxisymmetricMetric(th2, f2, h2), Error);
}

TEST_CASE("gaussian curvature of round spheres") {
  auto g1 = AxisymmetricMetric::round_sphere(1.0, 129);
  auto K1 = gaussian_curvature(g1);
  for (double k : K1.values) CHECK(k == doctest::Approx(1.0).epsilon(1e-9));

  auto g2 = AxisymmetricMetric::round_sphere(2.0, 129);
  auto K2 = gaussian_curvature(g2);
  for (double k : K2.values) CHECK(k == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("gaussian curvature matches Richardson oracle on a bump metric") {
  auto g = bump_metric(257, 0.1);
  auto K = gaussian_curvature(g);
  const double oracle = curvature_oracle_at_equator(0.1, 257);
  CHECK(K.values[128] == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("curvature error drops by >= 3x under grid refinement") {
  const double a = 0.1;
  // Analytic K for h = sin (1 + a sin^2), f = 1: K = -h''/h.
  auto exactK = [&](double t) {
    const double s = std::sin(t), c = std::cos(t);
    const double hpp = -s + a * (6.0 * s * c * c - 3.0 * s * s * s);
    const double h = s + a * s * s * s;
    return -hpp / h;
  };
  auto max_err = [&](int n) {
    auto g = bump_metric(n, a);
    auto K = gaussian_curvature(g);
    double e = 0.0;
    for (int i = 1; i < n - 1; ++i)
      e = std::max(e, std::abs(K.values[i] - exactK(g.theta()[i])));
    return e;
  };
  const double e1 = max_err(129), e2 = max_err(257);
  CHECK(e2 < e1 / 3.0);
}

TEST_CASE("laplace-beltrami eigenfunctions and constants") {
  auto g = AxisymmetricMetric::round_sphere(1.0, 129);
  const int n = g.size();

  auto lap_const = laplace_beltrami(g, SurfaceField::constant(3.7, n, ""));
  for (double v : lap_const.values) CHECK(std::abs(v) < 1e-10);

  std::vector<double> cosv(n);
  for (int i = 0; i < n; ++i) cosv[i] = std::cos(g.theta()[i]);
  auto lap_cos = laplace_beltrami(g, SurfaceField(cosv, ""));
  for (int i = 0; i < n; ++i)
    CHECK(lap_cos.values[i] == doctest::Approx(-2.0 * cosv[i]).epsilon(1e-8));

  // Degree-2 combination: Delta cos^2 = 2 - 6 cos^2 (hand-checked through
  // the Legendre expansion cos^2 = (2 P2 + 1)/3).
  std::vector<double> c2(n);
  for (int i = 0; i < n; ++i) c2[i] = cosv[i] * cosv[i];
  auto lap_c2 = laplace_beltrami(g, SurfaceField(c2, ""));
  for (int i = 0; i < n; ++i)
    CHECK(lap_c2.values[i] == doctest::Approx(2.0 - 6.0 * c2[i]).epsilon(1e-8));
}

TEST_CASE("area of rounds and against an adaptive quadrature oracle") {
  CHECK(area(AxisymmetricMetric::round_sphere(1.0, 129)) ==
        doctest::Approx(4.0 * pi).epsilon(1e-8));
  CHECK(area(AxisymmetricMetric::round_sphere(3.0, 129)) ==
        doctest::Approx(36.0 * pi).epsilon(1e-8));

  // Clenshaw-Curtis resolves the smooth integrand to well below 1e-10.
  auto g = bump_metric(129, 0.1, GridKind::chebyshev);
  const double oracle = adaptive_simpson(
      [](double t) {
        const double s = std::sin(t);
        return 2.0 * pi * s * (1.0 + 0.1 * s * s);
      },
      0.0, pi, 1e-13);
  CHECK(area(g) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("integrate: constants, Gauss-Bonnet, H^2 on the unit round") {
  auto g = bump_metric(129, 0.07);
  CHECK(integrate(g, SurfaceField::constant(1.0, g.size(), "")) ==
        doctest::Approx(area(g)).epsilon(1e-13));
  CHECK(integrate(g, gaussian_curvature(g)) ==
        doctest::Approx(4.0 * pi).epsilon(1e-8));

  auto r = AxisymmetricMetric::round_sphere(1.0, 129);
  CHECK(integrate(r, SurfaceField::constant(2.0 * 2.0, r.size(), "")) ==
        doctest::Approx(16.0 * pi).epsilon(1e-8));
}

TEST_CASE("gauss-bonnet holds on chebyshev grids too") {
  auto g = AxisymmetricMetric::round_sphere(1.3, 129, GridKind::chebyshev);
  CHECK(area(g) == doctest::Approx(4.0 * pi * 1.69).epsilon(1e-12));
  CHECK(integrate(g, gaussian_curvature(g)) ==
        doctest::Approx(4.0 * pi).epsilon(1e-7));
}

TEST_CASE("self-adjointness of the laplacian") {
  Rng rng(7);
  auto g = bump_metric(129, 0.05);
  const int n = g.size();
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> u(n), v(n);
    const double a1 = rng.uniform(-1, 1), a2 = rng.uniform(-1, 1);
    const double b1 = rng.uniform(-1, 1), b2 = rng.uniform(-1, 1);
    for (int i = 0; i < n; ++i) {
      const double c = std::cos(g.theta()[i]);
      u[i] = a1 * c + a2 * c * c;
      v[i] = b1 * c + b2 * c * c * c;
    }
    SurfaceField uf(u, ""), vf(v, "");
    auto Lv = laplace_beltrami(g, vf), Lu = laplace_beltrami(g, uf);
    std::vector<double> p1(n), p2(n);
    for (int i = 0; i < n; ++i) {
      p1[i] = u[i] * Lv.values[i];
      p2[i] = v[i] * Lu.values[i];
    }
    const double uLv = integrate(g, SurfaceField(p1, ""));
    const double vLu = integrate(g, SurfaceField(p2, ""));
    CHECK(uLv == doctest::Approx(vLu).epsilon(1e-6));
  }
}

TEST_CASE("scaling: area and curvature transform exactly") {
  auto g = bump_metric(129, 0.1);
  auto K = gaussian_curvature(g);
  // Power-of-two rescalings commute with every floating-point operation in
  // the pipeline, so those transforms are bit-exact.
  for (double lam : {0.5, 2.0}) {
    auto gs = g.scaled(lam);
    CHECK(area(gs) == lam * lam * area(g));
    auto Ks = gaussian_curvature(gs);
    for (int i = 0; i < g.size(); ++i)
      CHECK(Ks.values[i] == K.values[i] / (lam * lam));
  }
  const double lam = 10.0;
  auto gs = g.scaled(lam);
  CHECK(area(gs) == doctest::Approx(lam * lam * area(g)).epsilon(1e-13));
  auto Ks = gaussian_curvature(gs);
  double kmax = 0.0;
  for (double k : K.values) kmax = std::max(kmax, std::abs(k));
  for (int i = 0; i < g.size(); ++i)
    CHECK(std::abs(Ks.values[i] - K.values[i] / (lam * lam)) < 1e-10 * kmax);
}

TEST_CASE("c2tau distance: zero, constant shift, symbolic oracle") {
  auto g = AxisymmetricMetric::round_sphere(1.0, 129);
  const int n = g.size();

  SurfaceField H1 = SurfaceField::constant(1.0, n, "1/length");
  auto zero = c2tau_distance(H1, H1, g);
  CHECK(zero.c0 == 0.0);
  CHECK(zero.c1 == 0.0);
  CHECK(zero.c2 == 0.0);
  CHECK(zero.holder == 0.0);

  SurfaceField H2 = SurfaceField::constant(1.01, n, "1/length");
  auto shift = c2tau_distance(H2, H1, g);
  CHECK(shift.c0 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(std::abs(shift.c1) < 1e-10);
  CHECK(std::abs(shift.c2) < 1e-10);
  CHECK(std::abs(shift.holder) < 1e-10);

  // Perturb h -> h (1 + 0.01 sin^2): the h-frame component of the difference
  // is u(theta) = 1 - (1 + 0.01 sin^2)^2; compare against its symbolic
  // derivatives.
  std::vector<double> f(n, 1.0), h(n);
  for (int i = 0; i < n; ++i) {
    const double s = std::sin(g.theta()[i]);
    h[i] = s * (1.0 + 0.01 * s * s);
  }
  h.front() = h.back() = 0.0;
  AxisymmetricMetric gp(std::vector<double>(g.theta().begin(), g.theta().end()),
                        f, h);
  auto rep = c2tau_distance(g, gp, 0.5);

  auto u = [](double t) {
    const double s = std::sin(t);
    const double q = 1.0 + 0.01 * s * s;
    return 1.0 - q * q;
  };
  auto up = [](double t) {
    const double s = std::sin(t), c = std::cos(t);
    const double q = 1.0 + 0.01 * s * s;
    return -2.0 * q * 0.02 * s * c;
  };
  auto upp = [](double t) {
    const double s = std::sin(t), c = std::cos(t);
    const double q = 1.0 + 0.01 * s * s;
    const double qp = 0.02 * s * c;
    const double qpp = 0.02 * (c * c - s * s);
    return -2.0 * (qp * qp + q * qpp);
  };
  double c0 = 0, c1 = 0, c2m = 0, hold = 0;
  for (int i = 0; i < n; ++i) {
    c0 = std::max(c0, std::abs(u(g.theta()[i])));
    c1 = std::max(c1, std::abs(up(g.theta()[i])));
    c2m = std::max(c2m, std::abs(upp(g.theta()[i])));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      hold = std::max(hold, std::abs(upp(g.theta()[i]) - upp(g.theta()[j])) /
                                std::pow(g.theta()[j] - g.theta()[i], 0.5));
  CHECK(rep.c0 == doctest::Approx(c0).epsilon(1e-6));
  CHECK(rep.c1 == doctest::Approx(c1).epsilon(1e-6));
  CHECK(rep.c2 == doctest::Approx(c2m).epsilon(1e-5));
  CHECK(rep.holder == doctest::Approx(hold).epsilon(1e-4));
  CHECK(rep.total() == doctest::Approx(c0 + c1 + c2m + hold).epsilon(1e-4));
}

TEST_CASE("mismatched grids are rejected") {
  auto g = AxisymmetricMetric::round_sphere(1.0, 65);
  SurfaceField wrong = SurfaceField::constant(1.0, 64, "");
  CHECK_THROWS_AS(laplace_beltrami(g, wrong), Error);
  CHECK_THROWS_AS(integrate(g, wrong), Error);
}

TEST_CASE("gauss-bonnet across a family of valid metrics at N >= 129") {
  for (double a : {0.0, 0.02, 0.05, 0.1, 0.15}) {
    auto g = bump_metric(129, a);
    const double gb = integrate(g, gaussian_curvature(g));
    CHECK(std::abs(gb - 4.0 * pi) < 1e-6);
  }
}
