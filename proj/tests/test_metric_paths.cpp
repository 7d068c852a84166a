#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qlmass/errors.hpp"
#include "qlmass/metric_paths.hpp"
#include "qlmass/numerics.hpp"
#include "qlmass/surface_geometry.hpp"

using namespace qlmass;
using std::numbers::pi;

namespace {

AxisymmetricMetric oblate(int n, double a, double area_match_to = -1.0) {
  auto th = linspace(0.0, pi, n);
  std::vector<double> f(n, 1.0), h(n);
  for (int i = 0; i < n; ++i) {
    const double s = std::sin(th[i]);
    h[i] = s * (1.0 + a * s * s);
  }
  h.front() = h.back() = 0.0;
  AxisymmetricMetric g(th, f, h);
  if (area_match_to > 0.0) {
    const double lam = std::sqrt(area_match_to / area(g));
    return g.scaled(lam);
  }
  return g;
}

}  // namespace

TEST_CASE("area_equalize: identity on equal inputs") {
  auto g = AxisymmetricMetric::round_sphere(1.0, 129);
  auto out = area_equalize(g, g);
  for (int i = 0; i < g.size(); ++i) {
    CHECK(out.f()[i] == doctest::Approx(g.f()[i]).epsilon(1e-9));
    CHECK(out.h()[i] == doctest::Approx(g.h()[i]).epsilon(1e-9));
  }
}

TEST_CASE("area_equalize: recovers round density from a reparametrized round") {
  // g2 = unit round pre-composed with theta -> theta + 0.05 sin(2 theta);
  // the equalized output must carry the round area density and curvature 1.
  const int n = 129;
  auto th = linspace(0.0, pi, n);
  std::vector<double> f2(n), h2(n);
  for (int i = 0; i < n; ++i) {
    const double psi = th[i] + 0.05 * std::sin(2.0 * th[i]);
    const double dpsi = 1.0 + 0.1 * std::cos(2.0 * th[i]);
    f2[i] = dpsi;
    h2[i] = std::sin(psi);
  }
  h2.front() = h2.back() = 0.0;
  AxisymmetricMetric g2(th, f2, h2);
  auto g1 = AxisymmetricMetric::round_sphere(1.0, n);
  CHECK(area(g2) == doctest::Approx(4.0 * pi).epsilon(1e-8));

  auto out = area_equalize(g1, g2);
  // Cumulative-area-inversion oracle: phi(theta) must invert psi, so the
  // output is the unit round again.
  for (int i = 0; i < n; ++i) {
    CHECK(out.f()[i] * out.h()[i] ==
          doctest::Approx(g1.f()[i] * g1.h()[i]).epsilon(1e-12));
  }
  auto K = gaussian_curvature(out);
  for (double k : K.values) CHECK(k == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("area_equalize: oblate target keeps Gauss-Bonnet (isometry)") {
  auto g1 = AxisymmetricMetric::round_sphere(1.0, 129);
  auto g2 = oblate(129, 0.08, area(g1));
  auto out = area_equalize(g1, g2);
  CHECK(integrate(out, gaussian_curvature(out)) ==
        doctest::Approx(4.0 * pi).epsilon(1e-6));
  CHECK(area(out) == doctest::Approx(area(g2)).epsilon(1e-9));
}

TEST_CASE("area_equalize rejects unequal areas") {
  auto g1 = AxisymmetricMetric::round_sphere(1.0, 65);
  auto g2 = AxisymmetricMetric::round_sphere(1.1, 65);
  CHECK_THROWS_AS(area_equalize(g1, g2), Error);
}

TEST_CASE("build_path: constant path for identical endpoints") {
  auto g = AxisymmetricMetric::round_sphere(1.0, 129);
  auto p = build_path(g, g);
  CHECK(p.alpha < 1e-16);
  CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(p.trace_defect < 1e-12);
}

TEST_CASE("build_path: endpoints, area form, trace defect") {
  auto g1 = AxisymmetricMetric::round_sphere(1.0, 129);
  auto g2 = oblate(129, 0.05, area(g1));
  auto p = build_path(g1, g2);
  const int n = g1.size();

  // Endpoint match: g(0) = g1 exactly, g(1) = equalized g2 within 1e-10.
  auto g2e = area_equalize(g1, g2);
  for (int i = 0; i < n; ++i) {
    CHECK(p.metrics.front().f()[i] == g1.f()[i]);
    CHECK(p.metrics.front().h()[i] == g1.h()[i]);
    CHECK(std::abs(p.metrics.back().f()[i] - g2e.f()[i]) < 1e-10);
    CHECK(std::abs(p.metrics.back().h()[i] - g2e.h()[i]) < 1e-10);
  }

  // Pointwise-constant area form along the path.
  double dens_dev = 0.0, dens_scale = 0.0;
  for (int i = 0; i < n; ++i)
    dens_scale = std::max(dens_scale, g1.f()[i] * g1.h()[i]);
  for (const auto& gs : p.metrics)
    for (int i = 0; i < n; ++i)
      dens_dev = std::max(dens_dev, std::abs(gs.f()[i] * gs.h()[i] -
                                             g1.f()[i] * g1.h()[i]));
  CHECK(dens_dev < 1e-10 * dens_scale);

  CHECK(p.trace_defect < 1e-8);
  CHECK(p.beta > 0.0);

  // Endpoint isometry: area and total curvature of g(1) match raw g2.
  CHECK(area(p.metrics.back()) == doctest::Approx(area(g2)).epsilon(1e-8));
  CHECK(integrate(p.metrics.back(), gaussian_curvature(p.metrics.back())) ==
        doctest::Approx(integrate(g2, gaussian_curvature(g2))).epsilon(1e-7));
}

TEST_CASE("path alpha matches a dense-s finite-difference oracle") {
  auto g1 = AxisymmetricMetric::round_sphere(1.0, 129);
  auto g2 = oblate(129, 0.05, area(g1));
  auto p = build_path(g1, g2);

  // Oracle: rebuild the family at dense s, differentiate the coefficients
  // by 2nd-order differences, and form (1/4) max |gdot|^2 directly.
  auto g2e = area_equalize(g1, g2);
  const int n = g1.size();
  const int m = 2049;
  const double ds = 1.0 / (m - 1);
  double max_norm2 = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    const double r = (g2e.f()[i] * g1.h()[i]) / (g1.f()[i] * g2e.h()[i]);
    for (int k = 1; k + 1 < m; k += 64) {
      const double s0 = k * ds;
      auto fs = [&](double s) { return g1.f()[i] * std::pow(r, 0.5 * s); };
      auto hs = [&](double s) { return g1.h()[i] * std::pow(r, -0.5 * s); };
      const double fdot = (fs(s0 + ds) - fs(s0 - ds)) / (2.0 * ds);
      const double hdot = (hs(s0 + ds) - hs(s0 - ds)) / (2.0 * ds);
      const double rf = 2.0 * fdot / fs(s0);
      const double rh = 2.0 * hdot / hs(s0);
      max_norm2 = std::max(max_norm2, rf * rf + rh * rh);
    }
  }
  const double alpha_oracle = 0.25 * max_norm2;
  CHECK(p.alpha == doctest::Approx(alpha_oracle).epsilon(1e-6));
}

TEST_CASE("path_constants: rounds of equal radius") {
  auto g = AxisymmetricMetric::round_sphere(2.0, 129);
  auto p = build_path(g, g);
  auto [alpha, beta] = path_constants(p);
  CHECK(alpha < 1e-16);
  CHECK(beta == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("alpha-control: alpha decreases with the C2tau distance") {
  // Lemma-style sweep: nearby endpoints give small alpha, with alpha -> 0
  // monotonically as the distance ladder shrinks.
  auto g1 = AxisymmetricMetric::round_sphere(1.0, 129);
  std::vector<double> alphas, dists;
  for (double a : {0.1, 0.05, 0.025}) {
    auto g2 = oblate(129, a, area(g1));
    auto p = build_path(g1, g2);
    alphas.push_back(p.alpha);
    dists.push_back(c2tau_distance(g1, g2).total());
  }
  CHECK(alphas[1] < alphas[0]);
  CHECK(alphas[2] < alphas[1]);
  for (size_t i = 0; i < alphas.size(); ++i)
    CHECK(alphas[i] / dists[i] < 1.0);  // ratio stays bounded
}

TEST_CASE("trace-free identity holds for every constructed path") {
  auto g1 = AxisymmetricMetric::round_sphere(1.0, 65);
  for (double a : {0.02, 0.08}) {
    auto g2 = oblate(65, a, area(g1));
    auto p = build_path(g1, g2, 33);
    CHECK(p.trace_defect < 1e-8);
  }
}
