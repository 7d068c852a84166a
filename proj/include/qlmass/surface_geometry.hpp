#ifndef QLMASS_SURFACE_GEOMETRY_HPP
#define QLMASS_SURFACE_GEOMETRY_HPP

#include <span>
#include <string>
#include <vector>

#include "qlmass/numerics.hpp"

namespace qlmass {

/// Scalar field sampled on the colatitude grid of an AxisymmetricMetric.
/// `units` is a free-form tag ("1/length", "1/length^2", ...).
struct SurfaceField {
  std::vector<double> values;
  std::string units;

  SurfaceField() = default;
  SurfaceField(std::vector<double> v, std::string u)
      : values(std::move(v)), units(std::move(u)) {}
  static SurfaceField constant(double c, int n, std::string u) {
    return SurfaceField(std::vector<double>(n, c), std::move(u));
  }
  int size() const { return static_cast<int>(values.size()); }
};

// Metric f(theta)^2 dtheta^2 + h(theta)^2 dphi^2 on the 2-sphere, sampled on
// a colatitude grid covering [0, pi]. Smooth pole closure means h'(0) = f(0)
// and h'(pi) = -f(pi); metrics violating closure beyond tolerance are
// rejected at construction.
class AxisymmetricMetric {
 public:
  AxisymmetricMetric(std::vector<double> theta, std::vector<double> f,
                     std::vector<double> h, double closure_tol = 1e-6);

  static AxisymmetricMetric round_sphere(double area_radius, int n,
                                         GridKind kind = GridKind::uniform);

  int size() const { return static_cast<int>(theta_.size()); }
  GridKind grid_kind() const { return kind_; }
  std::span<const double> theta() const { return theta_; }
  std::span<const double> f() const { return f_; }
  std::span<const double> h() const { return h_; }
  std::span<const double> weights() const { return weights_; }
  double h_prime_north() const { return hp0_; }
  double h_prime_south() const { return hp1_; }

  /// Metric with coefficients scaled by lambda (g -> lambda^2 g).
  AxisymmetricMetric scaled(double lambda) const;

  bool same_grid(const AxisymmetricMetric& other, double tol = 1e-12) const;

 private:
  std::vector<double> theta_, f_, h_, weights_;
  GridKind kind_;
  double hp0_ = 0.0, hp1_ = 0.0;
};

SurfaceField gaussian_curvature(const AxisymmetricMetric& g);

SurfaceField laplace_beltrami(const AxisymmetricMetric& g,
                              const SurfaceField& u);

double area(const AxisymmetricMetric& g);

double integrate(const AxisymmetricMetric& g, const SurfaceField& u);

double area_radius(const AxisymmetricMetric& g);  // sqrt(area / 4pi)

// Discrete C^{2,tau} report: sup norms of the difference and its first two
// grid derivatives, plus the pairwise Holder quotient of second derivatives.
struct NormReport {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double holder = 0.0;
  double tau = 0.5;
  double total() const { return c0 + c1 + c2 + holder; }
};

NormReport c2tau_distance(const SurfaceField& a, const SurfaceField& b,
                          const AxisymmetricMetric& grid_of, double tau = 0.5);

// Metric distance is measured componentwise in the frame of `a`:
// (f_a^2 - f_b^2)/f_a^2 and (h_a^2 - h_b^2)/h_a^2 (pole values by the
// derivative-ratio limit), then the same grid norms as for fields.
NormReport c2tau_distance(const AxisymmetricMetric& a,
                          const AxisymmetricMetric& b, double tau = 0.5);

}  // namespace qlmass

#endif
