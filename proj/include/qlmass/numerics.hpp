#ifndef QLMASS_NUMERICS_HPP
#define QLMASS_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qlmass {

// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
// Returns weights w such that sum_i w[i] * f(xs[i]) approximates the
// `deriv`-th derivative of f at x0.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int deriv);

// Derivative of sampled data on an arbitrary strictly increasing grid, using
// sliding stencils of `stencil` points (centered in the interior, one-sided
// near the ends). Order of accuracy is stencil - deriv on smooth data.
std::vector<double> grid_derivative(std::span<const double> x,
                                    std::span<const double> u, int deriv,
                                    int stencil = 7);

// One-sided derivative at the first (side = +1) or last (side = -1) node.
double edge_derivative(std::span<const double> x, std::span<const double> u,
                       int deriv, int side, int stencil = 5);

enum class GridKind { uniform, chebyshev };

// Classifies a strictly increasing grid on [a, b] as uniform or
// Chebyshev–Gauss–Lobatto; throws DegenerateGrid otherwise.
GridKind classify_grid(std::span<const double> x, double rel_tol = 1e-8);

// Quadrature weights for sampled integrands: composite Simpson on uniform
// grids (with a 3/8 block when the interval count is odd), Clenshaw-Curtis
// on Chebyshev grids.
std::vector<double> quadrature_weights(std::span<const double> x, GridKind kind);

double dot(std::span<const double> a, std::span<const double> b);

// Adaptive Simpson quadrature, used as an independent oracle and for the
// handful of one-off integrals in the pipelines.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 40);

// Value of the local polynomial through `stencil` nearby samples at xq
// (barycentric Lagrange on a sliding window).
double interp_local(std::span<const double> x, std::span<const double> u,
                    double xq, int stencil = 6);

// Dormand-Prince 5(4) adaptive step integrator for a scalar ODE y' = f(t, y).
// Returns samples of y at the requested output times (strictly increasing,
// t_out[0] >= t0). Dense output via 4th-order Hermite on accepted steps.
std::vector<double> integrate_ode(const std::function<double(double, double)>& f,
                                  double t0, double y0,
                                  std::span<const double> t_out,
                                  double rel_tol = 1e-12, double abs_tol = 1e-13);

// Safeguarded Newton (bisection fallback) for a monotone function on [lo, hi].
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double lo,
                      double hi, double target, double tol = 1e-14);

// Deterministic RNG; distributions are implemented from raw bits so streams
// are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform();                         // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);          // inclusive

 private:
  std::uint64_t s_[4];
};

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);  // endpoints a, b > 0

}  // namespace qlmass

#endif
