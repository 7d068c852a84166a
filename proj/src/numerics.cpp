#include "qlmass/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlmass/errors.hpp"

namespace qlmass {

std::vector<double> fd_weights(double x0, std::span<const double> xs, int deriv) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  const int n = static_cast<int>(xs.size()) - 1;
  const int m = deriv;
  std::vector<double> c((n + 1) * (m + 1), 0.0);
  auto C = [&](int i, int j) -> double& { return c[i * (m + 1) + j]; };
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  C(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j <= i - 1; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = C(i, m);
  return w;
}

std::vector<double> grid_derivative(std::span<const double> x,
                                    std::span<const double> u, int deriv,
                                    int stencil) {
  const int n = static_cast<int>(x.size());
  if (n != static_cast<int>(u.size()))
    throw Error(ErrorCode::mismatched_grids, "derivative: size mismatch");
  if (stencil > n) stencil = n;
  if (stencil <= deriv)
    throw Error(ErrorCode::degenerate_grid, "derivative: stencil too small");
  std::vector<double> out(n);
  const int half = stencil / 2;
  for (int i = 0; i < n; ++i) {
    int lo = std::clamp(i - half, 0, n - stencil);
    std::span<const double> xs(x.data() + lo, stencil);
    auto w = fd_weights(x[i], xs, deriv);
    double acc = 0.0;
    for (int j = 0; j < stencil; ++j) acc += w[j] * u[lo + j];
    out[i] = acc;
  }
  return out;
}

double edge_derivative(std::span<const double> x, std::span<const double> u,
                       int deriv, int side, int stencil) {
  const int n = static_cast<int>(x.size());
  if (stencil > n) stencil = n;
  const int lo = side > 0 ? 0 : n - stencil;
  const double x0 = side > 0 ? x[0] : x[n - 1];
  std::span<const double> xs(x.data() + lo, stencil);
  auto w = fd_weights(x0, xs, deriv);
  double acc = 0.0;
  for (int j = 0; j < stencil; ++j) acc += w[j] * u[lo + j];
  return acc;
}

GridKind classify_grid(std::span<const double> x, double rel_tol) {
  const int n = static_cast<int>(x.size());
  if (n < 3) throw Error(ErrorCode::degenerate_grid, "grid too small");
  for (int i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1]))
      throw Error(ErrorCode::degenerate_grid,
                  "grid not strictly increasing at index " + std::to_string(i));
  const double a = x.front(), b = x.back();
  const double span = b - a;
  bool uniform = true;
  const double h = span / (n - 1);
  for (int i = 0; i < n; ++i)
    if (std::abs(x[i] - (a + i * h)) > rel_tol * span) { uniform = false; break; }
  if (uniform) return GridKind::uniform;
  bool cheb = true;
  for (int i = 0; i < n; ++i) {
    const double xi = a + span * 0.5 * (1.0 - std::cos(std::numbers::pi * i / (n - 1)));
    if (std::abs(x[i] - xi) > rel_tol * span) { cheb = false; break; }
  }
  if (cheb) return GridKind::chebyshev;
  throw Error(ErrorCode::degenerate_grid, "grid is neither uniform nor Chebyshev");
}

static std::vector<double> simpson_weights(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  const int intervals = n - 1;
  const double h = (x.back() - x.front()) / intervals;
  std::vector<double> w(n, 0.0);
  int start = 0;
  if (intervals % 2 == 1) {
    // Simpson 3/8 on the first three intervals, composite 1/3 on the rest.
    w[0] += 3.0 * h / 8.0;
    w[1] += 9.0 * h / 8.0;
    w[2] += 9.0 * h / 8.0;
    w[3] += 3.0 * h / 8.0;
    start = 3;
  }
  for (int i = start; i + 2 <= n - 1; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  return w;
}

static std::vector<double> clenshaw_curtis_weights(std::span<const double> x) {
  // Standard CC weights on Chebyshev-Gauss-Lobatto nodes, mapped to [a, b].
  const int n = static_cast<int>(x.size());
  const int m = n - 1;
  const double scale = (x.back() - x.front()) / 2.0;
  std::vector<double> w(n, 0.0);
  for (int i = 0; i <= m; ++i) {
    double s = 1.0;
    for (int k = 1; k <= m / 2; ++k) {
      const double bk = (2 * k == m) ? 1.0 : 2.0;
      s -= bk * std::cos(2.0 * k * i * std::numbers::pi / m) / (4.0 * k * k - 1.0);
    }
    const double ci = (i == 0 || i == m) ? 1.0 : 2.0;
    w[i] = scale * ci * s / m;
  }
  return w;
}

std::vector<double> quadrature_weights(std::span<const double> x, GridKind kind) {
  return kind == GridKind::uniform ? simpson_weights(x)
                                   : clenshaw_curtis_weights(x);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

static double simpson_rec(const std::function<double(double)>& f, double a,
                          double fa, double b, double fb, double m, double fm,
                          double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double interp_local(std::span<const double> x, std::span<const double> u,
                    double xq, int stencil) {
  const int n = static_cast<int>(x.size());
  if (stencil > n) stencil = n;
  int idx = static_cast<int>(std::lower_bound(x.begin(), x.end(), xq) - x.begin());
  int lo = std::clamp(idx - stencil / 2, 0, n - stencil);
  // Barycentric Lagrange on the window.
  double num = 0.0, den = 0.0;
  for (int j = 0; j < stencil; ++j) {
    const double xj = x[lo + j];
    if (xq == xj) return u[lo + j];
    double wj = 1.0;
    for (int k = 0; k < stencil; ++k)
      if (k != j) wj /= (xj - x[lo + k]);
    const double t = wj / (xq - xj);
    num += t * u[lo + j];
    den += t;
  }
  return num / den;
}

std::vector<double> integrate_ode(const std::function<double(double, double)>& f,
                                  double t0, double y0,
                                  std::span<const double> t_out,
                                  double rel_tol, double abs_tol) {
  // Dormand-Prince 5(4) coefficients.
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::vector<double> out;
  out.reserve(t_out.size());
  size_t next = 0;
  double t = t0, y = y0;
  double k1 = f(t, y);
  while (next < t_out.size() && t_out[next] <= t0 + 1e-300) {
    out.push_back(y0);
    ++next;
  }
  if (next >= t_out.size()) return out;
  double h = std::min(1e-3, (t_out.back() - t0) / 16.0);
  if (h <= 0.0) h = 1e-6;
  int guard = 0;
  while (next < t_out.size()) {
    if (++guard > 2000000)
      throw Error(ErrorCode::degenerate_grid, "ode integrator stalled");
    // Steps land exactly on the requested outputs; no dense interpolation.
    const double remain = t_out[next] - t;
    const bool hit = h >= remain;
    const double hs = hit ? remain : h;
    const double k2 = f(t + c2 * hs, y + hs * a21 * k1);
    const double k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const double k4 =
        f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 =
        f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        f(t + hs,
          y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double ynew =
        y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(t + hs, ynew);
    const double err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                             e7 * k7);
    const double sc = abs_tol + rel_tol * std::max(std::abs(y), std::abs(ynew));
    const double ratio = std::abs(err) / sc;
    if (ratio <= 1.0) {
      t += hs;
      y = ynew;
      k1 = k7;
      if (hit) {
        out.push_back(y);
        ++next;
      }
    }
    const double fac = 0.9 * std::pow(std::max(ratio, 1e-10), -0.2);
    h = hs * std::clamp(fac, 0.2, 5.0);
    if (h < 1e-15 * std::max(1.0, std::abs(t)))
      throw Error(ErrorCode::degenerate_grid, "ode step underflow");
  }
  return out;
}

double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double lo,
                      double hi, double target, double tol) {
  double flo = f(lo) - target, fhi = f(hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw Error(ErrorCode::invalid_input, "solve_monotone: target not bracketed");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x) - target;
    if (fx == 0.0) return x;
    if (fx * flo > 0.0) { lo = x; flo = fx; } else { hi = x; }
    const double d = df(x);
    double xn = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= tol * (1.0 + std::abs(xn))) return xn;
    x = xn;
  }
  return x;
}

// xoshiro256** (public-domain reference implementation by Blackman & Vigna),
// seeded via splitmix64.
static std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  if (a <= 0.0 || b <= 0.0)
    throw Error(ErrorCode::invalid_input, "logspace needs positive endpoints");
  const double la = std::log(a), lb = std::log(b);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = std::exp(la + (lb - la) * i / (n - 1));
  v.front() = a;
  v.back() = b;
  return v;
}

}  // namespace qlmass
