#ifndef QLMASS_METRIC_PATHS_HPP
#define QLMASS_METRIC_PATHS_HPP

#include <vector>

#include "qlmass/surface_geometry.hpp"

namespace qlmass {

// One-parameter family g(s), s in [0, 1], between two equal-area metrics,
// with pointwise-constant area form (hence exactly trace-free velocity).
// The family is f_s = f0 * r^(s/2), h_s = h0 * r^(-s/2) with
// r(theta) = (f1 h0) / (f0 h1); d/ds log(f_s/h_s) = log r.
struct TraceFreePath {
  std::vector<double> s_grid;
  std::vector<AxisymmetricMetric> metrics;       // one per s
  std::vector<std::vector<double>> f_dot;        // finite differences in s
  std::vector<std::vector<double>> h_dot;
  std::vector<double> log_ratio;                 // log r(theta)
  std::vector<std::vector<double>> gdot_norm2;   // |g'(s)|_g^2 per (s, theta)
  double alpha = 0.0;        // (1/4) max |g'(s)|^2_g over the grid
  double beta = 0.0;         // min K(g(s)) over the grid
  double trace_defect = 0.0; // max |tr_g g'(s)| from the FD velocities

  int n_s() const { return static_cast<int>(s_grid.size()); }
  int n_theta() const { return metrics.empty() ? 0 : metrics.front().size(); }
};

// Pulls g2 back by the monotone colatitude reparametrization that matches
// cumulative area functions, so the result is isometric to g2 with area
// density f h equal to g1's pointwise. Requires equal total areas.
AxisymmetricMetric area_equalize(const AxisymmetricMetric& g1,
                                 const AxisymmetricMetric& g2,
                                 double area_tol = 1e-8);

// Builds the path from g1 to the area-equalized g2. Throws
// PositiveCurvatureLost when K(g(s)) fails to stay positive, reporting the
// violating (s, theta).
TraceFreePath build_path(const AxisymmetricMetric& g1,
                         const AxisymmetricMetric& g2, int n_s = 65);

struct PathConstants {
  double alpha;
  double beta;
};

PathConstants path_constants(const TraceFreePath& path);

}  // namespace qlmass

#endif
