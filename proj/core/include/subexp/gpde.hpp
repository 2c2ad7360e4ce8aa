#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace subexp::gpde {

/// Volatility band of the nonlinear heat equation, stored as variances.
struct GNormalParams {
  double sigma_lo2, sigma_hi2;
  GNormalParams(double lo2, double hi2);
  double sigma_hi() const;
};

/// Driver: G(a) = (sigma_hi2 * a^+ - sigma_lo2 * a^-) / 2.
double g_value(const GNormalParams& p, double a);

/**
 * Uniform spatial grid on [-half_width, half_width] with a time horizon.
 * dx is snapped so the node count is integral; ratio is the parabolic number
 * dt * sigma_hi2 / dx^2 the solver will respect, and must stay <= 1/2 for the
 * explicit scheme to be monotone.
 */
struct Grid {
  double half_width;
  double dx;
  double horizon;
  double ratio;

  Grid(double half_width, double dx, double horizon, double ratio = 0.4);

  std::size_t nodes() const noexcept { return 2 * half_nodes_ + 1; }
  std::size_t center() const noexcept { return half_nodes_; }
  double node(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(half_nodes_)) * dx; }

  /// The resolution used by the reported expectations: L = 8, dx = 0.01.
  static Grid reference(double horizon = 1.0);
  /// Same extent at half the spacing.
  Grid refined() const;

 private:
  std::size_t half_nodes_;
};

struct Solution {
  Grid grid;
  GNormalParams params;
  std::vector<double> times;                 // capture instants, horizon last
  std::vector<std::vector<double>> fields;   // one field per capture instant
  const std::vector<double>& final_field() const { return fields.back(); }
  double value_at_zero() const { return fields.back()[grid.center()]; }
};

/**
 * Explicit monotone finite-difference solution of
 *   du/dt = G(d2u/dx2),  u(., 0) = phi,
 * marched to the grid horizon with zero-slope boundary ghosts. snapshot_times
 * are rounded up to step boundaries; the horizon is always captured. The grid
 * must extend at least six sigma_hi past the origin so the boundary error
 * stays below the scheme error for bounded Lipschitz data.
 */
Solution solve_g_heat(const GNormalParams& p, const Grid& grid,
                      const std::function<double(double)>& phi,
                      const std::vector<double>& snapshot_times = {});

/// E[phi(xi)] for the canonical volatility-band law: the solved field at the
/// origin with horizon 1.
double gnormal_expectation(const GNormalParams& p, const std::function<double(double)>& phi,
                           const Grid& grid);

/// Closed-form E[clamp(x + Z, -1, 1)] for standard normal Z. When the band
/// collapses to one variance the solver must reproduce this curve; used as
/// the independent reference in the linear-limit diagnostics.
double gaussian_ramp_reference(double x);

struct CopyCheck {
  double combined;   // E[phi(a xi + b xi')] via the two-stage solve
  double direct;     // E[phi(sqrt(a^2+b^2) xi)]
  double gap;        // |combined - direct|
};

/**
 * Independence self-test: for independent copies xi, xi' and a, b >= 0 the
 * law of a xi + b xi' matches that of sqrt(a^2+b^2) xi. The combined side is
 * computed by solving to time b^2, composing with the scaled field through
 * clamped linear interpolation, and solving the result to time 1.
 */
CopyCheck independent_copy_check(const GNormalParams& p,
                                 const std::function<double(double)>& phi, double a, double b,
                                 const Grid& grid);

}  // namespace subexp::gpde
