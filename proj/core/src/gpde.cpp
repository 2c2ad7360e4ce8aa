#include "subexp/gpde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace subexp::gpde {

GNormalParams::GNormalParams(double lo2, double hi2) : sigma_lo2(lo2), sigma_hi2(hi2) {
  if (!(hi2 > 0) || !std::isfinite(hi2))
    throw std::invalid_argument("volatility band: upper variance must be positive and finite");
  if (!(lo2 >= 0) || !(lo2 <= hi2))
    throw std::invalid_argument("volatility band: needs 0 <= lower variance <= upper variance");
}

double GNormalParams::sigma_hi() const { return std::sqrt(sigma_hi2); }

double g_value(const GNormalParams& p, double a) {
  return 0.5 * (p.sigma_hi2 * std::max(a, 0.0) - p.sigma_lo2 * std::max(-a, 0.0));
}

Grid::Grid(double half_width_in, double dx_in, double horizon_in, double ratio_in)
    : half_width(half_width_in), dx(dx_in), horizon(horizon_in), ratio(ratio_in) {
  if (!(half_width > 0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid: half width must be positive and finite");
  if (!(dx > 0) || dx > half_width)
    throw std::invalid_argument("grid: spacing must lie in (0, half width]");
  if (!(horizon > 0) || !std::isfinite(horizon))
    throw std::invalid_argument("grid: horizon must be positive and finite");
  if (!(ratio > 0) || ratio > 0.5)
    throw std::invalid_argument("grid: parabolic ratio must lie in (0, 1/2]");
  half_nodes_ = static_cast<std::size_t>(std::llround(half_width / dx));
  if (half_nodes_ < 2) throw std::invalid_argument("grid: needs at least two nodes per side");
  dx = half_width / static_cast<double>(half_nodes_);
}

Grid Grid::reference(double horizon) { return Grid(8.0, 0.01, horizon, 0.4); }

Grid Grid::refined() const { return Grid(half_width, dx / 2, horizon, ratio); }

Solution solve_g_heat(const GNormalParams& p, const Grid& grid,
                      const std::function<double(double)>& phi,
                      const std::vector<double>& snapshot_times) {
  if (!phi) throw std::invalid_argument("solver: initial data is empty");
  if (grid.half_width < 6.0 * std::sqrt(p.sigma_hi2 * grid.horizon))
    throw std::invalid_argument(
        "solver: grid half width " + std::to_string(grid.half_width) +
        " is under six standard deviations for this horizon; widen the grid");

  const std::size_t m = grid.nodes();
  std::vector<double> u(m);
  for (std::size_t i = 0; i < m; ++i) {
    u[i] = phi(grid.node(i));
    if (!std::isfinite(u[i]))
      throw std::invalid_argument("solver: initial data is not finite at x = " +
                                  std::to_string(grid.node(i)));
  }

  const double dt_target = grid.ratio * grid.dx * grid.dx / p.sigma_hi2;
  const auto steps = static_cast<std::size_t>(std::ceil(grid.horizon / dt_target - 1e-12));
  const double dt = grid.horizon / static_cast<double>(steps);
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);

  // Capture schedule: requested instants rounded up to step boundaries.
  std::vector<std::size_t> capture_steps;
  for (double t : snapshot_times) {
    if (t < 0 || t > grid.horizon + 1e-12)
      throw std::invalid_argument("solver: snapshot time outside [0, horizon]");
    capture_steps.push_back(static_cast<std::size_t>(std::ceil(t / dt - 1e-12)));
  }
  capture_steps.push_back(steps);
  std::sort(capture_steps.begin(), capture_steps.end());
  capture_steps.erase(std::unique(capture_steps.begin(), capture_steps.end()),
                      capture_steps.end());

  Solution sol{grid, p, {}, {}};
  auto maybe_capture = [&](std::size_t step) {
    if (std::binary_search(capture_steps.begin(), capture_steps.end(), step)) {
      sol.times.push_back(static_cast<double>(step) * dt);
      sol.fields.push_back(u);
    }
  };
  maybe_capture(0);

  std::vector<double> next(m);
  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t i = 0; i < m; ++i) {
      // One-sided second difference at the edges: the ghost copies the
      // boundary node, which keeps the update monotone.
      const double left = i > 0 ? u[i - 1] : u[0];
      const double right = i + 1 < m ? u[i + 1] : u[m - 1];
      const double d2 = (left - 2.0 * u[i] + right) * inv_dx2;
      next[i] = u[i] + dt * g_value(p, d2);
    }
    u.swap(next);
    maybe_capture(step);
  }
  return sol;
}

double gnormal_expectation(const GNormalParams& p, const std::function<double(double)>& phi,
                           const Grid& grid) {
  if (std::abs(grid.horizon - 1.0) > 1e-12)
    throw std::invalid_argument("canonical expectation needs a unit-horizon grid");
  return solve_g_heat(p, grid, phi).value_at_zero();
}

double gaussian_ramp_reference(double x) {
  const auto cdf = [](double t) { return 0.5 * (1.0 + std::erf(t / std::sqrt(2.0))); };
  const auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  const double a = -1.0 - x, b = 1.0 - x;
  return -cdf(a) + (1.0 - cdf(b)) + x * (cdf(b) - cdf(a)) + (pdf(a) - pdf(b));
}

CopyCheck independent_copy_check(const GNormalParams& p,
                                 const std::function<double(double)>& phi, double a, double b,
                                 const Grid& grid) {
  if (!(a >= 0) || !(b >= 0) || !(a * a + b * b > 0))
    throw std::invalid_argument("copy check: needs a, b >= 0 with a^2 + b^2 > 0");
  const double r = std::sqrt(a * a + b * b);

  CopyCheck out{};
  out.direct = gnormal_expectation(p, [&](double y) { return phi(r * y); }, grid);

  // Stage one: the law of b xi', frozen as a field over its support.
  std::vector<double> v(grid.nodes());
  if (b > 0) {
    const Grid inner(grid.half_width, grid.dx, b * b, grid.ratio);
    v = solve_g_heat(p, inner, phi).final_field();
  } else {
    for (std::size_t i = 0; i < grid.nodes(); ++i) v[i] = phi(grid.node(i));
  }

  // Stage two: feed y -> v(a y) back through the solver. Clamped linear
  // interpolation; a y beyond the grid sticks to the edge value.
  const double lo = grid.node(0), hi = grid.node(grid.nodes() - 1);
  auto v_init = [&](double y) {
    double t = std::clamp(a * y, lo, hi);
    double pos = (t - lo) / grid.dx;
    auto idx = static_cast<std::size_t>(pos);
    if (idx + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(idx);
    return v[idx] * (1.0 - frac) + v[idx + 1] * frac;
  };
  out.combined = gnormal_expectation(p, v_init, grid);
  out.gap = std::abs(out.combined - out.direct);
  return out;
}

}  // namespace subexp::gpde
