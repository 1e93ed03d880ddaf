#include "elbm/sources.hpp"

#include <cmath>
#include <numbers>

namespace elbm {

std::vector<std::string> source_violations(const SourceSpec& spec) {
  std::vector<std::string> errs;
  if (!(spec.sigma > 0.0)) errs.push_back("source sigma must be positive");
  if (!(spec.period > 0.0)) errs.push_back("source period must be positive");
  const double norm = std::hypot(spec.dir_x, spec.dir_y);
  if (std::abs(norm - 1.0) > 1e-9) errs.push_back("source direction must be a unit vector");
  if (!std::isfinite(spec.amplitude)) errs.push_back("source amplitude must be finite");
  return errs;
}

double ricker(double t, double period, double t0) {
  const double a = std::pow(std::numbers::pi * (t - t0) / period, 2);
  return (1.0 - 2.0 * a) * std::exp(-a);
}

double ricker_dt(double t, double period, double t0) {
  const double u = t - t0;
  const double pf = std::numbers::pi / period;
  const double a = pf * pf * u * u;
  const double da = 2.0 * pf * pf * u;
  return -da * (3.0 - 2.0 * a) * std::exp(-a);
}

std::vector<double> gaussian_profile(const SourceSpec& spec, int nx, int ny) {
  std::vector<double> g(static_cast<std::size_t>(nx) * ny);
  const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
  for (int y = 0; y < ny; ++y) {
    const double dy = y - spec.center_y;
    for (int x = 0; x < nx; ++x) {
      const double dx = x - spec.center_x;
      g[static_cast<std::size_t>(y) * nx + x] = std::exp(-(dx * dx + dy * dy) * inv);
    }
  }
  return g;
}

namespace {

VectorField scaled_profile(double factor, const SourceSpec& spec, int nx, int ny) {
  VectorField out(nx, ny);
  const auto g = gaussian_profile(spec, nx, ny);
  const double ax = spec.amplitude * spec.dir_x * factor;
  const double ay = spec.amplitude * spec.dir_y * factor;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.x[i] = ax * g[i];
    out.y[i] = ay * g[i];
  }
  return out;
}

}  // namespace

VectorField eval_force(double t, const SourceSpec& spec, int nx, int ny) {
  return scaled_profile(ricker(t, spec.period, spec.t0), spec, nx, ny);
}

VectorField eval_force_dt(double t, const SourceSpec& spec, int nx, int ny) {
  return scaled_profile(ricker_dt(t, spec.period, spec.t0), spec, nx, ny);
}

}  // namespace elbm
