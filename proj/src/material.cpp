#include "elbm/material.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "elbm/errors.hpp"
#include "elbm/lattice.hpp"

namespace elbm {
namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("invalid configuration: " + join(violations, "; ")),
      violations_(std::move(violations)) {}

DivergenceError::DivergenceError(int x, int y, long step)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "non-finite population at node (" << x << ", " << y << ") in step " << step;
        return os.str();
      }()),
      x_(x),
      y_(y),
      step_(step) {}

std::vector<std::string> material_violations(double nu, double tau, double rho0) {
  std::vector<std::string> errs;
  if (!std::isfinite(nu) || nu <= -1.0)
    errs.push_back("nu must be a finite value greater than -1");
  if (nu >= kPoissonLimit)
    errs.push_back(
        "nu must be below 5/11 (~0.4545): above this Poisson ratio the density-gradient "
        "forcing makes the scheme unstable for every wave vector");
  if (!(tau > 0.5)) errs.push_back("tau must exceed 0.5 (relaxation time in units of dt)");
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) errs.push_back("rho0 must be positive");
  return errs;
}

MaterialParams make_material(double nu, double tau, double rho0) {
  if (auto errs = material_violations(nu, tau, rho0); !errs.empty())
    throw std::invalid_argument(join(errs, "; "));
  MaterialParams m;
  m.rho0 = rho0;
  m.nu = nu;
  m.tau = tau;
  m.mu = rho0 * d2q9::b2;
  m.lambda = 2.0 * nu * m.mu / (1.0 - 2.0 * nu);
  m.vS = std::sqrt(m.mu / rho0);
  m.vP = std::sqrt((m.lambda + 2.0 * m.mu) / rho0);
  m.Lambda_coef = (m.mu - m.lambda) / (rho0 * d2q9::b2);
  return m;
}

}  // namespace elbm
