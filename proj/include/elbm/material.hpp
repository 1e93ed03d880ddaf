#ifndef ELBM_MATERIAL_HPP_
#define ELBM_MATERIAL_HPP_

#include <string>
#include <vector>

namespace elbm {

/// Upper bound on the Poisson ratio: beyond it the forcing coefficient makes
/// the scheme unconditionally unstable.
inline constexpr double kPoissonLimit = 5.0 / 11.0;

/// Isotropic linear elastic solid in lattice units.
///
/// The shear modulus is pinned by the lattice (mu = rho0 b^2, so the shear
/// speed equals the lattice sound speed); only nu, tau and rho0 are free.
struct MaterialParams {
  double rho0 = 1.0;
  double nu = 0.25;
  double mu = 0.0;
  double lambda = 0.0;
  double tau = 0.55;
  double vP = 0.0;
  double vS = 0.0;
  double Lambda_coef = 0.0;  // (mu - lambda) / (rho0 b^2)

  /// Coefficient of the density gradient in the body force, (mu - lambda) / rho0.
  double gradient_coef() const { return (mu - lambda) / rho0; }
};

/// Empty when (nu, tau, rho0) is admissible.
std::vector<std::string> material_violations(double nu, double tau, double rho0);

/// Throws std::invalid_argument listing every violation.
MaterialParams make_material(double nu, double tau = 0.55, double rho0 = 1.0);

}  // namespace elbm

#endif  // ELBM_MATERIAL_HPP_
