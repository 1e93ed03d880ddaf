#ifndef ELBM_STABILITY_HPP_
#define ELBM_STABILITY_HPP_

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <ostream>
#include <vector>

#include "elbm/material.hpp"

namespace elbm {

using AmplificationMatrix = Eigen::Matrix<std::complex<double>, 9, 9>;
using WaveVector = std::array<double, 2>;

/// One-step amplification matrix of the periodic scheme for the plane wave
/// exp(i k.x), with dx = dt = 1. The density-gradient forcing enters through
/// the centered-difference symbol i sin(k), both in the half-force shift of the
/// equilibrium flux and in the projected source term.
AmplificationMatrix vn_matrix(const WaveVector& k, const MaterialParams& material);

/// Largest eigenvalue modulus. Throws std::runtime_error if the eigensolver
/// fails or an eigenpair residual exceeds 1e-8 ||M||.
double spectral_radius(const Eigen::MatrixXcd& m);

inline constexpr double kInstabilityTolerance = 1e-8;

struct StabilityReport {
  double nu = 0.0;
  double tau = 0.0;
  std::vector<WaveVector> k_grid;
  std::vector<double> max_modulus;
  std::vector<WaveVector> unstable;
};

/// {0} plus n uniform samples in (0, pi] on each axis.
std::vector<WaveVector> default_k_grid(int n = 64);

StabilityReport stability_map(double nu, double tau, const std::vector<WaveVector>& k_grid,
                              int workers = 1);

/// Eigenvalues along k = s * direction for n_samples values of s in [0, pi].
std::vector<std::array<std::complex<double>, 9>> eigen_loci(double nu, double tau,
                                                            const WaveVector& direction,
                                                            int n_samples);

/// Header "kx,ky,max_modulus" then one row per wave vector.
void write_stability_csv(const StabilityReport& report, std::ostream& os);

}  // namespace elbm

#endif  // ELBM_STABILITY_HPP_
