#ifndef ELBM_SPECTRAL_ORACLE_HPP_
#define ELBM_SPECTRAL_ORACLE_HPP_

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "elbm/material.hpp"
#include "elbm/sources.hpp"

namespace elbm {

/// Fourier coefficients (jx, jy, d/dt jx, d/dt jy) of one wave vector.
using SpectralVector = std::array<std::complex<double>, 4>;

struct CnMatrices {
  Eigen::Matrix4d M;
  Eigen::Matrix<double, 4, 6> N;
};

/// Crank-Nicolson matrices (dt = 1) of the Fourier-space Navier equation for
/// the mass flux. N acts on (J, Gx, Gy) with G the sum of the forcing time
/// derivatives at both ends of the step, divided by rho0.
CnMatrices assemble_cn_matrices(double kx, double ky, const MaterialParams& material);

/// K = M^-1 N. Throws std::runtime_error if M is singular.
Eigen::Matrix<double, 4, 6> cn_propagator(const CnMatrices& cn);

SpectralVector cn_step(const Eigen::Matrix<double, 4, 6>& propagator, const SpectralVector& j,
                       std::complex<double> gx, std::complex<double> gy);

/// Periodic pseudo-spectral reference solver with Crank-Nicolson time stepping.
///
/// Starts from rest (all coefficients zero). Wave numbers follow the usual
/// DFT ordering 2 pi m / N; on the Nyquist row and column the cross-coupling
/// term is taken as zero so that conjugate symmetry survives.
class SpectralOracle {
 public:
  SpectralOracle(int nx, int ny, const MaterialParams& material, std::vector<SourceSpec> sources);
  ~SpectralOracle();
  SpectralOracle(const SpectralOracle&) = delete;
  SpectralOracle& operator=(const SpectralOracle&) = delete;

  void step();
  void run(long steps);
  long time_step() const { return time_step_; }

  /// Physical jx, jy. max_imag receives the largest discarded imaginary part.
  VectorField fields(double* max_imag = nullptr) const;

  /// Sum of |J|^2 over all wave vectors.
  double spectral_energy() const;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::vector<SpectralVector>& coefficients() const { return coeffs_; }
  std::vector<SpectralVector>& coefficients() { return coeffs_; }

 private:
  struct Plans;
  int nx_, ny_;
  MaterialParams material_;
  std::vector<SourceSpec> sources_;
  long time_step_ = 0;
  std::vector<Eigen::Matrix<double, 4, 6>> propagators_;
  std::vector<std::vector<std::complex<double>>> source_hat_x_, source_hat_y_;
  std::vector<SpectralVector> coeffs_;
  std::unique_ptr<Plans> plans_;
};

/// Runs the oracle to the largest requested step, returning the fields at each.
std::map<long, VectorField> run_oracle(const MaterialParams& material,
                                       const std::vector<SourceSpec>& sources, int nx, int ny,
                                       const std::vector<long>& snapshot_steps);

}  // namespace elbm

#endif  // ELBM_SPECTRAL_ORACLE_HPP_
