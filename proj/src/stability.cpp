#include "elbm/stability.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <stdexcept>

#include "elbm/lattice.hpp"
#include "elbm/parallel.hpp"

namespace elbm {

using namespace d2q9;
using cd = std::complex<double>;

AmplificationMatrix vn_matrix(const WaveVector& k, const MaterialParams& material) {
  const double tau = material.tau;
  const double lam = material.Lambda_coef;
  const cd dx(0.0, std::sin(k[0]));
  const cd dy(0.0, std::sin(k[1]));

  AmplificationMatrix m;
  for (int l = 0; l < Q; ++l) {
    const cd phase = std::exp(cd(0.0, -(k[0] * cx[l] + k[1] * cy[l])));
    const cd grad = lam * (double(cx[l]) * dx + double(cy[l]) * dy);
    const double qlxx = cx[l] * cx[l] - b2, qlyy = cy[l] * cy[l] - b2, qlxy = cx[l] * cy[l];
    for (int j = 0; j < Q; ++j) {
      const double qjxx = cx[j] * cx[j] - b2, qjyy = cy[j] * cy[j] - b2, qjxy = cx[j] * cy[j];
      const double flux = (cx[l] * cx[j] + cy[l] * cy[j]) / b2;
      const double stress = (qlxx * qjxx + qlyy * qjyy + 2.0 * qlxy * qjxy) / (2.0 * b4);
      const cd eq = 1.0 + flux + stress + 0.5 * grad;
      const cd entry = (l == j ? 1.0 - 1.0 / tau : 0.0) + (w[l] / tau) * eq +
                       (1.0 - 0.5 / tau) * w[l] * grad;
      m(l, j) = phase * entry;
    }
  }
  return m;
}

double spectral_radius(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const double scale = std::max(m.norm(), 1e-300);
  double radius = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double res = (m * vectors.col(i) - values(i) * vectors.col(i)).norm() /
                       std::max(vectors.col(i).norm(), 1e-300);
    if (res > 1e-8 * scale)
      throw std::runtime_error("eigenpair residual " + std::to_string(res) + " exceeds tolerance");
    radius = std::max(radius, std::abs(values(i)));
  }
  return radius;
}

std::vector<WaveVector> default_k_grid(int n) {
  std::vector<double> axis{0.0};
  for (int i = 1; i <= n; ++i) axis.push_back(std::numbers::pi * i / n);
  std::vector<WaveVector> grid;
  grid.reserve(axis.size() * axis.size());
  for (double ky : axis)
    for (double kx : axis) grid.push_back({kx, ky});
  return grid;
}

StabilityReport stability_map(double nu, double tau, const std::vector<WaveVector>& k_grid,
                              int workers) {
  for (const auto& k : k_grid)
    if (k[0] < 0.0 || k[1] < 0.0 || k[0] > std::numbers::pi + 1e-12 ||
        k[1] > std::numbers::pi + 1e-12)
      throw std::invalid_argument("wave vectors must lie in [0, pi]^2");
  const MaterialParams mat = make_material(nu, tau);
  StabilityReport report;
  report.nu = nu;
  report.tau = tau;
  report.k_grid = k_grid;
  report.max_modulus.assign(k_grid.size(), 0.0);
  parallel_rows(static_cast<int>(k_grid.size()), workers, [&](int b, int e) {
    for (int i = b; i < e; ++i) report.max_modulus[i] = spectral_radius(vn_matrix(k_grid[i], mat));
  });
  for (std::size_t i = 0; i < k_grid.size(); ++i)
    if (report.max_modulus[i] > 1.0 + kInstabilityTolerance) report.unstable.push_back(k_grid[i]);
  return report;
}

std::vector<std::array<std::complex<double>, 9>> eigen_loci(double nu, double tau,
                                                            const WaveVector& direction,
                                                            int n_samples) {
  const double norm = std::hypot(direction[0], direction[1]);
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("direction must be a unit vector");
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  const MaterialParams mat = make_material(nu, tau);
  std::vector<std::array<cd, 9>> loci;
  for (int s = 0; s < n_samples; ++s) {
    const double kk = std::numbers::pi * s / (n_samples - 1);
    Eigen::ComplexEigenSolver<AmplificationMatrix> solver(
        vn_matrix({kk * direction[0], kk * direction[1]}, mat), false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    std::array<cd, 9> row;
    for (int i = 0; i < 9; ++i) row[i] = solver.eigenvalues()(i);
    loci.push_back(row);
  }
  return loci;
}

void write_stability_csv(const StabilityReport& report, std::ostream& os) {
  os << "kx,ky,max_modulus\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.k_grid.size(); ++i)
    os << report.k_grid[i][0] << ',' << report.k_grid[i][1] << ',' << report.max_modulus[i]
       << '\n';
}

}  // namespace elbm
