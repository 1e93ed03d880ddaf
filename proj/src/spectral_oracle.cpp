#include "elbm/spectral_oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace elbm {

using cd = std::complex<double>;

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double wave_number(int m, int n) {
  const int signed_m = m <= n / 2 ? m : m - n;
  return 2.0 * std::numbers::pi * signed_m / n;
}

bool is_nyquist(int m, int n) { return n % 2 == 0 && m == n / 2; }

}  // namespace

CnMatrices assemble_cn_matrices(double kx, double ky, const MaterialParams& material) {
  const double a2 = (material.lambda + 2.0 * material.mu) / material.rho0;
  const double s2 = material.mu / material.rho0;
  const double d2 = (material.lambda + material.mu) / material.rho0;
  const double a = a2 * kx * kx + s2 * ky * ky;
  const double b = d2 * kx * ky;
  const double c = a2 * ky * ky + s2 * kx * kx;

  CnMatrices cn;
  cn.M << 1.0, 0.0, -0.5, 0.0,
          0.0, 1.0, 0.0, -0.5,
          0.5 * a, 0.5 * b, 1.0, 0.0,
          0.5 * b, 0.5 * c, 0.0, 1.0;
  cn.N << 1.0, 0.0, 0.5, 0.0, 0.0, 0.0,
          0.0, 1.0, 0.0, 0.5, 0.0, 0.0,
          -0.5 * a, -0.5 * b, 1.0, 0.0, 0.5, 0.0,
          -0.5 * b, -0.5 * c, 0.0, 1.0, 0.0, 0.5;
  return cn;
}

Eigen::Matrix<double, 4, 6> cn_propagator(const CnMatrices& cn) {
  Eigen::FullPivLU<Eigen::Matrix4d> lu(cn.M);
  if (!lu.isInvertible()) throw std::runtime_error("singular Crank-Nicolson matrix");
  return lu.solve(cn.N);
}

SpectralVector cn_step(const Eigen::Matrix<double, 4, 6>& propagator, const SpectralVector& j,
                       cd gx, cd gy) {
  const cd in[6] = {j[0], j[1], j[2], j[3], gx, gy};
  SpectralVector out{};
  for (int r = 0; r < 4; ++r) {
    cd acc = 0.0;
    for (int c = 0; c < 6; ++c) acc += propagator(r, c) * in[c];
    out[r] = acc;
  }
  return out;
}

struct SpectralOracle::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Plans(int nx, int ny) {
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(n);
    forward = fftw_plan_dft_2d(ny, nx, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_2d(ny, nx, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
};

SpectralOracle::SpectralOracle(int nx, int ny, const MaterialParams& material,
                               std::vector<SourceSpec> sources)
    : nx_(nx), ny_(ny), material_(material), sources_(std::move(sources)) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid extents must be positive");
  plans_ = std::make_unique<Plans>(nx, ny);
  const std::size_t n = static_cast<std::size_t>(nx) * ny;

  propagators_.resize(n);
  for (int my = 0; my < ny; ++my)
    for (int mx = 0; mx < nx; ++mx) {
      CnMatrices cn = assemble_cn_matrices(wave_number(mx, nx), wave_number(my, ny), material_);
      if (is_nyquist(mx, nx) || is_nyquist(my, ny)) {
        cn.M(2, 1) = cn.M(3, 0) = 0.0;
        cn.N(2, 1) = cn.N(3, 0) = 0.0;
      }
      propagators_[static_cast<std::size_t>(my) * nx + mx] = cn_propagator(cn);
    }

  for (const auto& s : sources_) {
    const auto g = gaussian_profile(s, nx, ny);
    for (std::size_t i = 0; i < n; ++i) {
      plans_->buffer[i][0] = g[i] * s.amplitude / material_.rho0;
      plans_->buffer[i][1] = 0.0;
    }
    fftw_execute(plans_->forward);
    std::vector<cd> hx(n), hy(n);
    for (std::size_t i = 0; i < n; ++i) {
      const cd v(plans_->buffer[i][0], plans_->buffer[i][1]);
      hx[i] = v * s.dir_x;
      hy[i] = v * s.dir_y;
    }
    source_hat_x_.push_back(std::move(hx));
    source_hat_y_.push_back(std::move(hy));
  }
  coeffs_.assign(n, SpectralVector{});
}

SpectralOracle::~SpectralOracle() = default;

void SpectralOracle::step() {
  const double t = static_cast<double>(time_step_);
  std::vector<double> weight(sources_.size());
  for (std::size_t s = 0; s < sources_.size(); ++s)
    weight[s] = ricker_dt(t, sources_[s].period, sources_[s].t0) +
                ricker_dt(t + 1.0, sources_[s].period, sources_[s].t0);

  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    cd gx = 0.0, gy = 0.0;
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      gx += weight[s] * source_hat_x_[s][i];
      gy += weight[s] * source_hat_y_[s][i];
    }
    coeffs_[i] = cn_step(propagators_[i], coeffs_[i], gx, gy);
  }
  ++time_step_;
}

void SpectralOracle::run(long steps) {
  for (long k = 0; k < steps; ++k) step();
}

VectorField SpectralOracle::fields(double* max_imag) const {
  VectorField out(nx_, ny_);
  const std::size_t n = coeffs_.size();
  const double scale = 1.0 / static_cast<double>(n);
  double worst = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    for (std::size_t i = 0; i < n; ++i) {
      plans_->buffer[i][0] = coeffs_[i][comp].real();
      plans_->buffer[i][1] = coeffs_[i][comp].imag();
    }
    fftw_execute(plans_->backward);
    auto& dst = comp == 0 ? out.x : out.y;
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] = plans_->buffer[i][0] * scale;
      worst = std::max(worst, std::abs(plans_->buffer[i][1] * scale));
    }
  }
  if (max_imag) *max_imag = worst;
  return out;
}

double SpectralOracle::spectral_energy() const {
  double e = 0.0;
  for (const auto& v : coeffs_)
    for (const auto& c : v) e += std::norm(c);
  return e;
}

std::map<long, VectorField> run_oracle(const MaterialParams& material,
                                       const std::vector<SourceSpec>& sources, int nx, int ny,
                                       const std::vector<long>& snapshot_steps) {
  SpectralOracle oracle(nx, ny, material, sources);
  std::vector<long> steps = snapshot_steps;
  std::sort(steps.begin(), steps.end());
  std::map<long, VectorField> out;
  for (long s : steps) {
    if (s < 0) throw std::invalid_argument("snapshot steps must be non-negative");
    oracle.run(s - oracle.time_step());
    out.emplace(s, oracle.fields());
  }
  return out;
}

}  // namespace elbm
