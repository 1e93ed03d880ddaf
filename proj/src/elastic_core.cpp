#include "elbm/elastic_core.hpp"

#include <cmath>
#include <stdexcept>

#include "elbm/errors.hpp"
#include "elbm/parallel.hpp"

namespace elbm {

using namespace d2q9;

namespace {

void gradient_rows(std::span<const double> rho, int nx, int ny, bool periodic_x, bool periodic_y,
                   std::span<double> gx, std::span<double> gy, int y_begin, int y_end) {
  auto at = [&](int x, int y) { return rho[static_cast<std::size_t>(y) * nx + x]; };
  for (int y = y_begin; y < y_end; ++y) {
    for (int x = 0; x < nx; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * nx + x;
      if (x > 0 && x < nx - 1)
        gx[i] = 0.5 * (at(x + 1, y) - at(x - 1, y));
      else if (periodic_x)
        gx[i] = 0.5 * (at((x + 1) % nx, y) - at((x - 1 + nx) % nx, y));
      else if (nx == 1)
        gx[i] = 0.0;
      else
        gx[i] = x == 0 ? at(1, y) - at(0, y) : at(nx - 1, y) - at(nx - 2, y);

      if (y > 0 && y < ny - 1)
        gy[i] = 0.5 * (at(x, y + 1) - at(x, y - 1));
      else if (periodic_y)
        gy[i] = 0.5 * (at(x, (y + 1) % ny) - at(x, (y - 1 + ny) % ny));
      else if (ny == 1)
        gy[i] = 0.0;
      else
        gy[i] = y == 0 ? at(x, 1) - at(x, 0) : at(x, ny - 1) - at(x, ny - 2);
    }
  }
}

}  // namespace

void density_gradient(std::span<const double> rho, int nx, int ny, bool periodic_x,
                      bool periodic_y, std::span<double> gx, std::span<double> gy) {
  gradient_rows(rho, nx, ny, periodic_x, periodic_y, gx, gy, 0, ny);
}

Populations equilibrium(double rho, double jx, double jy, double pn_xx, double pn_xy,
                        double pn_yy) {
  Populations feq;
  for (int i = 0; i < Q; ++i) {
    const double ex = cx[i], ey = cy[i];
    const double flux = (ex * jx + ey * jy) / b2;
    const double stress =
        (pn_xx * (ex * ex - b2) + pn_yy * (ey * ey - b2) + 2.0 * pn_xy * ex * ey) / (2.0 * b4);
    feq[i] = w[i] * (rho + flux + stress);
  }
  return feq;
}

Populations discrete_source(double sx, double sy) {
  Populations s;
  for (int i = 0; i < Q; ++i) s[i] = w[i] * (cx[i] * sx + cy[i] * sy) / b2;
  return s;
}

Populations collide(const Populations& f, const Populations& feq, const Populations& source,
                    double tau) {
  Populations out;
  const double relax = 1.0 / tau;
  const double forcing = 1.0 - 0.5 / tau;
  for (int i = 0; i < Q; ++i) out[i] = f[i] - relax * (f[i] - feq[i]) + forcing * source[i];
  return out;
}

NodeMoments recover_macros(const Populations& f, double s0x, double s0y, double damping) {
  NodeMoments m;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < Q; ++i) {
    const double ex = cx[i], ey = cy[i];
    m.rho += f[i];
    mx += f[i] * ex;
    my += f[i] * ey;
    m.pxx += f[i] * ex * ex;
    m.pxy += f[i] * ex * ey;
    m.pyy += f[i] * ey * ey;
  }
  const double denom = 1.0 + 0.5 * damping;
  m.jx = (mx + 0.5 * s0x) / denom;
  m.jy = (my + 0.5 * s0y) / denom;
  m.sx = s0x - damping * m.jx;
  m.sy = s0y - damping * m.jy;
  return m;
}

void initialize_rest(FieldState& state, double rho0) {
  const std::size_t n = state.nodes();
  for (int q = 0; q < Q; ++q)
    std::fill(state.f.begin() + q * n, state.f.begin() + (q + 1) * n, w[q] * rho0);
}

Solver::Solver(int nx, int ny, const MaterialParams& material, BoundarySpec boundaries,
               std::vector<SourceSpec> sources, SolverOptions options)
    : material_(material),
      boundaries_(std::move(boundaries)),
      sources_(std::move(sources)),
      options_(options),
      state_(nx, ny),
      fstar_(state_.f.size()),
      grad_x_(state_.nodes()),
      grad_y_(state_.nodes()) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid extents must be positive");
  if (auto errs = boundary_violations(boundaries_, nx, ny); !errs.empty()) throw ConfigError(errs);
  for (const auto& s : sources_) {
    if (auto errs = source_violations(s); !errs.empty()) throw ConfigError(errs);
    source_profiles_.push_back(gaussian_profile(s, nx, ny));
  }
  damping_ = damping_field(boundaries_, nx, ny);
  initialize_rest(state_, material_.rho0);
  refresh_macros();
}

void Solver::set_boundaries(const BoundarySpec& boundaries) {
  if (auto errs = boundary_violations(boundaries, state_.nx, state_.ny); !errs.empty())
    throw ConfigError(errs);
  boundaries_ = boundaries;
  damping_ = damping_field(boundaries_, state_.nx, state_.ny);
  refresh_macros();
}

void Solver::refresh_macros() {
  const int nx = state_.nx, ny = state_.ny;
  const std::size_t n = state_.nodes();

  parallel_rows(ny, options_.workers, [&](int y0, int y1) {
    for (std::size_t i = static_cast<std::size_t>(y0) * nx; i < static_cast<std::size_t>(y1) * nx;
         ++i) {
      double r = 0.0;
      for (int q = 0; q < Q; ++q) r += state_.f[q * n + i];
      state_.rho[i] = r;
    }
  });

  std::vector<double> wavelet(sources_.size());
  for (std::size_t s = 0; s < sources_.size(); ++s)
    wavelet[s] = sources_[s].amplitude *
                 ricker(static_cast<double>(state_.time_step), sources_[s].period, sources_[s].t0);

  const double gc = material_.gradient_coef();
  parallel_rows(ny, options_.workers, [&](int y0, int y1) {
    gradient_rows(state_.rho, nx, ny, boundaries_.periodic_x(), boundaries_.periodic_y(), grad_x_,
                  grad_y_, y0, y1);
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < nx; ++x) {
        const std::size_t i = state_.index(x, y);
        double s0x = gc * grad_x_[i];
        double s0y = gc * grad_y_[i];
        for (std::size_t s = 0; s < sources_.size(); ++s) {
          const double g = wavelet[s] * source_profiles_[s][i];
          s0x += g * sources_[s].dir_x;
          s0y += g * sources_[s].dir_y;
        }
        Populations f;
        for (int q = 0; q < Q; ++q) f[q] = state_.f[q * n + i];
        const NodeMoments m = recover_macros(f, s0x, s0y, damping_[i]);
        if (!std::isfinite(m.rho) || !std::isfinite(m.jx) || !std::isfinite(m.jy) ||
            !std::isfinite(m.pxx) || !std::isfinite(m.pyy))
          throw DivergenceError(x, y, state_.time_step);
        state_.rho[i] = m.rho;
        state_.jx[i] = m.jx;
        state_.jy[i] = m.jy;
        state_.pxx[i] = m.pxx;
        state_.pxy[i] = m.pxy;
        state_.pyy[i] = m.pyy;
        state_.sx[i] = m.sx;
        state_.sy[i] = m.sy;
      }
    }
  });
}

void Solver::collide_rows(int y_begin, int y_end) {
  const std::size_t n = state_.nodes();
  const double tau = material_.tau;
  for (std::size_t i = static_cast<std::size_t>(y_begin) * state_.nx;
       i < static_cast<std::size_t>(y_end) * state_.nx; ++i) {
    const double rho = state_.rho[i];
    const Populations feq =
        equilibrium(rho, state_.jx[i], state_.jy[i], state_.pxx[i] - rho * b2, state_.pxy[i],
                    state_.pyy[i] - rho * b2);
    const Populations src = discrete_source(state_.sx[i], state_.sy[i]);
    Populations f;
    for (int q = 0; q < Q; ++q) f[q] = state_.f[q * n + i];
    const Populations post = collide(f, feq, src, tau);
    for (int q = 0; q < Q; ++q) fstar_[q * n + i] = post[q];
  }
}

void Solver::step() {
  parallel_rows(state_.ny, options_.workers, [&](int y0, int y1) { collide_rows(y0, y1); });
  parallel_rows(state_.ny, options_.workers, [&](int y0, int y1) {
    stream_rows(fstar_, state_.f, state_, material_, boundaries_, y0, y1);
  });
  ++state_.time_step;
  refresh_macros();
}

void Solver::run(long steps) {
  for (long k = 0; k < steps; ++k) step();
}

}  // namespace elbm
