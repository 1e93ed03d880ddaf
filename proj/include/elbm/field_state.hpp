#ifndef ELBM_FIELD_STATE_HPP_
#define ELBM_FIELD_STATE_HPP_

#include <cstddef>
#include <vector>

#include "elbm/lattice.hpp"

namespace elbm {

/// Populations and macroscopic moments on an nx-by-ny grid.
///
/// Node (x, y) lives at index y * nx + x. Populations are stored by
/// direction: f[q * nodes + index]. The moment arrays hold the values for
/// the current time_step (pre-collision), including the half-force
/// correction in jx/jy and the total source in sx/sy.
struct FieldState {
  int nx = 0;
  int ny = 0;
  long time_step = 0;

  std::vector<double> f;
  std::vector<double> rho;
  std::vector<double> jx, jy;
  std::vector<double> pxx, pxy, pyy;
  std::vector<double> sx, sy;

  FieldState() = default;
  FieldState(int nx_, int ny_);

  std::size_t nodes() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * nx + x; }
  double& pop(int q, std::size_t i) { return f[q * nodes() + i]; }
  double pop(int q, std::size_t i) const { return f[q * nodes() + i]; }
};

inline FieldState::FieldState(int nx_, int ny_)
    : nx(nx_),
      ny(ny_),
      f(static_cast<std::size_t>(LatticeD2Q9::Q) * nx_ * ny_),
      rho(static_cast<std::size_t>(nx_) * ny_),
      jx(rho.size()),
      jy(rho.size()),
      pxx(rho.size()),
      pxy(rho.size()),
      pyy(rho.size()),
      sx(rho.size()),
      sy(rho.size()) {}

}  // namespace elbm

#endif  // ELBM_FIELD_STATE_HPP_
