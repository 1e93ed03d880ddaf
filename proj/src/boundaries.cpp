#include "elbm/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "elbm/lattice.hpp"

namespace elbm {

using namespace d2q9;

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Periodic: return "periodic";
    case EdgeKind::RigidWall: return "wall";
    case EdgeKind::FreeSurface: return "free";
    case EdgeKind::Absorbing: return "absorbing";
  }
  return "?";
}

EdgeKind parse_edge_kind(std::string_view text) {
  if (text == "periodic") return EdgeKind::Periodic;
  if (text == "wall" || text == "rigid") return EdgeKind::RigidWall;
  if (text == "free") return EdgeKind::FreeSurface;
  if (text == "absorbing") return EdgeKind::Absorbing;
  throw std::invalid_argument("unknown edge kind '" + std::string(text) +
                              "' (expected periodic, wall, free or absorbing)");
}

const EdgeSpec& BoundarySpec::edge(Edge e) const {
  switch (e) {
    case Edge::Left: return left;
    case Edge::Right: return right;
    case Edge::Bottom: return bottom;
    case Edge::Top: return top;
  }
  throw std::logic_error("bad edge");
}

EdgeSpec& BoundarySpec::edge(Edge e) {
  return const_cast<EdgeSpec&>(static_cast<const BoundarySpec&>(*this).edge(e));
}

std::vector<std::string> boundary_violations(const BoundarySpec& spec, int nx, int ny) {
  std::vector<std::string> errs;
  auto is_periodic = [](const EdgeSpec& e) { return e.kind == EdgeKind::Periodic; };
  if (is_periodic(spec.left) != is_periodic(spec.right))
    errs.push_back("left and right edges must both be periodic or both non-periodic");
  if (is_periodic(spec.bottom) != is_periodic(spec.top))
    errs.push_back("bottom and top edges must both be periodic or both non-periodic");

  const struct {
    const char* name;
    const EdgeSpec* e;
    int normal_extent;
  } edges[] = {{"left", &spec.left, nx},
               {"right", &spec.right, nx},
               {"bottom", &spec.bottom, ny},
               {"top", &spec.top, ny}};
  for (const auto& [name, e, extent] : edges) {
    if (e->kind == EdgeKind::Absorbing) {
      const int limit = extent / 2;
      if (e->thickness < 1 || e->thickness > limit)
        errs.push_back(std::string(name) + " absorbing thickness must lie in [1, " +
                       std::to_string(limit) + "]");
      if (!(e->a_max >= 0.0)) errs.push_back(std::string(name) + " a_max must be non-negative");
      if (!(e->profile > 0.0))
        errs.push_back(std::string(name) + " ramp exponent must be positive");
    }
    if (e->kind == EdgeKind::FreeSurface && extent < 3)
      errs.push_back(std::string(name) +
                     " free surface needs at least 3 nodes along its normal for extrapolation");
  }
  return errs;
}

double damping_profile(double d, const EdgeSpec& spec) {
  if (d < 0.0 || d > spec.thickness)
    throw std::domain_error("damping distance outside [0, thickness]");
  return spec.a_max * std::pow((spec.thickness - d) / spec.thickness, spec.profile);
}

std::vector<double> damping_field(const BoundarySpec& spec, int nx, int ny) {
  std::vector<double> a(static_cast<std::size_t>(nx) * ny, 0.0);
  auto add = [&](const EdgeSpec& e, auto distance) {
    if (e.kind != EdgeKind::Absorbing) return;
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        const int d = distance(x, y);
        if (d >= e.thickness) continue;
        auto& v = a[static_cast<std::size_t>(y) * nx + x];
        v = std::max(v, damping_profile(d, e));
      }
  };
  add(spec.left, [](int x, int) { return x; });
  add(spec.right, [nx](int x, int) { return nx - 1 - x; });
  add(spec.bottom, [](int, int y) { return y; });
  add(spec.top, [ny](int, int y) { return ny - 1 - y; });
  return a;
}

void apply_absorbing(std::span<double> sx, std::span<double> sy, std::span<const double> jx,
                     std::span<const double> jy, std::span<const double> damping) {
  for (std::size_t i = 0; i < sx.size(); ++i) {
    sx[i] -= damping[i] * jx[i];
    sy[i] -= damping[i] * jy[i];
  }
}

double anti_bounce_back(int q, double outgoing_post_collision, const WallState& wall) {
  const int o = opp[q];
  const double pn_xx = wall.pxx - b2 * wall.rho;
  const double pn_yy = wall.pyy - b2 * wall.rho;
  const double ex = cx[o], ey = cy[o];
  const double contraction =
      pn_xx * (ex * ex - b2) + pn_yy * (ey * ey - b2) + 2.0 * wall.pxy * ex * ey;
  return -outgoing_post_collision + 2.0 * w[o] * (wall.rho + contraction / (2.0 * b4));
}

WallState free_surface_wall_state(Edge e, int x, int y, int shift, const FieldState& state,
                                  const MaterialParams& mat, const BoundarySpec& spec) {
  const bool normal_is_y = (e == Edge::Bottom || e == Edge::Top);
  const int nx = state.nx, ny = state.ny;
  const int step_in = (e == Edge::Top || e == Edge::Right) ? -1 : 1;

  // Tangential neighbour, wrapped on a periodic tangent and clamped otherwise.
  auto tangent_wrap = [&](int t, int extent, bool periodic) {
    if (periodic) return ((t % extent) + extent) % extent;
    return std::clamp(t, 0, extent - 1);
  };

  const bool linear = spec.free_surface.extrapolation == WallExtrapolation::Linear;
  auto sample = [&](int bx, int by, double& rho_w, double& ptt_w) {
    const std::size_t b = state.index(bx, by);
    const std::size_t in =
        normal_is_y ? state.index(bx, by + step_in) : state.index(bx + step_in, by);
    const auto& ptt = normal_is_y ? state.pxx : state.pyy;
    if (linear) {
      rho_w = 1.5 * state.rho[b] - 0.5 * state.rho[in];
      ptt_w = 1.5 * ptt[b] - 0.5 * ptt[in];
    } else {
      rho_w = state.rho[b];
      ptt_w = ptt[b];
    }
  };

  double rho_w, ptt_w;
  sample(x, y, rho_w, ptt_w);
  if (shift != 0 && spec.free_surface.diagonal_average) {
    double rho_n, ptt_n;
    if (normal_is_y)
      sample(tangent_wrap(x + shift, nx, spec.periodic_x()), y, rho_n, ptt_n);
    else
      sample(x, tangent_wrap(y + shift, ny, spec.periodic_y()), rho_n, ptt_n);
    rho_w = 0.5 * (rho_w + rho_n);
    ptt_w = 0.5 * (ptt_w + ptt_n);
  }

  WallState wall;
  wall.rho = rho_w;
  const double pnn = mat.rho0 * b2 + mat.gradient_coef() * (rho_w - mat.rho0);
  wall.pxy = 0.0;
  if (normal_is_y) {
    wall.pyy = pnn;
    wall.pxx = ptt_w;
  } else {
    wall.pxx = pnn;
    wall.pyy = ptt_w;
  }
  return wall;
}

namespace {

bool is_local(EdgeKind k) { return k == EdgeKind::RigidWall || k == EdgeKind::FreeSurface; }

int resolve(int c, int extent, EdgeKind kind) {
  if (c >= 0 && c < extent) return c;
  if (kind == EdgeKind::Periodic) return (c + extent) % extent;
  return c < 0 ? 0 : extent - 1;  // absorbing: zero-gradient copy
}

}  // namespace

void stream_rows(std::span<const double> fstar, std::span<double> out, const FieldState& state,
                 const MaterialParams& mat, const BoundarySpec& spec, int y_begin, int y_end) {
  const int nx = state.nx, ny = state.ny;
  const std::size_t n = state.nodes();

  auto local_rule = [&](Edge e, int q, int x, int y) {
    const std::size_t b = state.index(x, y);
    const int o = opp[q];
    const double outgoing = fstar[o * n + b];
    if (spec.edge(e).kind == EdgeKind::RigidWall) return bounce_back(outgoing);
    const bool normal_is_y = (e == Edge::Bottom || e == Edge::Top);
    const int shift = normal_is_y ? cx[o] : cy[o];
    return anti_bounce_back(q, outgoing, free_surface_wall_state(e, x, y, shift, state, mat, spec));
  };

  for (int y = y_begin; y < y_end; ++y) {
    for (int x = 0; x < nx; ++x) {
      const std::size_t i = state.index(x, y);
      out[i] = fstar[i];  // rest population
      for (int q = 1; q < Q; ++q) {
        const int sx = x - cx[q];
        const int sy = y - cy[q];
        const bool out_x = sx < 0 || sx >= nx;
        const bool out_y = sy < 0 || sy >= ny;
        double value;
        if (!out_x && !out_y) {
          value = fstar[q * n + static_cast<std::size_t>(sy) * nx + sx];
        } else {
          const Edge ey = sy < 0 ? Edge::Bottom : Edge::Top;
          const Edge ex = sx < 0 ? Edge::Left : Edge::Right;
          if (out_y && is_local(spec.edge(ey).kind)) {
            value = local_rule(ey, q, x, y);
          } else if (out_x && is_local(spec.edge(ex).kind)) {
            value = local_rule(ex, q, x, y);
          } else {
            const int gx = out_x ? resolve(sx, nx, spec.edge(ex).kind) : sx;
            const int gy = out_y ? resolve(sy, ny, spec.edge(ey).kind) : sy;
            value = fstar[q * n + static_cast<std::size_t>(gy) * nx + gx];
          }
        }
        out[q * n + i] = value;
      }
    }
  }
}

}  // namespace elbm
