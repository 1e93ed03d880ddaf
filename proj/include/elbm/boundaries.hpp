#ifndef ELBM_BOUNDARIES_HPP_
#define ELBM_BOUNDARIES_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elbm/field_state.hpp"
#include "elbm/material.hpp"

namespace elbm {

enum class EdgeKind { Periodic, RigidWall, FreeSurface, Absorbing };
enum class Edge { Left, Right, Bottom, Top };

std::string_view to_string(EdgeKind kind);
/// Accepts "periodic", "wall"/"rigid", "free", "absorbing". Throws std::invalid_argument.
EdgeKind parse_edge_kind(std::string_view text);

struct EdgeSpec {
  EdgeKind kind = EdgeKind::Periodic;
  int thickness = 30;     // absorbing layer width, nodes
  double a_max = 0.1;     // damping at the outermost node, 1/dt
  double profile = 2.0;   // ramp exponent
};

/// How the free-surface closure estimates the wall density and the
/// tangential stress from the boundary row.
enum class WallExtrapolation {
  Constant,  // boundary-row value
  Linear,    // 1.5 * boundary - 0.5 * first interior row
};

struct FreeSurfaceOptions {
  WallExtrapolation extrapolation = WallExtrapolation::Constant;
  /// Diagonal links use wall values averaged between the boundary node and
  /// its tangential neighbour along the link, i.e. at the link's wall crossing.
  bool diagonal_average = true;
};

/// Edges are named by outward normal: left (-x), right (+x), bottom (-y), top (+y).
struct BoundarySpec {
  EdgeSpec left, right, bottom, top;
  FreeSurfaceOptions free_surface;

  const EdgeSpec& edge(Edge e) const;
  EdgeSpec& edge(Edge e);
  bool periodic_x() const { return left.kind == EdgeKind::Periodic; }
  bool periodic_y() const { return bottom.kind == EdgeKind::Periodic; }

  static BoundarySpec all_periodic() { return {}; }
};

std::vector<std::string> boundary_violations(const BoundarySpec& spec, int nx, int ny);

/// Ramp A = a_max * ((thickness - d) / thickness)^profile for d in [0, thickness],
/// where d counts nodes inward from the outer edge: a_max at the edge, 0 at the
/// layer's inner interface.
double damping_profile(double d, const EdgeSpec& spec);

/// Per-node damping for every absorbing edge; overlapping layers take the max.
std::vector<double> damping_field(const BoundarySpec& spec, int nx, int ny);

/// s -= A * j, pointwise.
void apply_absorbing(std::span<double> sx, std::span<double> sy, std::span<const double> jx,
                     std::span<const double> jy, std::span<const double> damping);

/// Wall-side moments used by the anti-bounce-back rule.
struct WallState {
  double rho = 1.0;
  double pxx = 0.0;
  double pxy = 0.0;
  double pyy = 0.0;
};

/// Population entering through a rigid wall: the reversed outgoing population.
inline double bounce_back(double outgoing_post_collision) { return outgoing_post_collision; }

/// Population q entering through a free surface, given the post-collision
/// population leaving along opposite(q) and the wall-side state.
double anti_bounce_back(int q, double outgoing_post_collision, const WallState& wall);

/// Linearized traction-free wall state at boundary node (x, y) of edge e.
///
/// The normal stress balances the elastic pressure so the quiescent state is
/// a fixed point; the shear component vanishes; the tangential component is
/// extrapolated like the density. shift is the tangential offset (0 or +-1) of
/// the outgoing link, used for diagonal averaging.
WallState free_surface_wall_state(Edge e, int x, int y, int shift, const FieldState& state,
                                  const MaterialParams& mat, const BoundarySpec& spec);

/// Gather-streaming from post-collision populations fstar into out, for rows
/// [y_begin, y_end). Links leaving the grid resolve by edge rule: periodic
/// wrap, zero-gradient copy for absorbing edges, bounce-back for rigid walls
/// and anti-bounce-back for free surfaces. A link that crosses a rigid or free
/// y-edge uses that edge's rule even at corners; otherwise an x-edge local
/// rule applies.
void stream_rows(std::span<const double> fstar, std::span<double> out, const FieldState& state,
                 const MaterialParams& mat, const BoundarySpec& spec, int y_begin, int y_end);

}  // namespace elbm

#endif  // ELBM_BOUNDARIES_HPP_
