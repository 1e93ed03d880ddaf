#ifndef ELBM_ELASTIC_CORE_HPP_
#define ELBM_ELASTIC_CORE_HPP_

#include <array>
#include <span>
#include <vector>

#include "elbm/boundaries.hpp"
#include "elbm/field_state.hpp"
#include "elbm/lattice.hpp"
#include "elbm/material.hpp"
#include "elbm/sources.hpp"

namespace elbm {

using Populations = std::array<double, LatticeD2Q9::Q>;

/// Centered difference in the interior; periodic axes wrap, other edges use a
/// one-sided first-order difference.
void density_gradient(std::span<const double> rho, int nx, int ny, bool periodic_x,
                      bool periodic_y, std::span<double> gx, std::span<double> gy);

/// Equilibrium for density rho, first moment (jx, jy) and the non-equilibrium
/// stress pn = P - rho b^2 I.
Populations equilibrium(double rho, double jx, double jy, double pn_xx, double pn_xy,
                        double pn_yy);

/// Lattice projection of a body force: w_i c_i . S / b^2.
Populations discrete_source(double sx, double sy);

/// BGK relaxation plus the second-order source term.
Populations collide(const Populations& f, const Populations& feq, const Populations& source,
                    double tau);

struct NodeMoments {
  double rho = 0.0;
  double jx = 0.0, jy = 0.0;
  double pxx = 0.0, pxy = 0.0, pyy = 0.0;
  double sx = 0.0, sy = 0.0;  // total source including damping
};

/// Moments of f with the half-force correction j = sum f c + S/2.
///
/// s0 is the source without damping; with damping > 0 the total source is
/// S = s0 - damping * j, which makes the correction implicit in j:
/// j = (sum f c + s0/2) / (1 + damping/2).
NodeMoments recover_macros(const Populations& f, double s0x, double s0y, double damping = 0.0);

/// fill state.f with the rest equilibrium (rho0, j = 0, P = rho0 b^2 I).
void initialize_rest(FieldState& state, double rho0);

struct SolverOptions {
  int workers = 1;
};

/// Owns a FieldState and advances it one time step at a time.
///
/// After construction and after every step() the moment arrays describe the
/// current populations at state().time_step.
class Solver {
 public:
  Solver(int nx, int ny, const MaterialParams& material, BoundarySpec boundaries,
         std::vector<SourceSpec> sources = {}, SolverOptions options = {});

  /// Collide, stream, then recover the moments of the new step. Throws
  /// DivergenceError if any node turns non-finite.
  void step();
  void run(long steps);

  /// Swap boundary kinds (and the damping field) mid-run; moments are refreshed.
  void set_boundaries(const BoundarySpec& boundaries);

  /// Recompute moments after editing populations through mutable_state().
  void refresh_macros();

  const FieldState& state() const { return state_; }
  FieldState& mutable_state() { return state_; }
  const MaterialParams& material() const { return material_; }
  const BoundarySpec& boundaries() const { return boundaries_; }
  std::span<const double> damping() const { return damping_; }

 private:
  void collide_rows(int y_begin, int y_end);

  MaterialParams material_;
  BoundarySpec boundaries_;
  std::vector<SourceSpec> sources_;
  std::vector<std::vector<double>> source_profiles_;
  SolverOptions options_;

  FieldState state_;
  std::vector<double> fstar_;
  std::vector<double> damping_;
  std::vector<double> grad_x_, grad_y_;
};

}  // namespace elbm

#endif  // ELBM_ELASTIC_CORE_HPP_
