#ifndef ELBM_LATTICE_HPP_
#define ELBM_LATTICE_HPP_

#include <array>

namespace elbm {

/// D2Q9 velocity set in lattice units (dx = dt = 1).
///
/// Ordering: 0 is rest, 1-4 are the axis directions (+x, +y, -x, -y) and
/// 5-8 the diagonals (+x+y, -x+y, -x-y, +x-y). Snapshot layouts and the
/// stability matrix depend on this order.
struct LatticeD2Q9 {
  static constexpr int Q = 9;

  std::array<std::array<int, 2>, Q> velocities;
  std::array<double, Q> weights;
  std::array<int, Q> opposite;
  double b2;  // squared lattice sound speed
};

inline constexpr LatticeD2Q9 kD2Q9{
    {{{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}}},
    {4.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 36.0, 1.0 / 36.0,
     1.0 / 36.0, 1.0 / 36.0},
    {0, 3, 4, 1, 2, 7, 8, 5, 6},
    1.0 / 3.0};

namespace d2q9 {
inline constexpr int Q = LatticeD2Q9::Q;
inline constexpr std::array<int, Q> cx{0, 1, 0, -1, 0, 1, -1, -1, 1};
inline constexpr std::array<int, Q> cy{0, 0, 1, 0, -1, 1, 1, -1, -1};
inline constexpr std::array<double, Q> w = kD2Q9.weights;
inline constexpr std::array<int, Q> opp = kD2Q9.opposite;
inline constexpr double b2 = kD2Q9.b2;
inline constexpr double b4 = b2 * b2;
}  // namespace d2q9

/// Max absolute deviation of the weighted velocity moments from their
/// isotropic form, for tensor orders 0, 2, 4 and 6.
///
/// The reference sound speed is taken from the lattice's own second moment
/// (sum of w c_x^2), so order 2 measures isotropy rather than the value of b^2.
/// The sixth-order target includes the D2Q9 deficit -6 b^6 on the all-equal
/// index component.
struct IsotropyReport {
  std::array<double, 4> residual{};  // orders 0, 2, 4, 6
  double b2 = 0.0;
};

IsotropyReport check_isotropy(const LatticeD2Q9& lattice);

/// Throws std::out_of_range for i outside [0, 8].
int opposite_index(int i);

}  // namespace elbm

#endif  // ELBM_LATTICE_HPP_
