#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "elbm/lattice.hpp"

using namespace elbm;

namespace {

// Weighted moment sum_i w_i cx^a cy^b computed straight from the tables.
double moment(const LatticeD2Q9& l, int a, int b) {
  double s = 0.0;
  for (int i = 0; i < LatticeD2Q9::Q; ++i)
    s += l.weights[i] * std::pow(l.velocities[i][0], a) * std::pow(l.velocities[i][1], b);
  return s;
}

}  // namespace

TEST(Lattice, WeightedMomentsMatchHandValues) {
  // Axis links contribute 2/9, diagonals 4/36.
  EXPECT_NEAR(moment(kD2Q9, 0, 0), 1.0, 1e-15);
  EXPECT_NEAR(moment(kD2Q9, 2, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(moment(kD2Q9, 0, 2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(moment(kD2Q9, 1, 1), 0.0, 1e-15);
  EXPECT_NEAR(moment(kD2Q9, 4, 0), 1.0 / 3.0, 1e-15);  // 3 b^4
  EXPECT_NEAR(moment(kD2Q9, 2, 2), 1.0 / 9.0, 1e-15);  // b^4
  EXPECT_NEAR(moment(kD2Q9, 3, 1), 0.0, 1e-15);
  EXPECT_NEAR(moment(kD2Q9, 1, 0), 0.0, 1e-15);
  EXPECT_NEAR(moment(kD2Q9, 3, 0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(kD2Q9.b2, 1.0 / 3.0);
}

TEST(Lattice, CanonicalSetIsIsotropicToRoundOff) {
  const auto r = check_isotropy(kD2Q9);
  for (double v : r.residual) EXPECT_LE(v, 1e-15);
  EXPECT_NEAR(r.b2, 1.0 / 3.0, 1e-16);
}

TEST(Lattice, EqualWeightsBreakFourthOrderOnly) {
  LatticeD2Q9 l = kD2Q9;
  l.weights.fill(1.0 / 9.0);
  const auto r = check_isotropy(l);
  EXPECT_LE(r.residual[0], 1e-15);
  EXPECT_LE(r.residual[1], 1e-15);
  EXPECT_GT(r.residual[2], 1e-3);
}

TEST(Lattice, OppositeIsSelfInverseNegation) {
  int fixed = 0;
  std::set<int> image;
  for (int i = 0; i < 9; ++i) {
    const int o = opposite_index(i);
    image.insert(o);
    EXPECT_EQ(opposite_index(o), i);
    EXPECT_EQ(kD2Q9.velocities[o][0], -kD2Q9.velocities[i][0]);
    EXPECT_EQ(kD2Q9.velocities[o][1], -kD2Q9.velocities[i][1]);
    EXPECT_DOUBLE_EQ(kD2Q9.weights[o], kD2Q9.weights[i]);
    if (o == i) ++fixed;
  }
  EXPECT_EQ(image.size(), 9u);
  EXPECT_EQ(fixed, 1);
  EXPECT_EQ(opposite_index(0), 0);
  EXPECT_EQ(opposite_index(1), 3);
  EXPECT_EQ(opposite_index(5), 7);
}

TEST(Lattice, OppositeRejectsBadIndex) {
  EXPECT_THROW(opposite_index(9), std::out_of_range);
  EXPECT_THROW(opposite_index(-1), std::out_of_range);
}

TEST(Lattice, ShorthandTablesAgree) {
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(d2q9::cx[i], kD2Q9.velocities[i][0]);
    EXPECT_EQ(d2q9::cy[i], kD2Q9.velocities[i][1]);
  }
}
