#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "elbm/sources.hpp"

using namespace elbm;
using std::numbers::pi;

namespace {

// Independent closed form: (1 - 2 a) exp(-a), a = (pi (t - t0) / T)^2.
double ricker_ref(double t, double T, double t0) {
  const double a = std::pow(pi * (t - t0) / T, 2);
  return (1.0 - 2.0 * a) * std::exp(-a);
}

SourceSpec centred() {
  SourceSpec s;
  s.center_x = 32;
  s.center_y = 32;
  return s;
}

}  // namespace

TEST(Ricker, PeakAndZeroCrossings) {
  EXPECT_DOUBLE_EQ(ricker(20.0, 20.0, 20.0), 1.0);
  const double dz = 20.0 / (pi * std::sqrt(2.0));
  EXPECT_NEAR(ricker(20.0 + dz, 20.0, 20.0), 0.0, 1e-14);
  EXPECT_NEAR(ricker(20.0 - dz, 20.0, 20.0), 0.0, 1e-14);
  for (double t = 0; t < 80; t += 0.37) EXPECT_NEAR(ricker(t, 20, 20), ricker_ref(t, 20, 20), 1e-14);
}

TEST(Ricker, ZeroMean) {
  // Simpson over +-10 periods.
  const double T = 20, t0 = 0;
  const int n = 20000;
  const double a = -200, b = 200, h = (b - a) / n;
  double s = ricker(a, T, t0) + ricker(b, T, t0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * ricker(a + i * h, T, t0);
  EXPECT_NEAR(s * h / 3.0, 0.0, 1e-6);
}

TEST(Ricker, DerivativeMatchesCentralDifferences) {
  const double h = 1e-3, T = 20, t0 = 20;
  EXPECT_DOUBLE_EQ(ricker_dt(t0, T, t0), 0.0);
  for (double t = 0; t <= 4 * T; t += 0.25) {
    const double fd = (ricker(t + h, T, t0) - ricker(t - h, T, t0)) / (2 * h);
    EXPECT_NEAR(ricker_dt(t, T, t0), fd, 1e-6) << "t=" << t;
  }
}

TEST(Force, PeakEqualsAmplitudeTimesDirection) {
  auto s = centred();
  s.dir_x = 0.6;
  s.dir_y = 0.8;
  const auto f = eval_force(s.t0, s, 64, 64);
  const std::size_t c = 32 * 64 + 32;
  EXPECT_NEAR(f.x[c], s.amplitude * 0.6, 1e-18);
  EXPECT_NEAR(f.y[c], s.amplitude * 0.8, 1e-18);
}

TEST(Force, GaussianOneSigmaFalloff) {
  const auto s = centred();
  const auto g = gaussian_profile(s, 64, 64);
  const double peak = g[32 * 64 + 32];
  EXPECT_NEAR(g[32 * 64 + 36] / peak, std::exp(-0.5), 1e-14);
  EXPECT_NEAR(g[28 * 64 + 32] / peak, std::exp(-0.5), 1e-14);
}

TEST(Force, TailIsNegligible) {
  const auto s = centred();
  auto total = [&](double t) {
    const auto f = eval_force(t, s, 64, 64);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.x.size(); ++i) sum += std::hypot(f.x[i], f.y[i]);
    return sum;
  };
  const double peak = total(s.t0);
  EXPECT_LT(total(s.t0 + 3.2 * s.period), 1e-4 * peak);
  EXPECT_LT(total(s.t0 - 3.2 * s.period), 1e-4 * peak);
}

TEST(Force, TimeDerivativeVanishesAtPeakAndIsOdd) {
  const auto s = centred();
  const auto d0 = eval_force_dt(s.t0, s, 64, 64);
  for (double v : d0.x) EXPECT_EQ(v, 0.0);
  const auto a = eval_force_dt(s.t0 + 3.3, s, 64, 64);
  const auto b = eval_force_dt(s.t0 - 3.3, s, 64, 64);
  for (std::size_t i = 0; i < a.x.size(); ++i) EXPECT_NEAR(a.x[i], -b.x[i], 1e-18);
}

TEST(Force, SpecValidation) {
  auto s = centred();
  EXPECT_TRUE(source_violations(s).empty());
  s.sigma = 0;
  s.period = -1;
  EXPECT_EQ(source_violations(s).size(), 2u);
}
