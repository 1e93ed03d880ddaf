#include "elbm/diagnostics.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace elbm {

double misfit(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("misfit: field sizes differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (den == 0.0) throw std::invalid_argument("misfit: reference field is identically zero");
  return std::sqrt(num / den);
}

double convergence_order(std::span<const double> errors, std::span<const double> sizes) {
  if (errors.size() != sizes.size()) throw std::invalid_argument("errors and sizes differ");
  if (sizes.size() < 3) throw std::invalid_argument("convergence order needs at least 3 grids");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(errors[i] > 0.0) || !(sizes[i] > 0.0))
      throw std::invalid_argument("errors and sizes must be positive");
    if (i && !(sizes[i] > sizes[i - 1]))
      throw std::invalid_argument("grid sizes must be strictly increasing");
  }
  const double n = static_cast<double>(sizes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = std::log(sizes[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Seismogram make_seismogram(int x, int y, int nx, int ny) {
  if (x < 0 || y < 0 || x >= nx || y >= ny)
    throw std::out_of_range("station (" + std::to_string(x) + ", " + std::to_string(y) +
                            ") outside the grid");
  Seismogram s;
  s.station_x = x;
  s.station_y = y;
  return s;
}

void record_seismogram(Seismogram& seis, const FieldState& state) {
  if (seis.station_x >= state.nx || seis.station_y >= state.ny)
    throw std::out_of_range("station outside the grid");
  const std::size_t i = state.index(seis.station_x, seis.station_y);
  seis.jx.push_back(state.jx[i]);
  seis.jy.push_back(state.jy[i]);
}

void write_seismogram_csv(const Seismogram& seis, std::ostream& os) {
  os << "step,jx,jy\n" << std::setprecision(17);
  for (std::size_t t = 0; t < seis.jx.size(); ++t)
    os << t << ',' << seis.jx[t] << ',' << seis.jy[t] << '\n';
}

namespace {

double parabolic_peak(double y0, double y1, double y2) {
  const double den = y0 - 2.0 * y1 + y2;
  return den == 0.0 ? 0.0 : 0.5 * (y0 - y2) / den;
}

}  // namespace

double correlation_lag(std::span<const double> a, std::span<const double> b, int min_lag,
                       int max_lag) {
  if (min_lag < 0 || max_lag - min_lag < 2) throw std::invalid_argument("bad lag range");
  std::vector<double> cc;
  for (int lag = min_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < b.size() && t < a.size(); ++t) acc += a[t] * b[t + lag];
    cc.push_back(acc);
  }
  const auto best = std::max_element(cc.begin(), cc.end()) - cc.begin();
  if (best == 0 || best == static_cast<long>(cc.size()) - 1 || cc[best] <= 0.0)
    throw std::runtime_error("no arrival detected: correlation has no interior peak");
  return min_lag + best + parabolic_peak(cc[best - 1], cc[best], cc[best + 1]);
}

double pair_speed(const StationPair& pair) {
  auto gated = [](const std::vector<double>& s, long gate) {
    std::vector<double> out(s);
    for (std::size_t t = static_cast<std::size_t>(std::max(gate, 0L)); t < out.size(); ++t)
      out[t] = 0.0;
    return out;
  };
  const auto a = gated(pair.near, pair.gate_near);
  const auto b = gated(pair.far, pair.gate_far);
  const int max_lag = static_cast<int>(b.size()) / 2;
  const double delay = correlation_lag(a, b, 0, max_lag);
  if (!(delay > 0.0)) throw std::runtime_error("non-positive travel time between stations");
  return pair.separation / delay;
}

SpeedRatio measure_speed_ratio(std::span<const StationPair> p_pairs,
                               std::span<const StationPair> s_pairs) {
  if (p_pairs.empty() || s_pairs.empty())
    throw std::invalid_argument("need at least one station pair per wave type");
  SpeedRatio r;
  for (const auto& p : p_pairs) r.vP += pair_speed(p);
  for (const auto& s : s_pairs) r.vS += pair_speed(s);
  r.vP /= static_cast<double>(p_pairs.size());
  r.vS /= static_cast<double>(s_pairs.size());
  r.ratio = r.vP / r.vS;
  return r;
}

double rayleigh_speed(const std::vector<std::vector<double>>& surface,
                      const RayleighSpeedOptions& opt) {
  if (!(opt.v_min > 0.0) || !(opt.v_max > opt.v_min) || opt.turns < 1)
    throw std::invalid_argument("rayleigh_speed: bad speed bounds or turn count");
  if (opt.reference_step < 0 || opt.reference_step >= static_cast<long>(surface.size()))
    throw std::invalid_argument("rayleigh_speed: reference step outside the record");
  const auto& ref = surface[opt.reference_step];
  const int width = static_cast<int>(ref.size());

  int peak = 0;
  for (int x = 1; x < width; ++x)
    if (std::abs(ref[x]) > std::abs(ref[peak])) peak = x;
  if (ref[peak] == 0.0) throw std::runtime_error("rayleigh_speed: no packet at reference step");

  std::vector<double> packet(width, 0.0);
  for (int x = 0; x < width; ++x) {
    int d = ((x - peak) % width + width) % width;
    if (d > width / 2) d -= width;
    if (std::abs(d) <= opt.gate_half_width) packet[x] = ref[x];
  }

  const double distance = static_cast<double>(opt.turns) * width;
  const long lo = static_cast<long>(std::floor(distance / opt.v_max));
  const long hi = static_cast<long>(std::ceil(distance / opt.v_min));
  std::vector<double> cc;
  for (long d = lo; d <= hi && opt.reference_step + d < static_cast<long>(surface.size()); ++d) {
    const auto& cur = surface[opt.reference_step + d];
    double acc = 0.0;
    for (int x = 0; x < width; ++x) acc += packet[x] * cur[x];
    cc.push_back(acc);
  }
  if (cc.size() < 3) throw std::runtime_error("rayleigh_speed: record too short for the search");
  std::size_t best = 1;
  for (std::size_t i = 1; i + 1 < cc.size(); ++i)
    if (cc[i] > cc[best]) best = i;
  if (!(cc[best] > cc[best - 1] && cc[best] >= cc[best + 1]) || cc[best] <= 0.0)
    throw std::runtime_error("rayleigh_speed: packet lost (no interior correlation peak)");
  const double delay = lo + best + parabolic_peak(cc[best - 1], cc[best], cc[best + 1]);
  return distance / delay;
}

double rayleigh_speed_ratio(double vS, double vP) {
  if (!(vS > 0.0) || !(vP > vS)) throw std::invalid_argument("need 0 < vS < vP");
  const double r2 = (vS * vS) / (vP * vP);
  auto f = [r2](double xi) {
    const double x2 = xi * xi;
    return (2.0 - x2) * (2.0 - x2) - 4.0 * std::sqrt(1.0 - x2) * std::sqrt(1.0 - x2 * r2);
  };
  double lo = 1e-3, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Two-parameter least-squares problem with analytic Jacobian.
template <typename Model>
struct CurveFunctor : Eigen::DenseFunctor<double> {
  CurveFunctor(std::span<const double> z, std::span<const double> p, Model model)
      : Eigen::DenseFunctor<double>(2, static_cast<int>(z.size())), z_(z), p_(p), model_(model) {}

  int operator()(const InputType& x, ValueType& fvec) const {
    for (std::size_t i = 0; i < z_.size(); ++i) {
      double v, da, ds;
      model_(z_[i], x(0), x(1), v, da, ds);
      fvec(static_cast<Eigen::Index>(i)) = v - p_[i];
    }
    return 0;
  }
  int df(const InputType& x, JacobianType& fjac) const {
    for (std::size_t i = 0; i < z_.size(); ++i) {
      double v, da, ds;
      model_(z_[i], x(0), x(1), v, da, ds);
      fjac(static_cast<Eigen::Index>(i), 0) = da;
      fjac(static_cast<Eigen::Index>(i), 1) = ds;
    }
    return 0;
  }

  std::span<const double> z_, p_;
  Model model_;
};

template <typename Model>
FitResult least_squares(std::span<const double> z, std::span<const double> p, Model model,
                        double a0, double s0, FitModel kind) {
  CurveFunctor<Model> functor(z, p, model);
  Eigen::VectorXd x(2);
  x << a0, s0;
  Eigen::LevenbergMarquardt<CurveFunctor<Model>> lm(functor);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setMaxfev(2000);
  const auto status = lm.minimize(x);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
      !std::isfinite(x(0)) || !std::isfinite(x(1)))
    throw std::runtime_error("least-squares fit did not converge");
  Eigen::VectorXd r(static_cast<Eigen::Index>(z.size()));
  functor(x, r);
  FitResult out;
  out.model = kind;
  out.amplitude = x(0);
  out.scale = x(1);
  out.residual = r.squaredNorm();
  return out;
}

void check_profile(std::span<const double> z, std::span<const double> p) {
  if (z.size() != p.size()) throw std::invalid_argument("depth and profile sizes differ");
  if (z.size() < 10) throw std::invalid_argument("profile needs at least 10 samples");
}

}  // namespace

FitResult fit_exponential(std::span<const double> depth, std::span<const double> profile) {
  check_profile(depth, profile);
  for (double v : profile)
    if (!(v > 0.0)) throw std::invalid_argument("exponential fit needs positive amplitudes");

  // Initial guess from log-linear regression.
  const double n = static_cast<double>(depth.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const double y = std::log(profile[i]);
    sx += depth[i];
    sy += y;
    sxx += depth[i] * depth[i];
    sxy += depth[i] * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  if (!(slope < -1e-12)) {
    FitResult flat;
    flat.model = FitModel::Exponential;
    flat.amplitude = std::exp(intercept);
    flat.scale = std::numeric_limits<double>::infinity();
    for (double v : profile) flat.residual += (v - flat.amplitude) * (v - flat.amplitude);
    flat.degenerate = true;
    return flat;
  }
  auto model = [](double z, double a, double d, double& v, double& da, double& dd) {
    const double e = std::exp(-z / d);
    v = a * e;
    da = e;
    dd = a * e * z / (d * d);
  };
  return least_squares(depth, profile, model, std::exp(intercept), -1.0 / slope,
                       FitModel::Exponential);
}

namespace {

struct DepthCoefficients {
  double alpha_s, alpha_p;
};

DepthCoefficients depth_coefficients(double vR, double vS, double vP) {
  if (!(vR > 0.0) || !(vR < vS) || !(vS < vP))
    throw std::invalid_argument("Rayleigh depth model needs 0 < vR < vS < vP");
  return {std::sqrt(1.0 - vR * vR / (vS * vS)), std::sqrt(1.0 - vR * vR / (vP * vP))};
}

// Signed shape and its derivative with respect to the wave number.
void shape_and_dk(double z, double k, const DepthCoefficients& c, RayleighDepthForm form,
                  double& g, double& dg_dk) {
  const double ep = std::exp(-k * c.alpha_p * z);
  const double es = std::exp(-k * c.alpha_s * z);
  if (form == RayleighDepthForm::Potential) {
    const double m = 2.0 / (1.0 + c.alpha_s * c.alpha_s);
    g = c.alpha_p * (ep - m * es);
    dg_dk = c.alpha_p * (-c.alpha_p * z * ep + m * c.alpha_s * z * es);
  } else {
    const double m = 2.0 / (1.0 + c.alpha_p * c.alpha_p);
    g = -c.alpha_s * (es - m * ep);
    dg_dk = -c.alpha_s * (-c.alpha_s * z * es + m * c.alpha_p * z * ep);
  }
}

}  // namespace

double rayleigh_depth_shape(double z, double wavelength, double vR, double vS, double vP,
                            RayleighDepthForm form) {
  const auto c = depth_coefficients(vR, vS, vP);
  double g, dg;
  shape_and_dk(z, 2.0 * std::numbers::pi / wavelength, c, form, g, dg);
  return std::abs(g);
}

FitResult fit_rayleigh_analytical(std::span<const double> depth, std::span<const double> profile,
                                  double vR, double vS, double vP, double wavelength_guess,
                                  RayleighDepthForm form) {
  check_profile(depth, profile);
  if (!(wavelength_guess > 0.0)) throw std::invalid_argument("wavelength guess must be positive");
  const auto c = depth_coefficients(vR, vS, vP);
  auto model = [c, form](double z, double a, double lambda, double& v, double& da, double& dl) {
    const double k = 2.0 * std::numbers::pi / lambda;
    double g, dg_dk;
    shape_and_dk(z, k, c, form, g, dg_dk);
    const double sign = g >= 0.0 ? 1.0 : -1.0;
    v = a * std::abs(g);
    da = std::abs(g);
    dl = a * sign * dg_dk * (-k / lambda);
  };
  // Amplitude that best matches the initial wavelength.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    double v, da, dl;
    model(depth[i], 1.0, wavelength_guess, v, da, dl);
    num += v * profile[i];
    den += v * v;
  }
  return least_squares(depth, profile, model, den > 0.0 ? num / den : 1.0, wavelength_guess,
                       FitModel::RayleighAnalytical);
}

std::vector<double> depth_profile(const std::vector<std::vector<double>>& series, long t_begin,
                                  long t_end) {
  if (t_begin < 0 || t_end < t_begin || t_end >= static_cast<long>(series.size()))
    throw std::invalid_argument("depth_profile: window outside the record");
  std::vector<double> out(series[t_begin].size(), 0.0);
  for (long t = t_begin; t <= t_end; ++t)
    for (std::size_t d = 0; d < out.size(); ++d)
      out[d] = std::max(out[d], std::abs(series[t][d]));
  return out;
}

double crest_spacing(std::span<const double> profile, double threshold) {
  if (profile.size() < 3) return 0.0;
  double peak = 0.0;
  for (double v : profile) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  struct Extremum {
    std::size_t x;
    int sign;
  };
  std::vector<Extremum> ext;
  for (std::size_t x = 1; x + 1 < profile.size(); ++x) {
    const double v = profile[x];
    if (std::abs(v) < threshold * peak) continue;
    if (v > profile[x - 1] && v > profile[x + 1] && v > 0) ext.push_back({x, 1});
    if (v < profile[x - 1] && v < profile[x + 1] && v < 0) ext.push_back({x, -1});
  }
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 1; i < ext.size(); ++i) {
    if (ext[i].sign == ext[i - 1].sign) continue;
    sum += static_cast<double>(ext[i].x - ext[i - 1].x);
    ++count;
  }
  return count ? 2.0 * sum / count : 0.0;
}

double fit_decay_rate(std::span<const double> series) {
  std::vector<double> t, y;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    const double a = std::abs(series[i]);
    if (a > 0.0 && a >= std::abs(series[i - 1]) && a > std::abs(series[i + 1])) {
      t.push_back(static_cast<double>(i));
      y.push_back(std::log(a));
    }
  }
  if (t.size() < 3) throw std::runtime_error("decay fit needs at least three extrema");
  const double n = static_cast<double>(t.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sx += t[i];
    sy += y[i];
    sxx += t[i] * t[i];
    sxy += t[i] * y[i];
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace elbm
