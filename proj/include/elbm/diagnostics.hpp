#ifndef ELBM_DIAGNOSTICS_HPP_
#define ELBM_DIAGNOSTICS_HPP_

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "elbm/field_state.hpp"

namespace elbm {

/// Relative L2 error sqrt(sum (a-b)^2 / sum b^2). Throws std::invalid_argument
/// on size mismatch or an all-zero reference.
double misfit(std::span<const double> a, std::span<const double> b);

/// Least-squares slope of log(error) against log(N). Needs >= 3 strictly
/// increasing sizes and positive errors.
double convergence_order(std::span<const double> errors, std::span<const double> sizes);

struct Seismogram {
  int station_x = 0;
  int station_y = 0;
  std::vector<double> jx;
  std::vector<double> jy;
};

/// Throws std::out_of_range if the station lies outside the grid.
Seismogram make_seismogram(int x, int y, int nx, int ny);
void record_seismogram(Seismogram& seis, const FieldState& state);
/// Header "step,jx,jy".
void write_seismogram_csv(const Seismogram& seis, std::ostream& os);

/// Lag L in [min_lag, max_lag] maximizing sum_t a[t] b[t+L], refined by a
/// parabola through the peak. Throws std::runtime_error when the maximum sits
/// on the search boundary (no interior peak).
double correlation_lag(std::span<const double> a, std::span<const double> b, int min_lag,
                       int max_lag);

/// Two stations on one ray from the source. Samples at or after each gate
/// step are ignored (periodic images may arrive there).
struct StationPair {
  std::vector<double> near;
  std::vector<double> far;
  double separation = 0.0;
  long gate_near = 0;
  long gate_far = 0;
};

/// Apparent speed separation / delay, with the delay from the correlation lag.
double pair_speed(const StationPair& pair);

struct SpeedRatio {
  double vP = 0.0;
  double vS = 0.0;
  double ratio = 0.0;
};

/// Mean P speed over p_pairs, mean S speed over s_pairs.
SpeedRatio measure_speed_ratio(std::span<const StationPair> p_pairs,
                               std::span<const StationPair> s_pairs);

struct RayleighSpeedOptions {
  long reference_step = 600;
  int turns = 2;
  int gate_half_width = 40;  // nodes kept around the packet maximum
  double v_min = 0.0;        // search bounds on the speed
  double v_max = 0.0;
};

/// Surface-wave speed on a periodic strip of width W from surface profiles
/// profile[step][x]: the gated packet at the reference step is correlated with
/// later profiles at zero spatial shift; the best travel time Dt of `turns`
/// laps gives v = turns * W / Dt. Throws std::runtime_error if the packet
/// cannot be tracked.
double rayleigh_speed(const std::vector<std::vector<double>>& surface,
                      const RayleighSpeedOptions& options);

/// Rayleigh-to-shear speed ratio: root in (0, 1) of the Rayleigh equation.
double rayleigh_speed_ratio(double vS, double vP);

enum class FitModel { Exponential, RayleighAnalytical };

struct FitResult {
  FitModel model = FitModel::Exponential;
  double amplitude = 0.0;
  double scale = 0.0;  // decay length d, or wavelength
  double residual = 0.0;
  bool degenerate = false;
};

/// profile ~ A exp(-z / d). Needs >= 10 positive samples.
FitResult fit_exponential(std::span<const double> depth, std::span<const double> profile);

enum class RayleighDepthForm {
  /// Vertical motion derived from the P and S potentials:
  /// alpha_P [exp(-k alpha_P z) - 2/(1+alpha_S^2) exp(-k alpha_S z)].
  Potential,
  /// Variant with the P and S attenuations exchanged:
  /// -alpha_S [exp(-k alpha_S z) - 2/(1+alpha_P^2) exp(-k alpha_P z)].
  Exchanged,
};

/// |shape| of the vertical Rayleigh amplitude at depth z for wavelength lambda.
double rayleigh_depth_shape(double z, double wavelength, double vR, double vS, double vP,
                            RayleighDepthForm form = RayleighDepthForm::Potential);

/// profile ~ amplitude * |shape(z; wavelength)|, starting from wavelength_guess.
/// Throws std::invalid_argument unless vR < vS < vP.
FitResult fit_rayleigh_analytical(std::span<const double> depth, std::span<const double> profile,
                                  double vR, double vS, double vP, double wavelength_guess,
                                  RayleighDepthForm form = RayleighDepthForm::Potential);

/// Max |value| per depth over steps [t_begin, t_end] of series[step][depth].
std::vector<double> depth_profile(const std::vector<std::vector<double>>& series, long t_begin,
                                  long t_end);

/// Wavelength from a surface profile: twice the mean spacing of adjacent
/// alternating-sign extrema whose magnitude exceeds threshold * max |profile|.
/// Returns 0 when fewer than two such extrema exist.
double crest_spacing(std::span<const double> profile, double threshold = 0.3);

/// Exponential decay rate of an oscillating series from a log-linear fit to
/// the magnitudes of its local extrema. Positive for decaying signals.
double fit_decay_rate(std::span<const double> series);

}  // namespace elbm

#endif  // ELBM_DIAGNOSTICS_HPP_
