#ifndef ELBM_EXPERIMENTS_HPP_
#define ELBM_EXPERIMENTS_HPP_

#include <filesystem>
#include <json.hpp>
#include <vector>

#include "elbm/boundaries.hpp"
#include "elbm/config.hpp"
#include "elbm/diagnostics.hpp"
#include "elbm/material.hpp"
#include "elbm/sources.hpp"

namespace elbm {

/// Centred x-directed source on an n-by-n grid, width and timing scaled by n / 128.
SourceSpec bulk_source(int n, bool scale_with_grid);

struct BulkCompareResult {
  long step = 0;
  double misfit = 0.0;       // on jx
  double oracle_imag = 0.0;  // largest discarded imaginary part
  VectorField lbm;
  VectorField oracle;
};

/// Periodic LBM run against the spectral oracle, compared at each requested step.
std::vector<BulkCompareResult> bulk_compare(const MaterialParams& material, int nx, int ny,
                                            std::vector<long> steps, const SourceSpec& source,
                                            int workers = 1);

struct ConvergenceResult {
  std::vector<int> sizes;
  std::vector<long> steps;
  std::vector<double> misfits;
  double slope = 0.0;
};

/// Misfit sweep over grid sizes; with scale_time the snapshot step is 70 n / 128.
ConvergenceResult convergence_study(const MaterialParams& material, const std::vector<int>& sizes,
                                    bool scale_time, int workers = 1);

struct SpeedRatioResult {
  SpeedRatio measured;
  double expected = 0.0;
  double relative_error = 0.0;
};

/// Travel-time speeds on an n-by-n periodic grid with an x-directed centred
/// source: jx stations at n/8 and 3n/8 along +-x (P) and +-y (S), each gated
/// before the earliest periodic-image arrival.
SpeedRatioResult speed_ratio_experiment(const MaterialParams& material, int n, int workers = 1);

struct ReflectionResult {
  EdgeKind wall = EdgeKind::RigidWall;
  double direct_peak = 0.0;     // signed jy at the probe
  double reflected_peak = 0.0;
  double edge_peak = 0.0;       // max |jy| on the row next to the wall
  bool sign_preserved = false;
  Seismogram probe;
};

/// Plane-symmetric reflection test on a 128-wide periodic strip: the opposite
/// edge absorbs, a vertical source and probe sit on the centre column.
ReflectionResult reflection_experiment(const MaterialParams& material, EdgeKind wall,
                                       const ReflectionOptions& options, int n = 128,
                                       int workers = 1);

struct RayleighResult {
  double speed = 0.0;
  double theory = 0.0;
  double crest_wavelength = 0.0;
  long window_begin = 0, window_end = 0;
  std::vector<double> depth;
  std::vector<double> profile;
  FitResult exponential;
  FitResult analytical;
  std::vector<std::vector<double>> surface;  // jy on the free row, per step
};

/// Two-phase surface-wave run: lateral edges absorb until switch_step, then
/// become periodic while the bottom layer keeps absorbing.
RayleighResult rayleigh_experiment(const RunConfig& config, int workers = 1);

/// Decay rate of a small shear standing wave (wavelength ny) on a periodic grid.
double shear_decay_rate(double tau, int nx, int ny, long steps);

/// Runs config.experiment, writing snapshots, CSVs and summary.json under
/// out_dir. Returns the summary (which embeds the resolved config).
nlohmann::json run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                              int workers = 1);

}  // namespace elbm

#endif  // ELBM_EXPERIMENTS_HPP_
