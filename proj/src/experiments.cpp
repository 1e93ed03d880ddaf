#include "elbm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>
#include <string>

#include "elbm/elastic_core.hpp"
#include "elbm/errors.hpp"
#include "elbm/snapshot.hpp"
#include "elbm/spectral_oracle.hpp"
#include "elbm/stability.hpp"

namespace elbm {

SourceSpec bulk_source(int n, bool scale_with_grid) {
  const double s = scale_with_grid ? n / 128.0 : 1.0;
  SourceSpec src;
  src.center_x = n / 2;
  src.center_y = n / 2;
  src.sigma = 4.0 * s;
  src.period = 20.0 * s;
  src.t0 = 20.0 * s;
  return src;
}

std::vector<BulkCompareResult> bulk_compare(const MaterialParams& material, int nx, int ny,
                                            std::vector<long> steps, const SourceSpec& source,
                                            int workers) {
  std::sort(steps.begin(), steps.end());
  Solver lbm(nx, ny, material, BoundarySpec::all_periodic(), {source}, {workers});
  SpectralOracle oracle(nx, ny, material, {source});
  std::vector<BulkCompareResult> out;
  for (long s : steps) {
    if (s < lbm.state().time_step) throw std::invalid_argument("snapshot steps must be non-negative");
    lbm.run(s - lbm.state().time_step);
    oracle.run(s - oracle.time_step());
    BulkCompareResult r;
    r.step = s;
    r.oracle = oracle.fields(&r.oracle_imag);
    r.lbm = VectorField(nx, ny);
    r.lbm.x = lbm.state().jx;
    r.lbm.y = lbm.state().jy;
    r.misfit = misfit(r.lbm.x, r.oracle.x);
    out.push_back(std::move(r));
  }
  return out;
}

ConvergenceResult convergence_study(const MaterialParams& material, const std::vector<int>& sizes,
                                    bool scale_time, int workers) {
  ConvergenceResult out;
  std::vector<double> ns;
  for (int n : sizes) {
    const long steps = scale_time ? std::lround(70.0 * n / 128.0) : 70;
    const auto r = bulk_compare(material, n, n, {steps}, bulk_source(n, scale_time), workers);
    out.sizes.push_back(n);
    out.steps.push_back(steps);
    out.misfits.push_back(r.front().misfit);
    ns.push_back(n);
  }
  out.slope = convergence_order(out.misfits, ns);
  return out;
}

SpeedRatioResult speed_ratio_experiment(const MaterialParams& material, int n, int workers) {
  const SourceSpec src = bulk_source(n, false);
  const int c = n / 2;
  const int d1 = n / 8, d2 = 3 * n / 8;
  const double t0 = src.t0, period = src.period;

  // Earliest arrival from a periodic image, minus one wavelet period.
  auto gate_p = [&](int d) { return static_cast<long>(t0 + (n - d) / material.vP - period); };
  auto gate_s = [&](int d) {
    const double image = std::min((n - d) / material.vS, std::hypot(n, d) / material.vP);
    return static_cast<long>(t0 + image - period);
  };
  const long steps = std::max({gate_p(d1), gate_p(d2), gate_s(d1), gate_s(d2)}) + 1;

  struct Station {
    int x, y;
  };
  const Station stations[] = {{c + d1, c}, {c + d2, c}, {c - d1, c}, {c - d2, c},
                              {c, c + d1}, {c, c + d2}, {c, c - d1}, {c, c - d2}};
  std::vector<Seismogram> seis;
  for (auto s : stations) seis.push_back(make_seismogram(s.x, s.y, n, n));

  Solver solver(n, n, material, BoundarySpec::all_periodic(), {src}, {workers});
  for (long t = 0; t <= steps; ++t) {
    for (auto& s : seis) record_seismogram(s, solver.state());
    if (t < steps) solver.step();
  }

  auto pair = [&](int near, int far, bool p_wave) {
    StationPair sp;
    sp.near = seis[near].jx;
    sp.far = seis[far].jx;
    sp.separation = d2 - d1;
    sp.gate_near = p_wave ? gate_p(d1) : gate_s(d1);
    sp.gate_far = p_wave ? gate_p(d2) : gate_s(d2);
    return sp;
  };
  const std::vector<StationPair> p{pair(0, 1, true), pair(2, 3, true)};
  const std::vector<StationPair> s{pair(4, 5, false), pair(6, 7, false)};

  SpeedRatioResult out;
  out.measured = measure_speed_ratio(p, s);
  out.expected = material.vP / material.vS;
  out.relative_error = out.measured.ratio / out.expected - 1.0;
  return out;
}

ReflectionResult reflection_experiment(const MaterialParams& material, EdgeKind wall,
                                       const ReflectionOptions& opt, int n, int workers) {
  if (wall != EdgeKind::RigidWall && wall != EdgeKind::FreeSurface)
    throw std::invalid_argument("reflection needs a rigid or free edge");
  if (opt.probe_offset >= n - 30) throw std::invalid_argument("probe too close to the absorbing edge");

  BoundarySpec bc;
  EdgeSpec reflecting;
  reflecting.kind = wall;
  EdgeSpec absorbing;
  absorbing.kind = EdgeKind::Absorbing;

  // The rigid case reflects at the bottom edge, the free case at the top.
  const bool bottom = wall == EdgeKind::RigidWall;
  bc.bottom = bottom ? reflecting : absorbing;
  bc.top = bottom ? absorbing : reflecting;
  auto row = [&](int offset) { return bottom ? offset : n - 1 - offset; };

  SourceSpec src;
  src.center_x = n / 2;
  src.center_y = row(opt.source_offset);
  src.dir_x = 0.0;
  src.dir_y = bottom ? 1.0 : -1.0;

  // Arrival times at the probe; the wall sits half a link outside the edge row.
  const double t_direct = src.t0 + (opt.probe_offset - opt.source_offset) / material.vP;
  const double t_reflected = src.t0 + (opt.probe_offset + opt.source_offset + 1) / material.vP;
  const long steps = static_cast<long>(std::ceil(t_reflected + 2.0 * src.period));

  Solver solver(n, n, material, bc, {src}, {workers});
  ReflectionResult out;
  out.wall = wall;
  out.probe = make_seismogram(n / 2, row(opt.probe_offset), n, n);
  Seismogram edge = make_seismogram(n / 2, row(0), n, n);
  for (long t = 0; t <= steps; ++t) {
    record_seismogram(out.probe, solver.state());
    record_seismogram(edge, solver.state());
    if (t < steps) solver.step();
  }

  auto signed_peak = [&](double centre) {
    const long b = std::max(0L, static_cast<long>(centre - src.period));
    const long e = std::min(steps, static_cast<long>(centre + src.period));
    double best = 0.0;
    for (long t = b; t <= e; ++t)
      if (std::abs(out.probe.jy[t]) > std::abs(best)) best = out.probe.jy[t];
    return best;
  };
  out.direct_peak = signed_peak(t_direct);
  out.reflected_peak = signed_peak(t_reflected);
  for (double v : edge.jy) out.edge_peak = std::max(out.edge_peak, std::abs(v));
  out.sign_preserved = (out.direct_peak > 0) == (out.reflected_peak > 0);
  return out;
}

RayleighResult rayleigh_experiment(const RunConfig& cfg, int workers) {
  const MaterialParams mat = make_material(cfg.nu, cfg.tau, cfg.rho0);
  const auto& opt = cfg.rayleigh;
  const int nx = cfg.nx, ny = cfg.ny;
  if (cfg.boundary.top.kind != EdgeKind::FreeSurface)
    throw ConfigError({"rayleigh: the top edge must be a free surface"});

  BoundarySpec lateral_periodic = cfg.boundary;
  lateral_periodic.left.kind = lateral_periodic.right.kind = EdgeKind::Periodic;

  Solver solver(nx, ny, mat, cfg.boundary, {cfg.source}, {workers});
  RayleighResult out;
  std::vector<std::vector<double>> column;
  const auto& st = solver.state();
  for (long t = 0; t <= cfg.steps; ++t) {
    if (t == opt.switch_step) solver.set_boundaries(lateral_periodic);
    std::vector<double> surf(nx), col(ny);
    for (int x = 0; x < nx; ++x) surf[x] = st.jy[st.index(x, ny - 1)];
    for (int d = 0; d < ny; ++d) col[d] = st.jy[st.index(opt.profile_x, ny - 1 - d)];
    out.surface.push_back(std::move(surf));
    column.push_back(std::move(col));
    if (t < cfg.steps) solver.step();
  }

  RayleighSpeedOptions so;
  so.reference_step = opt.reference_step;
  so.turns = opt.turns;
  so.gate_half_width = opt.gate_half_width;
  so.v_min = 0.8 * mat.vS;
  so.v_max = mat.vS;
  out.speed = rayleigh_speed(out.surface, so);
  out.theory = rayleigh_speed_ratio(mat.vS, mat.vP) * mat.vS;

  out.crest_wavelength = crest_spacing(out.surface.at(opt.profile_step));
  if (!(out.crest_wavelength > 0.0))
    throw std::runtime_error("rayleigh: no crests found on the surface at the profile step");

  // One temporal period of the surface wave, centred on the profile step.
  const long half = std::lround(0.5 * out.crest_wavelength / out.speed);
  out.window_begin = std::max(0L, opt.profile_step - half);
  out.window_end = std::min(cfg.steps, opt.profile_step + half);
  const auto full = depth_profile(column, out.window_begin, out.window_end);

  const int layer = cfg.boundary.bottom.kind == EdgeKind::Absorbing ? cfg.boundary.bottom.thickness : 0;
  for (int d = 0; d < ny - layer; ++d) {
    out.depth.push_back(d + 0.5);
    out.profile.push_back(full[d]);
  }
  out.exponential = fit_exponential(out.depth, out.profile);
  out.analytical = fit_rayleigh_analytical(out.depth, out.profile, out.theory, mat.vS, mat.vP,
                                           out.crest_wavelength);
  return out;
}

double shear_decay_rate(double tau, int nx, int ny, long steps) {
  const MaterialParams mat = make_material(0.25, tau);
  Solver solver(nx, ny, mat, BoundarySpec::all_periodic());
  auto& st = solver.mutable_state();
  const double eps = 1e-4;
  std::vector<double> mode(ny);
  for (int y = 0; y < ny; ++y) mode[y] = std::sin(2.0 * std::numbers::pi * y / ny);
  const std::size_t n = st.nodes();
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      const auto feq = equilibrium(mat.rho0, eps * mode[y], 0.0, 0.0, 0.0, 0.0);
      for (int q = 0; q < LatticeD2Q9::Q; ++q) st.f[q * n + st.index(x, y)] = feq[q];
    }
  solver.refresh_macros();

  double norm = 0.0;
  for (double m : mode) norm += m * m * nx;
  std::vector<double> amplitude;
  for (long t = 0; t <= steps; ++t) {
    double a = 0.0;
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) a += solver.state().jx[st.index(x, y)] * mode[y];
    amplitude.push_back(a / norm);
    if (t < steps) solver.step();
  }
  return fit_decay_rate(amplitude);
}

namespace {

Snapshot state_snapshot(const FieldState& s) {
  Snapshot snap;
  snap.nx = s.nx;
  snap.ny = s.ny;
  snap.fields = {{"rho", s.rho}, {"jx", s.jx}, {"jy", s.jy},
                 {"pxx", s.pxx}, {"pxy", s.pxy}, {"pyy", s.pyy}};
  return snap;
}

Snapshot flux_snapshot(const VectorField& f) {
  Snapshot snap;
  snap.nx = f.nx;
  snap.ny = f.ny;
  snap.fields = {{"jx", f.x}, {"jy", f.y}};
  return snap;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw IoError("cannot write " + p.string());
  os << std::setprecision(17);
  return os;
}

std::string step_name(const char* prefix, long step) {
  return std::string(prefix) + "_step" + std::to_string(step) + ".elbm";
}

std::vector<long> snapshot_steps(const RunConfig& cfg) {
  return cfg.snapshots.empty() ? std::vector<long>{cfg.steps} : cfg.snapshots;
}

void require_periodic(const RunConfig& cfg) {
  if (!cfg.boundary.periodic_x() || !cfg.boundary.periodic_y())
    throw ConfigError({"boundary: the spectral oracle supports periodic edges only"});
}

}  // namespace

nlohmann::json run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir,
                              int workers) {
  using nlohmann::json;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const MaterialParams mat = make_material(cfg.nu, cfg.tau, cfg.rho0);
  json results;

  switch (cfg.experiment) {
    case ExperimentKind::Simulate: {
      Solver solver(cfg.nx, cfg.ny, mat, cfg.boundary, {cfg.source}, {workers});
      std::vector<Seismogram> seis;
      for (const auto& s : cfg.stations) seis.push_back(make_seismogram(s[0], s[1], cfg.nx, cfg.ny));
      auto snaps = snapshot_steps(cfg);
      json written = json::array();
      for (long t = 0; t <= cfg.steps; ++t) {
        for (auto& s : seis) record_seismogram(s, solver.state());
        if (std::find(snaps.begin(), snaps.end(), t) != snaps.end()) {
          const auto name = step_name("lbm", t);
          write_snapshot(out_dir / name, state_snapshot(solver.state()));
          written.push_back(name);
        }
        if (t < cfg.steps) solver.step();
      }
      for (const auto& s : seis) {
        auto os = open_out(out_dir / ("station_" + std::to_string(s.station_x) + "_" +
                                      std::to_string(s.station_y) + ".csv"));
        write_seismogram_csv(s, os);
      }
      double mass = 0.0;
      for (double r : solver.state().rho) mass += r;
      results = {{"steps", cfg.steps}, {"snapshots", written}, {"total_mass", mass}};
      break;
    }
    case ExperimentKind::Oracle: {
      require_periodic(cfg);
      SpectralOracle oracle(cfg.nx, cfg.ny, mat, {cfg.source});
      auto snaps = snapshot_steps(cfg);
      std::sort(snaps.begin(), snaps.end());
      json written = json::array();
      for (long s : snaps) {
        oracle.run(s - oracle.time_step());
        double imag = 0.0;
        const auto f = oracle.fields(&imag);
        const auto name = step_name("oracle", s);
        write_snapshot(out_dir / name, flux_snapshot(f));
        written.push_back({{"file", name}, {"max_imag", imag}});
      }
      results = {{"snapshots", written}};
      break;
    }
    case ExperimentKind::BulkCompare: {
      require_periodic(cfg);
      const auto rs = bulk_compare(mat, cfg.nx, cfg.ny, snapshot_steps(cfg), cfg.source, workers);
      json rows = json::array();
      for (const auto& r : rs) {
        write_snapshot(out_dir / step_name("lbm", r.step), flux_snapshot(r.lbm));
        write_snapshot(out_dir / step_name("oracle", r.step), flux_snapshot(r.oracle));
        rows.push_back({{"step", r.step}, {"misfit", r.misfit}, {"oracle_max_imag", r.oracle_imag}});
      }
      results = {{"comparisons", rows}};
      break;
    }
    case ExperimentKind::SpeedRatio: {
      if (cfg.nx != cfg.ny) throw ConfigError({"grid: speed-ratio needs a square grid"});
      const auto r = speed_ratio_experiment(mat, cfg.nx, workers);
      results = {{"vP", r.measured.vP},
                 {"vS", r.measured.vS},
                 {"ratio", r.measured.ratio},
                 {"expected_ratio", r.expected},
                 {"relative_error", r.relative_error}};
      break;
    }
    case ExperimentKind::DampingScaling: {
      const double tau2 = 2.0 * cfg.tau - 0.5;
      const double r1 = shear_decay_rate(cfg.tau, cfg.nx, cfg.ny, cfg.steps);
      const double r2 = shear_decay_rate(tau2, cfg.nx, cfg.ny, cfg.steps);
      results = {{"tau", {cfg.tau, tau2}}, {"decay_rate", {r1, r2}}, {"ratio", r1 / r2}};
      break;
    }
    case ExperimentKind::StabilityMap: {
      const auto report = stability_map(cfg.nu, cfg.tau, default_k_grid(cfg.stability.samples), workers);
      auto os = open_out(out_dir / "stability.csv");
      write_stability_csv(report, os);
      double kmin = 0.0;
      for (const auto& k : report.unstable) {
        const double m = std::hypot(k[0], k[1]);
        kmin = kmin == 0.0 ? m : std::min(kmin, m);
      }
      results = {{"wave_vectors", report.k_grid.size()},
                 {"unstable_count", report.unstable.size()},
                 {"min_unstable_k", kmin}};
      break;
    }
    case ExperimentKind::Convergence: {
      const auto r = convergence_study(mat, cfg.convergence.sizes, cfg.convergence.scale_time, workers);
      auto os = open_out(out_dir / "convergence.csv");
      os << "n,step,misfit\n";
      for (std::size_t i = 0; i < r.sizes.size(); ++i)
        os << r.sizes[i] << ',' << r.steps[i] << ',' << r.misfits[i] << '\n';
      results = {{"sizes", r.sizes}, {"misfits", r.misfits}, {"slope", r.slope}};
      break;
    }
    case ExperimentKind::Reflection: {
      json rows = json::array();
      for (auto wall : cfg.reflection.walls) {
        const auto r = reflection_experiment(mat, wall, cfg.reflection, cfg.nx, workers);
        auto os = open_out(out_dir / ("reflection_" + std::string(to_string(wall)) + ".csv"));
        write_seismogram_csv(r.probe, os);
        rows.push_back({{"wall", std::string(to_string(wall))},
                        {"direct_peak", r.direct_peak},
                        {"reflected_peak", r.reflected_peak},
                        {"sign_preserved", r.sign_preserved},
                        {"edge_peak_over_direct", r.edge_peak / std::abs(r.direct_peak)}});
      }
      results = {{"walls", rows}};
      break;
    }
    case ExperimentKind::Rayleigh: {
      const auto r = rayleigh_experiment(cfg, workers);
      auto os = open_out(out_dir / "depth_profile.csv");
      os << "depth,amplitude,exponential,analytical\n";
      const MaterialParams m = mat;
      for (std::size_t i = 0; i < r.depth.size(); ++i) {
        const double z = r.depth[i];
        os << z << ',' << r.profile[i] << ','
           << r.exponential.amplitude * std::exp(-z / r.exponential.scale) << ','
           << r.analytical.amplitude *
                  rayleigh_depth_shape(z, r.analytical.scale, r.theory, m.vS, m.vP)
           << '\n';
      }
      Snapshot surf;
      surf.nx = cfg.nx;
      surf.ny = static_cast<int>(r.surface.size());
      std::vector<double> flat;
      for (const auto& row : r.surface) flat.insert(flat.end(), row.begin(), row.end());
      surf.fields = {{"surface_jy", std::move(flat)}};
      write_snapshot(out_dir / "surface_jy.elbm", surf);
      results = {{"speed", r.speed},
                 {"theory", r.theory},
                 {"speed_relative_error", r.speed / r.theory - 1.0},
                 {"crest_wavelength", r.crest_wavelength},
                 {"window", {r.window_begin, r.window_end}},
                 {"exponential", {{"amplitude", r.exponential.amplitude},
                                  {"decay_length", r.exponential.scale},
                                  {"residual", r.exponential.residual}}},
                 {"analytical", {{"amplitude", r.analytical.amplitude},
                                 {"wavelength", r.analytical.scale},
                                 {"residual", r.analytical.residual}}}};
      break;
    }
  }

  json summary{{"config", to_json(cfg)}, {"results", results}};
  auto os = open_out(out_dir / "summary.json");
  os << summary.dump(2) << '\n';
  return summary;
}

}  // namespace elbm
