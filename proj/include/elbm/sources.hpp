#ifndef ELBM_SOURCES_HPP_
#define ELBM_SOURCES_HPP_

#include <string>
#include <vector>

namespace elbm {

/// Body force that is Gaussian in space and a Ricker wavelet in time.
struct SourceSpec {
  double center_x = 0.0;  // nodes
  double center_y = 0.0;
  double sigma = 4.0;     // Gaussian standard deviation, nodes
  double dir_x = 1.0;     // unit direction of the force
  double dir_y = 0.0;
  double amplitude = 1e-3;
  double period = 20.0;   // Ricker period T, in dt
  double t0 = 20.0;       // delay of the wavelet peak, in dt
};

std::vector<std::string> source_violations(const SourceSpec& spec);

/// Peak-normalized Ricker wavelet with dominant frequency 1/T, centred at t0.
double ricker(double t, double period, double t0);

/// Closed-form time derivative of ricker().
double ricker_dt(double t, double period, double t0);

/// A 2-vector per node, row-major with x fastest (index = y * nx + x).
struct VectorField {
  int nx = 0;
  int ny = 0;
  std::vector<double> x;
  std::vector<double> y;

  VectorField() = default;
  VectorField(int nx_, int ny_)
      : nx(nx_), ny(ny_), x(static_cast<std::size_t>(nx_) * ny_), y(x.size()) {}
};

/// exp(-|x - c|^2 / (2 sigma^2)) on the grid nodes; not wrapped periodically.
std::vector<double> gaussian_profile(const SourceSpec& spec, int nx, int ny);

VectorField eval_force(double t, const SourceSpec& spec, int nx, int ny);
VectorField eval_force_dt(double t, const SourceSpec& spec, int nx, int ny);

}  // namespace elbm

#endif  // ELBM_SOURCES_HPP_
