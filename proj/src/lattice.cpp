#include "elbm/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace elbm {
namespace {

// Number of ways to split the index tuple into pairs of equal indices
// (the component of the fully symmetric delta product of that order).
int pairings(std::vector<int> idx) {
  if (idx.empty()) return 1;
  const int first = idx.front();
  idx.erase(idx.begin());
  int total = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] != first) continue;
    std::vector<int> rest = idx;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    total += pairings(rest);
  }
  return total;
}

double moment_residual(const LatticeD2Q9& lat, int order, double b2) {
  double worst = 0.0;
  const int combos = 1 << order;
  for (int mask = 0; mask < combos; ++mask) {
    std::vector<int> idx(order);
    for (int a = 0; a < order; ++a) idx[a] = (mask >> a) & 1;

    double sum = 0.0;
    for (int i = 0; i < LatticeD2Q9::Q; ++i) {
      double prod = lat.weights[i];
      for (int a : idx) prod *= lat.velocities[i][a];
      sum += prod;
    }

    double target = pairings(idx) * std::pow(b2, order / 2);
    if (order == 6) {
      bool all_equal = true;
      for (int a : idx) all_equal = all_equal && (a == idx.front());
      if (all_equal) target -= 6.0 * std::pow(b2, 3);
    }
    worst = std::max(worst, std::abs(sum - target));
  }
  return worst;
}

}  // namespace

IsotropyReport check_isotropy(const LatticeD2Q9& lattice) {
  IsotropyReport report;
  double b2 = 0.0;
  for (int i = 0; i < LatticeD2Q9::Q; ++i) {
    const int c = lattice.velocities[i][0];
    b2 += lattice.weights[i] * c * c;
  }
  report.b2 = b2;
  const int orders[] = {0, 2, 4, 6};
  for (int k = 0; k < 4; ++k) report.residual[k] = moment_residual(lattice, orders[k], b2);
  return report;
}

int opposite_index(int i) {
  if (i < 0 || i >= LatticeD2Q9::Q)
    throw std::out_of_range("direction index " + std::to_string(i) + " outside [0, 8]");
  return kD2Q9.opposite[i];
}

}  // namespace elbm
