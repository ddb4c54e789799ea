#include "scqr/grid.hpp"

#include <algorithm>
#include <cmath>

namespace scqr {

QuantileGrid::QuantileGrid(std::vector<double> taus) {
  if (taus.empty()) throw DataError("quantile grid: empty");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) throw DataError("quantile grid: levels must lie in (0, 1)");
  }
  for (std::size_t k = 1; k < taus.size(); ++k) {
    if (!(taus[k] > taus[k - 1])) throw DataError("quantile grid: levels must be strictly increasing");
  }
  taus_ = Eigen::Map<const Eigen::VectorXd>(taus.data(), static_cast<Eigen::Index>(taus.size()));
  const Eigen::Index m = taus_.size() - 1;
  dH_.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    // log((1 - tau_j)/(1 - tau_{j+1})) computed through log1p for accuracy
    dH_(j) = hazard_transform(taus_(j + 1)) - hazard_transform(taus_(j));
  }
}

double QuantileGrid::max_spacing() const {
  double d = 0.0;
  for (Eigen::Index k = 1; k < taus_.size(); ++k) d = std::max(d, taus_(k) - taus_(k - 1));
  return d;
}

double QuantileGrid::min_spacing() const {
  if (taus_.size() < 2) return 0.0;
  double d = taus_(1) - taus_(0);
  for (Eigen::Index k = 2; k < taus_.size(); ++k) d = std::min(d, taus_(k) - taus_(k - 1));
  return d;
}

Eigen::Index QuantileGrid::locate(double tau) const {
  if (!(tau >= taus_(0) && tau <= taus_(taus_.size() - 1)))
    throw DataError("tau outside the fitted grid range");
  const double* begin = taus_.data();
  const double* end = begin + taus_.size();
  // first grid point strictly above tau; the interval owner sits one left
  const double* it = std::upper_bound(begin, end, tau);
  Eigen::Index k = static_cast<Eigen::Index>(it - begin) - 1;
  return k;
}

QuantileGrid make_uniform_grid(double tau_min, double tau_max, double step) {
  if (!(tau_min > 0.0 && tau_max < 1.0 && tau_min < tau_max))
    throw DataError("quantile grid: need 0 < tau_min < tau_max < 1");
  if (!(step > 0.0)) throw DataError("quantile grid: step must be positive");
  if (step > tau_max - tau_min) throw DataError("quantile grid: step exceeds the grid range");
  std::vector<double> taus;
  for (int k = 0;; ++k) {
    const double t = tau_min + k * step;
    if (t >= tau_max - 1e-12) break;
    taus.push_back(t);
  }
  taus.push_back(tau_max);
  return QuantileGrid(std::move(taus));
}

}  // namespace scqr
