#include "scqr/dataset.hpp"

#include <cmath>

namespace scqr {

void validate(const CensoredDataset& data) {
  const Eigen::Index n = data.y.size();
  if (data.delta.size() != n || data.X.rows() != n)
    throw DataError("dataset: y, delta and X disagree on the number of rows");
  if (n < 2) throw DataError("dataset: need at least two observations");
  if (data.X.cols() < 2) throw DataError("dataset: need an intercept plus at least one covariate");
  if (!data.y.allFinite() || !data.X.allFinite())
    throw DataError("dataset: non-finite values");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = data.delta(i);
    if (d != 0.0 && d != 1.0) throw DataError("dataset: status values must be 0 or 1");
    if (data.X(i, 0) != 1.0) throw DataError("dataset: first design column must be the intercept");
  }
}

CensoredDataset subset(const CensoredDataset& data, const std::vector<Eigen::Index>& rows) {
  CensoredDataset out;
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  out.y.resize(m);
  out.delta.resize(m);
  out.X.resize(m, data.X.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    out.y(i) = data.y(rows[i]);
    out.delta(i) = data.delta(rows[i]);
    out.X.row(i) = data.X.row(rows[i]);
  }
  return out;
}

}  // namespace scqr
