#pragma once

// CSV dataset loading and process serialization. All doubles are written with
// 17 significant digits (shortest round-trip), so save/load is bit-exact.

#include <string>
#include <vector>

#include "scqr/dataset.hpp"
#include "scqr/process.hpp"

namespace scqr {

struct LoadedDataset {
  CensoredDataset data;
  std::vector<std::string> covariate_names;      // in file order, excluding intercept
  std::vector<std::string> constant_columns;     // flagged for a caller-side warning
};

// CSV with a header row; y_col and status_col name the response and the 0/1
// event indicator, every other column must be numeric and becomes a covariate.
// Throws DataError on missing file, unknown columns, non-numeric cells, status
// values outside {0,1}, or an empty table.
LoadedDataset load_dataset(const std::string& path, const std::string& y_col,
                           const std::string& status_col);

void save_dataset_csv(const std::string& path, const CensoredDataset& data,
                      const std::vector<std::string>& covariate_names = {});

// rows = grid points; columns = tau, then the p coefficients
void save_process_csv(const std::string& path, const CoefficientProcess& proc);

// {"taus": [...], "betas": [[...], ...]}
std::string process_to_json(const CoefficientProcess& proc);
void save_process_json(const std::string& path, const CoefficientProcess& proc);
CoefficientProcess load_process_json(const std::string& path);

// write-to-temp-then-rename, so readers never observe a partial file
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace scqr
