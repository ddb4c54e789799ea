#include "scqr/io.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace scqr {

namespace {

// shortest representation that parses back to the same bits
std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  out.push_back(cell);
  return out;
}

bool parse_double(const std::string& cell, double& out) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

}  // namespace

LoadedDataset load_dataset(const std::string& path, const std::string& y_col,
                           const std::string& status_col) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': empty file");
  const std::vector<std::string> header = split_csv_line(line);

  int y_idx = -1, status_idx = -1;
  std::vector<int> cov_idx;
  std::vector<std::string> cov_names;
  for (int j = 0; j < static_cast<int>(header.size()); ++j) {
    if (header[j] == y_col) {
      if (y_idx >= 0) throw DataError("'" + path + "': duplicated column '" + y_col + "'");
      y_idx = j;
    } else if (header[j] == status_col) {
      if (status_idx >= 0)
        throw DataError("'" + path + "': duplicated column '" + status_col + "'");
      status_idx = j;
    } else {
      cov_idx.push_back(j);
      cov_names.push_back(header[j]);
    }
  }
  if (y_idx < 0) throw DataError("'" + path + "': no column named '" + y_col + "'");
  if (status_idx < 0) throw DataError("'" + path + "': no column named '" + status_col + "'");

  std::vector<double> ys, deltas;
  std::vector<std::vector<double>> covs(cov_idx.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "'" << path << "' row " << row << ": expected " << header.size()
          << " cells, found " << cells.size();
      throw DataError(msg.str());
    }
    auto field = [&](int j, const std::string& name) {
      double v;
      if (!parse_double(cells[j], v)) {
        std::ostringstream msg;
        msg << "'" << path << "' row " << row << ", column '" << name
            << "': non-numeric value '" << cells[j] << "'";
        throw DataError(msg.str());
      }
      return v;
    };
    ys.push_back(field(y_idx, y_col));
    const double d = field(status_idx, status_col);
    if (d != 0.0 && d != 1.0) {
      std::ostringstream msg;
      msg << "'" << path << "' row " << row << ", column '" << status_col << "': value "
          << cells[status_idx] << " is not 0 or 1";
      throw DataError(msg.str());
    }
    deltas.push_back(d);
    for (std::size_t c = 0; c < cov_idx.size(); ++c)
      covs[c].push_back(field(cov_idx[c], cov_names[c]));
  }
  if (ys.empty()) throw DataError("'" + path + "': empty dataset");

  LoadedDataset out;
  const Eigen::Index n = static_cast<Eigen::Index>(ys.size());
  const Eigen::Index q = static_cast<Eigen::Index>(cov_idx.size());
  out.data.y = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);
  out.data.delta = Eigen::Map<const Eigen::VectorXd>(deltas.data(), n);
  out.data.X.resize(n, q + 1);
  out.data.X.col(0).setOnes();
  for (Eigen::Index c = 0; c < q; ++c)
    out.data.X.col(c + 1) = Eigen::Map<const Eigen::VectorXd>(covs[c].data(), n);
  out.covariate_names = cov_names;

  for (Eigen::Index c = 0; c < q; ++c) {
    const auto col = out.data.X.col(c + 1);
    if ((col.array() == col(0)).all()) out.constant_columns.push_back(cov_names[c]);
  }

  validate(out.data);
  return out;
}

void save_dataset_csv(const std::string& path, const CensoredDataset& data,
                      const std::vector<std::string>& covariate_names) {
  const Eigen::Index q = data.p() - 1;
  std::ostringstream os;
  os << "y,status";
  for (Eigen::Index c = 0; c < q; ++c) {
    if (static_cast<Eigen::Index>(covariate_names.size()) > c)
      os << ',' << covariate_names[c];
    else
      os << ",x" << (c + 1);
  }
  os << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    os << format_double(data.y(i)) << ',' << (data.delta(i) != 0.0 ? '1' : '0');
    for (Eigen::Index c = 0; c < q; ++c) os << ',' << format_double(data.X(i, c + 1));
    os << '\n';
  }
  atomic_write(path, os.str());
}

void save_process_csv(const std::string& path, const CoefficientProcess& proc) {
  std::ostringstream os;
  os << "tau";
  for (Eigen::Index j = 0; j < proc.p(); ++j) os << ",beta" << j;
  os << '\n';
  for (Eigen::Index k = 0; k < proc.grid.size(); ++k) {
    os << format_double(proc.grid.taus()(k));
    for (Eigen::Index j = 0; j < proc.p(); ++j) os << ',' << format_double(proc.betas(k, j));
    os << '\n';
  }
  atomic_write(path, os.str());
}

std::string process_to_json(const CoefficientProcess& proc) {
  nlohmann::json j;
  j["taus"] = std::vector<double>(proc.grid.taus().data(),
                                  proc.grid.taus().data() + proc.grid.size());
  std::vector<std::vector<double>> rows;
  for (Eigen::Index k = 0; k < proc.grid.size(); ++k) {
    const Eigen::VectorXd row = proc.betas.row(k).transpose();
    rows.emplace_back(row.data(), row.data() + row.size());
  }
  j["betas"] = rows;
  return j.dump(2);
}

void save_process_json(const std::string& path, const CoefficientProcess& proc) {
  atomic_write(path, process_to_json(proc) + "\n");
}

CoefficientProcess load_process_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("'" + path + "': invalid JSON (" + e.what() + ")");
  }
  if (!j.contains("taus") || !j.contains("betas"))
    throw DataError("'" + path + "': missing 'taus' or 'betas'");
  const std::vector<double> taus = j["taus"].get<std::vector<double>>();
  const auto rows = j["betas"].get<std::vector<std::vector<double>>>();
  if (rows.size() != taus.size())
    throw DataError("'" + path + "': taus/betas size mismatch");

  CoefficientProcess proc;
  proc.grid = QuantileGrid(taus);
  const Eigen::Index p = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size());
  proc.betas.resize(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (static_cast<Eigen::Index>(rows[k].size()) != p)
      throw DataError("'" + path + "': ragged betas");
    proc.betas.row(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXd>(rows[k].data(), p).transpose();
  }
  return proc;
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot move temporary file onto '" + path + "'");
  }
}

}  // namespace scqr
