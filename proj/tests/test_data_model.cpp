#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "scqr/dataset.hpp"
#include "scqr/grid.hpp"
#include "scqr/io.hpp"
#include "scqr/process.hpp"

using namespace scqr;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

}  // namespace

TEST_SUITE("data_model") {

TEST_CASE("uniform grid construction") {
  const QuantileGrid g = make_uniform_grid(0.05, 0.8, 0.05);
  REQUIRE(g.size() == 16);
  CHECK(g.taus()(0) == 0.05);
  CHECK(g.taus()(15) == 0.8);
  CHECK(g.taus()(1) == doctest::Approx(0.10).epsilon(1e-12));
  // log((1 - 0.05)/(1 - 0.10))
  CHECK(g.deltaH()(0) == doctest::Approx(0.0540672212702757).epsilon(1e-12));

  const QuantileGrid fine = make_uniform_grid(0.1, 0.7, 0.01);
  CHECK(fine.size() == 61);
  CHECK(fine.taus()(60) == 0.7);
}

TEST_CASE("grid rejects bad inputs") {
  CHECK_THROWS_AS(make_uniform_grid(0.5, 0.5, 0.05), DataError);
  CHECK_THROWS_AS(make_uniform_grid(0.6, 0.5, 0.05), DataError);
  CHECK_THROWS_AS(make_uniform_grid(0.1, 0.8, 0.0), DataError);
  CHECK_THROWS_AS(make_uniform_grid(0.1, 0.8, -0.1), DataError);
  CHECK_THROWS_AS(make_uniform_grid(0.1, 0.8, 0.75), DataError);
  CHECK_THROWS_AS(make_uniform_grid(0.0, 0.8, 0.1), DataError);
  CHECK_THROWS_AS(make_uniform_grid(0.1, 1.0, 0.1), DataError);
  CHECK_THROWS_AS(QuantileGrid({0.2, 0.2, 0.3}), DataError);
  CHECK_THROWS_AS(QuantileGrid({0.3, 0.2}), DataError);
  CHECK_THROWS_AS(QuantileGrid(std::vector<double>{}), DataError);
}

TEST_CASE("hazard increments telescope") {
  const QuantileGrid g = make_uniform_grid(0.05, 0.8, 0.05);
  CHECK(g.deltaH().sum() ==
        doctest::Approx(hazard_transform(0.8) - hazard_transform(0.05)).epsilon(1e-12));
  for (Eigen::Index j = 0; j < g.deltaH().size(); ++j) {
    const double direct =
        std::log((1.0 - g.taus()(j)) / (1.0 - g.taus()(j + 1)));
    CHECK(g.deltaH()(j) == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("grid spacing diagnostics") {
  const QuantileGrid g({0.1, 0.15, 0.3, 0.35});
  CHECK(g.max_spacing() == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(g.min_spacing() == doctest::Approx(0.05).epsilon(1e-12));
  const QuantileGrid single({0.4});
  CHECK(single.size() == 1);
  CHECK(single.deltaH().size() == 0);
}

TEST_CASE("process evaluation is right-continuous") {
  CoefficientProcess proc;
  proc.grid = QuantileGrid({0.1, 0.2, 0.4});
  proc.betas.resize(3, 2);
  proc.betas << 1.0, 10.0, 2.0, 20.0, 3.0, 30.0;

  CHECK(proc.eval(0.1)(0) == 1.0);
  CHECK(proc.eval(0.15)(0) == 1.0);   // inside [0.1, 0.2)
  CHECK(proc.eval(0.2)(0) == 2.0);    // boundary belongs to the right piece
  CHECK(proc.eval(0.39)(0) == 2.0);
  CHECK(proc.eval(0.4)(1) == 30.0);   // upper endpoint
  CHECK_THROWS_AS(proc.eval(0.09), DataError);
  CHECK_THROWS_AS(proc.eval(0.41), DataError);
}

TEST_CASE("dataset validation") {
  CensoredDataset d;
  d.y.resize(3);
  d.y << 1.0, 2.0, 0.7;
  d.delta.resize(3);
  d.delta << 1.0, 0.0, 1.0;
  d.X.resize(3, 2);
  d.X << 1.0, 0.5, 1.0, -0.2, 1.0, 1.1;
  CHECK_NOTHROW(validate(d));
  CHECK(d.n() == 3);
  CHECK(d.p() == 2);
  CHECK(d.n_events() == 2);
  CHECK(d.censoring_rate() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CensoredDataset bad = d;
  bad.delta(1) = 2.0;
  CHECK_THROWS_AS(validate(bad), DataError);
  bad = d;
  bad.X(0, 0) = 0.0;
  CHECK_THROWS_AS(validate(bad), DataError);
  bad = d;
  bad.y(2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(bad), DataError);
  bad = d;
  bad.y.resize(2);
  CHECK_THROWS_AS(validate(bad), DataError);
}

TEST_CASE("csv loading") {
  const std::string path = temp_path("scqr_test_basic.csv");
  write_file(path, "y,status,x1\n1.0,1,0.5\n2.0,0,-0.2\n0.7,1,1.1\n");
  const LoadedDataset ld = load_dataset(path, "y", "status");
  CHECK(ld.data.n() == 3);
  CHECK(ld.data.p() == 2);
  CHECK(ld.data.delta(0) == 1.0);
  CHECK(ld.data.delta(1) == 0.0);
  CHECK(ld.data.X(2, 1) == 1.1);
  CHECK(ld.covariate_names == std::vector<std::string>{"x1"});
  CHECK(ld.constant_columns.empty());
  std::remove(path.c_str());
}

TEST_CASE("csv error reporting") {
  const std::string path = temp_path("scqr_test_bad.csv");

  write_file(path, "y,status,x1\n1.0,2,0.5\n2.0,0,-0.2\n");
  CHECK_THROWS_WITH_AS(load_dataset(path, "y", "status"),
                       doctest::Contains("column 'status'"), DataError);

  write_file(path, "y,status,x1\n");
  CHECK_THROWS_WITH_AS(load_dataset(path, "y", "status"), doctest::Contains("empty"),
                       DataError);

  write_file(path, "y,status,x1\n1.0,1,abc\n2.0,0,-0.2\n");
  CHECK_THROWS_WITH_AS(load_dataset(path, "y", "status"), doctest::Contains("non-numeric"),
                       DataError);

  write_file(path, "y,status,x1\n1.0,1\n");
  CHECK_THROWS_AS(load_dataset(path, "y", "status"), DataError);

  write_file(path, "y,status,x1\n1.0,1,0.5\n2.0,0,-0.2\n");
  CHECK_THROWS_WITH_AS(load_dataset(path, "resp", "status"), doctest::Contains("resp"),
                       DataError);

  CHECK_THROWS_WITH_AS(load_dataset(temp_path("scqr_no_such_file.csv"), "y", "status"),
                       doctest::Contains("cannot open"), DataError);
  std::remove(path.c_str());
}

TEST_CASE("constant covariate columns are flagged") {
  const std::string path = temp_path("scqr_test_const.csv");
  write_file(path, "y,status,x1,x2\n1.0,1,3.0,0.5\n2.0,0,3.0,-0.2\n0.7,1,3.0,1.1\n");
  const LoadedDataset ld = load_dataset(path, "y", "status");
  CHECK(ld.constant_columns == std::vector<std::string>{"x1"});
  std::remove(path.c_str());
}

TEST_CASE("dataset csv round-trips bit-exactly") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  CensoredDataset d;
  const Eigen::Index n = 37, q = 4;
  d.y.resize(n);
  d.delta.resize(n);
  d.X.resize(n, q + 1);
  d.X.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    d.y(i) = gauss(rng) * 1e3;
    d.delta(i) = (i % 3 == 0) ? 0.0 : 1.0;
    for (Eigen::Index j = 1; j <= q; ++j) d.X(i, j) = gauss(rng) / 7.0;
  }
  const std::string path = temp_path("scqr_test_roundtrip.csv");
  save_dataset_csv(path, d);
  const LoadedDataset back = load_dataset(path, "y", "status");
  CHECK(back.data.y == d.y);
  CHECK(back.data.delta == d.delta);
  CHECK(back.data.X == d.X);
  std::remove(path.c_str());
}

TEST_CASE("process json round-trips bit-exactly") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  CoefficientProcess proc;
  proc.grid = make_uniform_grid(0.05, 0.8, 0.05);
  proc.betas.resize(proc.grid.size(), 3);
  for (Eigen::Index k = 0; k < proc.betas.rows(); ++k)
    for (Eigen::Index j = 0; j < 3; ++j) proc.betas(k, j) = gauss(rng) * std::exp(gauss(rng));

  const std::string path = temp_path("scqr_test_proc.json");
  save_process_json(path, proc);
  const CoefficientProcess back = load_process_json(path);
  CHECK(back.grid.taus() == proc.grid.taus());
  CHECK(back.betas == proc.betas);
  std::remove(path.c_str());
}

TEST_CASE("process csv export shape") {
  CoefficientProcess proc;
  proc.grid = QuantileGrid({0.25, 0.5});
  proc.betas.resize(2, 2);
  proc.betas << 0.5, -1.25, 0.75, 2.5;
  const std::string path = temp_path("scqr_test_proc.csv");
  save_process_csv(path, proc);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau,beta0,beta1");
  std::getline(in, line);
  CHECK(line == "0.25,0.5,-1.25");
  std::getline(in, line);
  CHECK(line == "0.5,0.75,2.5");
  std::remove(path.c_str());
}

TEST_CASE("subset picks rows") {
  CensoredDataset d;
  d.y.resize(4);
  d.y << 1, 2, 3, 4;
  d.delta.resize(4);
  d.delta << 1, 0, 1, 1;
  d.X.resize(4, 2);
  d.X << 1, 10, 1, 20, 1, 30, 1, 40;
  const CensoredDataset s = subset(d, {2, 0});
  CHECK(s.n() == 2);
  CHECK(s.y(0) == 3);
  CHECK(s.y(1) == 1);
  CHECK(s.X(0, 1) == 30);
}

}  // TEST_SUITE
