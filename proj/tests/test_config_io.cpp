#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "isobif/config.hpp"
#include "isobif/io.hpp"

using namespace isobif;

TEST_CASE("settings and validation") {
  RunConfig c;
  apply_setting(c, "grid_n", "64");
  apply_setting(c, "tol_ode", "1e-9");
  apply_setting(c, "workers", "3");
  CHECK(c.numerics.grid_n == 64);
  CHECK(c.numerics.tol_ode == 1e-9);
  CHECK(c.worker_count == 3);
  CHECK_THROWS_AS(apply_setting(c, "nope", "1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(c, "grid_n", "abc"), std::invalid_argument);
  c.numerics.grid_n = 4;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.numerics.grid_n = 40;
  c.numerics.tol_newton = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("config file") {
  const auto path = std::filesystem::temp_directory_path() / "isobif_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment\n grid_n = 24 \nseed=5  # trailing\n\n";
  }
  RunConfig c;
  load_config_file(c, path);
  CHECK(c.numerics.grid_n == 24);
  CHECK(c.seed == 5);
  std::filesystem::remove(path);
}

TEST_CASE("config hash tracks numerics and seed only") {
  RunConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.worker_count = 7;
  b.output_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.numerics.tol_ode = 1e-11;
  CHECK(config_hash(a) != config_hash(b));
  RunConfig s;
  s.seed = 1;
  CHECK(config_hash(a) != config_hash(s));
}

TEST_CASE("fmt17 round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 8.000000000888539, 1e-300, -2.5e17}) CHECK(std::stod(fmt17(v)) == v);
}

TEST_CASE("CSV and JSON outputs carry the config hash") {
  const std::string hash = config_hash(RunConfig{});
  const auto rs = find_eigenvalues(s3_torus(), 2);
  const std::string csv = spectrum_csv(rs, hash);
  CHECK(csv.rfind("# config_hash=" + hash + "\nk,mu_numeric,mu_closed,rel_err,n_k,u_at_tstar\n", 0) == 0);
  CHECK(csv == spectrum_csv(find_eigenvalues(s3_torus(), 2), hash));
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);

  Census c;
  c.params = {s3_torus(), 3.0, 2.0};
  c.bound_A = 4;
  const Json j = census_json(c, hash);
  CHECK(j["config_hash"] == hash);
  CHECK(j["solutions"].empty());
  CHECK(j["entry"] == "s3_torus");

  const Json m = metrics_json({MetricFamily::spin9, 1, {1.0}}, std::nullopt, hash);
  CHECK(m["s"].get<double>() == doctest::Approx(210));
  CHECK(m["config_hash"] == hash);
}

TEST_CASE("catalog JSON reports infinite p_f as a string") {
  const Json j = entry_json(s3_torus());
  CHECK(j["p_f"] == "inf");
  CHECK(j["mults"] == Json::array({1, 1}));
}
