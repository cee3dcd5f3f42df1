#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "crifem/config.hpp"
#include "crifem/driver.hpp"

using namespace crifem;

namespace {

std::string write_tmp(const std::string& body) {
  const std::string path = "/tmp/crifem_test_config.cfg";
  std::ofstream os(path);
  os << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("example presets") {
  SUBCASE("example=1a fills the full configuration") {
    const RunConfig cfg = parse_config(std::nullopt, {{"example", "1a"}});
    CHECK(cfg.example == "1a");
    CHECK(cfg.interface_kind == LevelSet::Kind::circle);
    CHECK(cfg.r0 == 0.36);
    CHECK(cfg.mu_minus == 1.0);
    CHECK(cfg.mu_plus == 100.0);
    const MaterialParams m = cfg.materials();
    CHECK(m.lambda_minus == doctest::Approx(5.0));
    CHECK(m.lambda_plus == doctest::Approx(500.0));
    CHECK(cfg.tau_value() == doctest::Approx(1000.0));  // 10 max(mu)
    CHECK(cfg.k_min == 3);
    CHECK(cfg.k_max == 6);
    CHECK(cfg.tol == 1e-12);
  }
  SUBCASE("registry carries the benchmark parameter sets") {
    struct Expect {
      const char* id;
      LevelSet::Kind kind;
      double r0, mu_plus, ratio;
    };
    const Expect table[] = {
        {"1a", LevelSet::Kind::circle, 0.36, 100, 5},
        {"1b", LevelSet::Kind::circle, 0.48, 10, 5},
        {"2a", LevelSet::Kind::circle, 0.7, 10, 100},
        {"2b", LevelSet::Kind::circle, 0.6, 10, 1000},
        {"3a", LevelSet::Kind::ellipse, 0.4, 10, 5},
        {"3b", LevelSet::Kind::ellipse, 0.3, 100, 5},
    };
    for (const auto& e : table) {
      RunConfig cfg;
      apply_example(cfg, e.id);
      CHECK(cfg.interface_kind == e.kind);
      CHECK(cfg.r0 == e.r0);
      CHECK(cfg.mu_minus == 1.0);
      CHECK(cfg.mu_plus == e.mu_plus);
      CHECK(cfg.lambda_ratio == e.ratio);
      CHECK(!cfg.fixed_force);
    }
  }
  SUBCASE("example 4 uses Poisson ratios and the fixed force") {
    RunConfig cfg;
    apply_example(cfg, "4");
    CHECK(cfg.fixed_force);
    CHECK(cfg.interface_kind == LevelSet::Kind::ellipse);
    CHECK(cfg.r0 == 0.3);
    const MaterialParams m = cfg.materials();
    CHECK(m.mu_plus == 100.0);
    CHECK(m.lambda_plus / m.mu_plus == doctest::Approx(4.0));           // nu = 0.4
    CHECK(m.lambda_minus / m.mu_minus == doctest::Approx(0.56 / 0.44));  // nu = 0.28
    CHECK(!cfg.solution().has_exact);
  }
  SUBCASE("unknown example id") {
    CHECK_THROWS_WITH_AS(parse_config(std::nullopt, {{"example", "9z"}}),
                         doctest::Contains("example"), InvalidInputError);
  }
}

TEST_CASE("validation names the offending key") {
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, {{"tau", "-1"}}), doctest::Contains("tau"),
                       InvalidInputError);
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, {{"no_such_key", "1"}}),
                       doctest::Contains("no_such_key"), InvalidInputError);
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, {{"k_min", "7"}, {"k_max", "5"}}),
                       doctest::Contains("k_min"), InvalidInputError);
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, {{"mu_plus", "-3"}}),
                       doctest::Contains("mu_plus"), InvalidInputError);
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, {{"tol", "nope"}}), doctest::Contains("tol"),
                       InvalidInputError);
  CHECK_THROWS_WITH_AS(
      parse_config(std::nullopt, {{"lambda_ratio", "5"}, {"nu_minus", "0.3"}, {"nu_plus", "0.3"}}),
      doctest::Contains("lambda"), InvalidInputError);
}

TEST_CASE("file parsing and flag precedence") {
  SUBCASE("flags override file values") {
    const std::string path = write_tmp("example=1a\nk_max=5\n");
    const RunConfig cfg = parse_config(path, {{"k_max", "6"}});
    CHECK(cfg.k_max == 6);
    CHECK(cfg.example == "1a");
  }
  SUBCASE("explicit keys refine the example preset") {
    const std::string path = write_tmp("example=1a\nr0=0.5\ntau=77\n");
    const RunConfig cfg = parse_config(path, {});
    CHECK(cfg.r0 == 0.5);
    CHECK(cfg.tau_value() == 77.0);
    CHECK(cfg.mu_plus == 100.0);  // preset value kept
  }
  SUBCASE("comments and blank lines are ignored") {
    const std::string path = write_tmp("# setup\n\nexample = 1b\n  k_min = 2 # inline\n");
    const RunConfig cfg = parse_config(path, {});
    CHECK(cfg.example == "1b");
    CHECK(cfg.k_min == 2);
  }
  SUBCASE("bad line") {
    const std::string path = write_tmp("this is not a key value pair\n");
    CHECK_THROWS_AS(parse_config(path, {}), InvalidInputError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(parse_config(std::string("/tmp/does_not_exist_crifem.cfg"), {}), IoError);
  }
}

TEST_CASE("config keys help lists every accepted key") {
  const std::string help = config_keys_help();
  for (const char* key : {"example", "k_min", "interface", "r0", "line_x", "mu_minus",
                          "lambda_ratio", "nu_minus", "tau", "edge_set", "solver", "tol",
                          "maxiter", "out", "threads", "vtk"})
    CHECK(help.find(key) != std::string::npos);
}

TEST_CASE("driver run produces table, csv and vtk artifacts") {
  RunConfig cfg;
  apply_example(cfg, "1a");
  cfg.k_min = 3;
  cfg.k_max = 4;
  cfg.out_dir = "/tmp/crifem_test_run";
  std::ostringstream os;
  const int status = run(cfg, os);
  CHECK(status == 0);
  const std::string printed = os.str();
  CHECK(printed.find("1/h") != std::string::npos);
  CHECK(printed.find("order") != std::string::npos);

  const ConvergenceTable t = read_csv(cfg.out_dir + "/1a.csv");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].inv_h == 8);
  CHECK(t.rows[1].inv_h == 16);
  CHECK(std::isnan(t.rows[0].l2_order));
  CHECK(t.rows[1].l2_order > 1.5);
  CHECK(t.tau == 1000.0);

  std::ifstream vtk(cfg.out_dir + "/1a_k3.vtk");
  CHECK(vtk.good());

  SUBCASE("repeat runs are byte-identical") {
    const std::string first = slurp(cfg.out_dir + "/1a.csv");
    std::ostringstream os2;
    CHECK(run(cfg, os2) == 0);
    CHECK(slurp(cfg.out_dir + "/1a.csv") == first);
  }
}

TEST_CASE("driver run for the fixed-force benchmark emits no error columns") {
  RunConfig cfg;
  apply_example(cfg, "4");
  cfg.k_min = 3;
  cfg.k_max = 3;
  cfg.out_dir = "/tmp/crifem_test_run4";
  std::ostringstream os;
  CHECK(run(cfg, os) == 0);
  const ConvergenceTable t = read_csv(cfg.out_dir + "/4.csv");
  REQUIRE(t.rows.size() == 1);
  CHECK(!t.has_exact);
  CHECK(std::isnan(t.rows[0].l2));
  std::ifstream vtk(cfg.out_dir + "/4_k3.vtk");
  CHECK(vtk.good());
}

TEST_CASE("driver exit codes") {
  SUBCASE("config error is 2") {
    RunConfig cfg;
    cfg.mu_plus = -1;
    std::ostringstream os;
    CHECK(run(cfg, os) == 2);
  }
  SUBCASE("solver failure is 4") {
    RunConfig cfg;
    apply_example(cfg, "1a");
    cfg.k_min = cfg.k_max = 3;
    cfg.maxiter = 3;
    cfg.out_dir = "/tmp/crifem_test_run_fail";
    std::ostringstream os;
    CHECK(run(cfg, os) == 4);
  }
  SUBCASE("io failure is 5") {
    RunConfig cfg;
    apply_example(cfg, "1a");
    cfg.k_min = cfg.k_max = 3;
    cfg.out_dir = "/proc/definitely_not_writable/x";
    std::ostringstream os;
    CHECK(run(cfg, os) == 5);
  }
}
