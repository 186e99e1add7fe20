#include <filesystem>

#include "doctest.h"

#include "gwcca/config.hpp"
#include "gwcca/csv.hpp"
#include "gwcca/error.hpp"

using namespace gwcca;

TEST_CASE("defaults") {
  const Config c;
  CHECK(c.kernel.family == KernelFamily::gaussian);
  CHECK_FALSE(c.kernel.k);
  CHECK(c.selection.phi == 0.95);
  CHECK(c.selection.beta == 0.8);
  CHECK(c.selection.report_threshold == 0.40);
  CHECK(c.selection.patience == 2);
  CHECK(c.preprocess.collinearity_threshold == 0.7);
  CHECK(c.run.early_stop);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse a file") {
  const Config c = parse_config(R"(
; comment
# another
[data]
x_vars = A, B ,C
y_vars = D,E
filter = no

[kernel]
family = bi-square
k = 100

[selection]
patience = 5
phi = 0.9

[run]
seed = 42
threads = 3
early_stop = false

[synth]
dataset = 2
grid_size = 30
)");
  CHECK(c.schema.x_vars == std::vector<std::string>{"A", "B", "C"});
  CHECK(c.schema.y_vars.size() == 2);
  CHECK_FALSE(c.preprocess.filter);
  CHECK(c.kernel.family == KernelFamily::bisquare);
  CHECK(*c.kernel.k == 100);
  CHECK(c.selection.patience == 5);
  CHECK(c.selection.phi == 0.9);
  CHECK(c.run.seed == 42);
  CHECK(c.run.threads == 3);
  CHECK_FALSE(c.run.early_stop);
  CHECK(c.synth.dataset == 2);
  CHECK(c.synth.dataset2.grid_size == 30);
}

TEST_CASE("text form round trips") {
  Config c;
  c.set("kernel.family", "tricube");
  c.set("kernel.bandwidth", "0.125");
  c.set("selection.alpha", "0.2");
  c.set("scan.spacing", "geometric");
  c.set("synth.bump_center_x", "0.3");
  c.set("data.x_vars", "P1,P2");
  const Config back = parse_config(c.to_ini());
  CHECK(back.to_ini() == c.to_ini());
  CHECK(back.kernel.family == KernelFamily::tricube);
  CHECK(*back.kernel.bandwidth == 0.125);
  CHECK_FALSE(back.kernel.k);
  CHECK(back.grid.spacing == CandidateGrid::Spacing::geometric);
  CHECK(back.synth.dataset1.bump.center.x() == 0.3);
  CHECK(parse_config(Config{}.to_ini()).to_ini() == Config{}.to_ini());
}

TEST_CASE("bad configurations") {
  CHECK_THROWS_AS(parse_config("[kernel]\nshape = round\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nope]\nk = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[selection]\nphi = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[selection]\nphi = high\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[kernel]\nk = 10\nbandwidth = 0.3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[kernel]\nfamily = cosine\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\nearly_stop = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\nridge = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[data\nx = 1\n"), ConfigError);
  CHECK_NOTHROW(parse_config("[kernel]\n[run]\nseed = 3\n"));
  CHECK_THROWS_AS(load_config("/nonexistent/gwcca.ini"), ConfigError);
}

TEST_CASE("load from disk") {
  const auto path = std::filesystem::temp_directory_path() / "gwcca_test_config.ini";
  csv::write_file(path, "[kernel]\nfamily = exponential\n");
  CHECK(load_config(path).kernel.family == KernelFamily::exponential);
  csv::write_file(path, "[kernel]\nfamily = exponential\nwidth = 2\n");
  try {
    (void)load_config(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("kernel.width") != std::string::npos);
  }
  std::filesystem::remove(path);
}
