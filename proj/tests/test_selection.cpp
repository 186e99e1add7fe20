#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

#include "gwcca/selection.hpp"
#include "support.hpp"

using namespace gwcca;

TEST_CASE("rgof values") {
  Eigen::MatrixXd one(1, 2);
  one << 0.8, 0.6;
  CHECK(rgof(one, 1) == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(rgof(one, 2) == 0.0);

  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(7, 4, 0.3);
  for (Eigen::Index c = 1; c <= 4; ++c) {
    CHECK(rgof(flat, c) == doctest::Approx(1.0 - c / 4.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(rgof(flat, 0), ParameterError);
  CHECK_THROWS_AS(rgof(flat, 5), ParameterError);
  CHECK_THROWS_AS(rgof(Eigen::MatrixXd::Zero(3, 2), 1), DegenerateError);
}

TEST_CASE("rgof profile is nonincreasing and ends at zero") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 30; ++rep) {
    const Eigen::MatrixXd r = test::uniform(20 + rep, 1 + rep % 6, rng);
    const auto prof = rgof_profile(r);
    CHECK(prof.back() == 0.0);
    for (std::size_t c = 1; c < prof.size(); ++c) CHECK(prof[c] <= prof[c - 1]);
    for (double v : prof) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("loading threshold") {
  const std::vector<double> same(10, 0.42);
  CHECK(loading_threshold(same, 0.95) == 0.42);

  std::vector<double> pool(95, 0.1);
  pool.insert(pool.end(), 5, 1.0);
  // h = 99 * 0.95 = 94.05 lies between the last 0.1 and the first 1.0.
  CHECK(loading_threshold(pool, 0.95) == doctest::Approx(0.1 + 0.05 * 0.9).epsilon(1e-12));
  CHECK(loading_threshold(pool, 1.0) == 1.0);
  CHECK_THROWS_AS(loading_threshold({}, 0.5), InputError);
}

TEST_CASE("support ratio") {
  CHECK(support_ratio(Eigen::MatrixXd::Constant(5, 4, 0.9), 0.5, 0.25) == 1.0);
  CHECK(support_ratio(Eigen::MatrixXd::Constant(5, 4, 0.5), 0.5, 0.25) == 0.0);

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  c(0, 1) = -0.9;
  c(2, 3) = 0.9;
  c(3, 0) = 0.2;
  CHECK(support_ratio(c, 0.5, 0.25) == 0.5);
  CHECK(support_ratio(c, 0.5, 0.5) == 0.0);
  CHECK(support_ratio(Eigen::MatrixXd::Zero(6, 3), 0.0, 0.1) == 0.0);
}

TEST_CASE("screening") {
  const std::vector<double> equal{0.4, 0.4, 0.4};
  CHECK(screen_variates(equal, 0.8) == std::vector<Eigen::Index>{0, 1, 2});
  const std::vector<double> s{1.0, 1.0, 0.1};
  CHECK(screen_variates(s, 0.8) == std::vector<Eigen::Index>{0, 1});
  const std::vector<double> first_zero{0.0, 0.6, 0.6};
  CHECK(screen_variates(first_zero, 0.8) == std::vector<Eigen::Index>{0, 1, 2});
}

TEST_CASE("all-zero loadings are screened out whenever another variate has support") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index psi = 2 + rep % 4;
    const Eigen::Index zero_at = 1 + rep % (psi - 1);
    std::vector<double> support;
    const Eigen::MatrixXd pool = test::uniform(30, 6, rng);
    const double tau = 0.5;
    for (Eigen::Index c = 0; c < psi; ++c) {
      const Eigen::MatrixXd coefs = c == zero_at ? Eigen::MatrixXd::Zero(30, 6) : pool;
      support.push_back(support_ratio(coefs, tau, 0.1));
    }
    CHECK(support[static_cast<std::size_t>(zero_at)] == 0.0);
    REQUIRE(support[0] > 0.0);
    const auto kept = screen_variates(support, 0.8);
    CHECK(std::find(kept.begin(), kept.end(), zero_at) == kept.end());
  }
}

TEST_CASE("reporting") {
  const std::vector<double> means{0.981, 0.897, 0.620, 0.341};
  CHECK(select_reportable(means, 0.40) == std::vector<Eigen::Index>{0, 1, 2});
  CHECK(select_reportable(means, 0.99).empty());
  CHECK(select_reportable(means, 0.0).size() == 4);
}

namespace {

// Trace with `improving` steps of 10% each after the first value, then `stale`
// steps of 0.5%, then improving steps again.
std::vector<double> make_trace(int improving, int stale, int tail) {
  std::vector<double> t{0.8};
  for (int i = 0; i < improving; ++i) t.push_back(t.back() * 0.9);
  for (int i = 0; i < stale; ++i) t.push_back(t.back() * 0.995);
  for (int i = 0; i < tail; ++i) t.push_back(t.back() * 0.9);
  return t;
}

}  // namespace

TEST_CASE("early stop on a worked trace") {
  SelectionConfig cfg;
  cfg.patience = 2;
  const std::vector<double> trace{0.50, 0.30, 0.298, 0.297, 0.296, 0.1};
  const auto d = early_stop_rule(trace, cfg);
  CHECK(d.reason == StopReason::early_stop);
  CHECK(d.evaluated == 4);
  CHECK(d.chosen == 1);
}

TEST_CASE("early stop fires exactly after patience stale steps") {
  for (int patience : {2, 5, 10}) {
    SelectionConfig cfg;
    cfg.patience = patience;
    for (int improving = 0; improving < 6; ++improving) {
      CAPTURE(patience);
      CAPTURE(improving);
      const auto d = early_stop_rule(make_trace(improving, patience, 4), cfg);
      CHECK(d.reason == StopReason::early_stop);
      CHECK(d.evaluated == static_cast<std::size_t>(improving + 1 + patience));
      CHECK(d.chosen == static_cast<std::size_t>(improving));

      // One stale step short: the run is reset by the tail and never fires.
      const auto e = early_stop_rule(make_trace(improving, patience - 1, 4), cfg);
      CHECK(e.reason == StopReason::exhausted);
      CHECK(e.evaluated == static_cast<std::size_t>(improving + patience + 4));
    }
  }
}

TEST_CASE("early stop exhausts on steadily improving traces") {
  SelectionConfig cfg;
  const auto t = make_trace(12, 0, 0);
  const auto d = early_stop_rule(t, cfg);
  CHECK(d.reason == StopReason::exhausted);
  CHECK(d.evaluated == t.size());
  CHECK(d.chosen == t.size() - 1);
}

TEST_CASE("improvement exactly at the tolerance counts as progress") {
  SelectionConfig cfg;
  cfg.patience = 1;
  cfg.improvement_tol = 0.25;
  const std::vector<double> trace{1.0, 0.75, 0.5625, 0.5};
  const auto d = early_stop_rule(trace, cfg);
  CHECK(d.evaluated == 4);
  CHECK(d.chosen == 2);
}

TEST_CASE("worsening and flat traces count as stale") {
  SelectionConfig cfg;
  cfg.patience = 3;
  const std::vector<double> trace{0.4, 0.2, 0.25, 0.25, 0.25, 0.01};
  const auto d = early_stop_rule(trace, cfg);
  CHECK(d.reason == StopReason::early_stop);
  CHECK(d.evaluated == 5);
  CHECK(d.chosen == 1);
}

TEST_CASE("incremental stopper matches the batch rule") {
  EarlyStopper s(2, 0.01);
  CHECK_FALSE(s.push(0.5));
  CHECK_FALSE(s.push(0.3));
  CHECK_FALSE(s.push(0.299));
  CHECK(s.push(0.298));
  CHECK(s.push(0.0));  // ignored once stopped
  CHECK(s.evaluated() == 4);
  CHECK(s.chosen() == 1);
  CHECK_THROWS_AS(EarlyStopper(0, 0.01), ConfigError);
  CHECK_THROWS_AS((void)EarlyStopper(1, 0.01).chosen(), ConfigError);
}

TEST_CASE("without a stop the RGOF minimizer is chosen") {
  EarlyStopper s(std::numeric_limits<int>::max(), 0.01);
  for (double v : {0.5, 0.2, 0.199, 0.1995, 0.25}) s.push(v);
  CHECK_FALSE(s.stopped());
  CHECK(s.chosen() == 2);
}

TEST_CASE("candidate grid") {
  CandidateGrid g;
  const auto ks = g.build(50, 5, 5);
  CHECK(ks.front() == 20);
  CHECK(ks.back() == 50);
  for (std::size_t i = 1; i < ks.size(); ++i) CHECK(ks[i] - ks[i - 1] == 2);

  CHECK(g.build(51, 5, 5).back() == 51);
  CHECK(g.build(100, 15, 10).front() == 27);

  g.spacing = CandidateGrid::Spacing::geometric;
  g.count = 10;
  const auto geo = g.build(2000, 5, 5);
  CHECK(geo.front() == 20);
  CHECK(geo.back() == 2000);
  CHECK(std::is_sorted(geo.begin(), geo.end()));
  CHECK(std::adjacent_find(geo.begin(), geo.end()) == geo.end());

  g.k_min = 60;
  g.k_max = 40;
  CHECK_THROWS_AS((void)g.build(100, 2, 2), ConfigError);
}

TEST_CASE("selection config validation") {
  SelectionConfig c;
  CHECK_NOTHROW(c.validate());
  c.phi = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.beta = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.patience = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("evaluate_fits on real local fits") {
  const SpatialDataset d = test::random_dataset(150, 3, 3, 5);
  const auto fits = fit_locations(d, KernelSpec::adaptive(KernelFamily::gaussian, 40));
  const SelectionConfig cfg;
  const ScanRecord rec = evaluate_fits(fits, cfg);
  CHECK(rec.rgof_by_c.size() == 3);
  CHECK(rec.support.size() == 3);
  CHECK(rec.retained.front() == 0);
  CHECK(rec.screened_dimension == rec.retained.back() + 1);
  CHECK(rec.rgof == rec.rgof_by_c[static_cast<std::size_t>(rec.screened_dimension - 1)]);
  const Eigen::MatrixXd rhos = local_rhos(fits);
  CHECK(rec.mean_rho_by_variate[0] == doctest::Approx(rhos.col(0).mean()));
}

TEST_CASE("scan over a small grid") {
  const SpatialDataset d = test::random_dataset(120, 2, 2, 6);
  const std::vector<Eigen::Index> ks{20, 40, 60, 80, 100, 120};
  SelectionConfig cfg;
  const ScanResult r = early_stop_scan(d, KernelFamily::gaussian, ks, cfg, 0.0, 1);
  CHECK(!r.records.empty());
  CHECK(r.records[r.chosen_record].candidate_k == r.chosen_k);
  std::vector<double> trace;
  for (const auto& rec : r.records) trace.push_back(rec.rgof);
  const auto d2 = early_stop_rule(trace, cfg);
  CHECK(d2.chosen == r.chosen_record);

  const std::vector<Eigen::Index> unsorted{40, 20};
  CHECK_THROWS_AS(early_stop_scan(d, KernelFamily::gaussian, unsorted, cfg), ConfigError);
  const std::vector<Eigen::Index> tiny{2, 3};
  CHECK_THROWS_AS(early_stop_scan(d, KernelFamily::boxcar, tiny, cfg), ConfigError);
}
