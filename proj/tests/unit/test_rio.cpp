#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "plantsched/errors.hpp"
#include "plantsched/forecaster/training.hpp"
#include "plantsched/ingest.hpp"
#include "plantsched/rio/scenarios.hpp"

using namespace plantsched;
using namespace plantsched::rio;

namespace {

ResidualData make_data(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> n01;
  ResidualData data{Eigen::MatrixXd(n, d), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index k = 0; k < d; ++k) data.features(a, k) = n01(rng);
    data.predictions[a] = 10.0 + 3.0 * n01(rng);
    data.residuals[a] = n01(rng);
  }
  return data;
}

struct Fitted {
  DailyGduSeries history;
  forecaster::ForecastModel model;
  GpResidualModel gp;
};

Fitted small_fit() {
  auto spec = synthetic_case1_spec();
  auto history = synthetic_gdu_series(spec, DayIndex{-400}, 400, 3);
  forecaster::TrainConfig tc;
  tc.epochs = 2;
  auto model = forecaster::train(history, tc);
  GpFitConfig gc;
  gc.max_points = 120;
  gc.search_points = 60;
  gc.starts = 2;
  gc.max_evaluations_per_start = 30;
  auto gp = fit_gp(residual_dataset(model, history), gc);
  return Fitted{std::move(history), std::move(model), std::move(gp)};
}

}  // namespace

TEST_SUITE("rio") {
  TEST_CASE("kernel value and symmetry") {
    Eigen::VectorXd a(2), b(2);
    a << 0.0, 0.0;
    b << 1.0, 1.0;
    const IoKernelHyper h{};
    CHECK(io_kernel(a, 0.0, b, std::sqrt(2.0), h) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(io_kernel(a, 0.3, b, 1.7, h) == io_kernel(b, 1.7, a, 0.3, h));
    CHECK(io_kernel(a, 1.0, a, 1.0, h) == doctest::Approx(h.prior_variance()));
    IoKernelHyper bad{};
    bad.len_in = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
  }

  TEST_CASE("posterior agrees with a dense inverse") {
    std::mt19937_64 rng(21);
    for (Eigen::Index n : {3, 7, 20, 50}) {
      const auto data = make_data(rng, n, 3);
      const IoKernelHyper h{1.3, 1.1, 0.7, 2.0, 0.1};
      const GpResidualModel gp(data, h, 1.0);
      REQUIRE(gp.jitter_escalations() == 0);
      for (int q = 0; q < 10; ++q) {
        const auto probe = make_data(rng, 1, 3);
        const Eigen::VectorXd g = probe.features.row(0).transpose();
        const auto [mean, var] = oracle::dense_posterior(data, gp.hyper(), g, probe.predictions[0]);
        const auto p = gp.posterior(g, probe.predictions[0]);
        CHECK(std::abs(p.mean - mean) < 1e-10);
        CHECK(std::abs(p.variance - var) < 1e-10);
        CHECK(p.variance <= h.prior_variance());
      }
    }
  }

  TEST_CASE("noise-free posterior interpolates") {
    std::mt19937_64 rng(4);
    const auto data = make_data(rng, 15, 3);
    const GpResidualModel gp(data, IoKernelHyper{1.0, 0.5, 1.0, 0.5, 0.0}, 1.0);
    REQUIRE(gp.jitter_escalations() == 0);
    for (Eigen::Index a = 0; a < data.size(); ++a) {
      const auto p = gp.posterior(data.features.row(a).transpose(), data.predictions[a]);
      CHECK(std::abs(p.mean - data.residuals[a]) < 1e-6);
      CHECK(p.variance < 1e-6);
    }
  }

  TEST_CASE("zero residuals give a zero mean") {
    std::mt19937_64 rng(8);
    auto data = make_data(rng, 10, 2);
    data.residuals.setZero();
    const GpResidualModel gp(data, IoKernelHyper{1.0, 1.0, 1.0, 1.0, 0.05}, 1.0);
    const auto p = gp.posterior(Eigen::VectorXd::Zero(2), 10.0);
    CHECK(p.mean == 0.0);
  }

  TEST_CASE("duplicate points escalate the jitter") {
    std::mt19937_64 rng(2);
    auto data = make_data(rng, 6, 2);
    data.features.row(1) = data.features.row(0);
    data.predictions[1] = data.predictions[0];
    const GpResidualModel gp(data, IoKernelHyper{1.0, 1.0, 1.0, 1.0, 0.0}, 1.0);
    CHECK(gp.jitter_escalations() > 0);
    CHECK(gp.hyper().noise_sd > 0.0);
  }

  TEST_CASE("fitting a smooth toy function") {
    const Eigen::Index n = 60;
    ResidualData data{Eigen::MatrixXd(n, 1), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index a = 0; a < n; ++a) {
      const double x = 6.0 * static_cast<double>(a) / static_cast<double>(n - 1);
      data.features(a, 0) = x;
      data.predictions[a] = 0.0;
      data.residuals[a] = std::sin(x);
    }
    const auto gp = fit_gp(data);
    for (double x : {0.55, 1.9, 3.3, 4.45}) {
      Eigen::VectorXd g(1);
      g << x;
      const auto p = gp.posterior(g, 0.0);
      CHECK(std::abs(p.mean - std::sin(x)) < 0.05);
      CHECK(p.variance <= gp.hyper().prior_variance());
    }
    ResidualData one{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
    CHECK_THROWS_AS(fit_gp(one), ValidationError);
  }

  TEST_CASE("rollouts and scenario files") {
    const auto f = small_fit();
    const auto seed = std::span<const double>(f.history.values).last(30);
    std::mt19937_64 r1(5), r2(5);
    const auto a = rollout(f.model, f.gp, seed, 60, DayIndex{0}, SiteId{0}, r1);
    const auto b = rollout(f.model, f.gp, seed, 60, DayIndex{0}, SiteId{0}, r2);
    CHECK(a == b);
    CHECK(a.size() == 60);
    for (double v : a.values) CHECK(v >= 0.0);
    CHECK_THROWS_AS(rollout(f.model, f.gp, seed.first(10), 60, DayIndex{0}, SiteId{0}, r1), ValidationError);

    ScenarioConfig sc;
    sc.count = 3;
    sc.horizon = 40;
    sc.rng_seed = 12;
    const auto set = generate_scenarios(f.model, f.gp, f.history, sc);
    sc.threads = 3;
    const auto threaded = generate_scenarios(f.model, f.gp, f.history, sc);
    REQUIRE(set.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(set.scenarios[k].series == threaded.scenarios[k].series);

    const auto dir = std::filesystem::temp_directory_path() / "plantsched_rio_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    write_scenarios(dir, set);
    const auto back = read_scenarios(dir);
    REQUIRE(back.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(back.scenarios[k].series == set.scenarios[k].series);
      CHECK(back.scenarios[k].seed == set.scenarios[k].seed);
    }
    CHECK(back.probabilities() == set.probabilities());
    std::filesystem::remove_all(dir);

    sc.count = 1;
    CHECK(generate_scenarios(f.model, f.gp, f.history, sc).probabilities() == std::vector<double>{1.0});
  }
}
