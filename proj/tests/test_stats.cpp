#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmsim/random.hpp"
#include "mmsim/stats.hpp"

using namespace mmsim;

namespace {

std::vector<Price> flat(std::size_t n, std::int64_t px) { return std::vector<Price>(n, Price{px}); }

std::vector<double> normals(std::uint32_t index, std::size_t n) {
  CounterStream s(77, StreamDomain::Test, index);
  std::vector<double> x(n);
  for (double& v : x) v = s.normal();
  return x;
}

}  // namespace

TEST_CASE("compute_returns on constructed paths") {
  SUBCASE("constant path gives zeros") {
    const auto mid = flat(10001, 1000000);
    const ReturnSeries r = compute_returns(mid, 100, 2001, 10000, 2000);
    CHECK(r.values.size() == 79);
    for (double v : r.values) CHECK(v == 0.0);
  }
  SUBCASE("doubling every interval gives ln 2") {
    std::vector<Price> mid(1001, Price{1});
    for (std::size_t t = 0; t < mid.size(); ++t) mid[t] = Price{std::int64_t{1} << (t / 100)};
    const ReturnSeries r = compute_returns(mid, 100, 1, 1000);
    // Sample points at ticks 100, 200, ..., 1000.
    REQUIRE(r.values.size() == 9);
    for (double v : r.values) CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("window of 8000 ticks at interval 100") {
    const auto mid = flat(10101, 5);
    CHECK(compute_returns(mid, 100, 2001, 10000).values.size() == 79);
    CHECK(compute_returns(mid, 100, 2001, 10050).values.size() == 79);
    CHECK(compute_returns(mid, 100, 2001, 10000 - 1).values.size() == 78);
  }
  SUBCASE("rejections") {
    const auto mid = flat(10001, 5);
    CHECK_THROWS_AS(compute_returns(mid, 100, 2001, 2150), DataError);
    CHECK_THROWS_AS(compute_returns(mid, 100, 1, 2000, 2001), DataError);
    CHECK_THROWS_AS(compute_returns(mid, 0, 1, 1000), DataError);
    CHECK_THROWS_AS(compute_returns(mid, 100, 1, 10001), DataError);
    CHECK_THROWS_AS(compute_returns(mid, 100, 0, 1000), DataError);
  }
}

TEST_CASE("standard deviation is the population form") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  CHECK(standard_deviation(x) == doctest::Approx(std::sqrt(1.25)));
}

TEST_CASE("excess kurtosis") {
  SUBCASE("gaussian sample") {
    const auto x = normals(1, 1000000);
    CHECK(std::fabs(excess_kurtosis(x)) < 0.05);
  }
  SUBCASE("symmetric two point sample") {
    const std::vector<double> x{1, -1, 1, -1, 1, -1};
    CHECK(excess_kurtosis(x) == doctest::Approx(-2.0).epsilon(1e-15));
  }
  SUBCASE("degenerate input") {
    CHECK_THROWS_AS(excess_kurtosis(std::vector<double>(10, 3.0)), DataError);
    CHECK_THROWS_AS(excess_kurtosis(std::vector<double>{1, 2, 3}), DataError);
  }
  SUBCASE("affine invariance") {
    for (std::uint32_t k = 0; k < 20; ++k) {
      auto x = normals(100 + k, 500);
      for (double& v : x) v = v * v * v;  // heavy tails
      const double base = excess_kurtosis(x);
      CounterStream s(5, StreamDomain::Test, k);
      const double a = (s.uniform_open() - 0.5) * 200.0;
      const double b = (s.uniform_open() - 0.5) * 1e3;
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
      CHECK(excess_kurtosis(y) == doctest::Approx(base).epsilon(1e-8));
    }
  }
}

TEST_CASE("autocorrelation of squared returns") {
  SUBCASE("white noise stays inside the band") {
    const auto x = normals(2, 20000);
    const auto acf = acf_squared(x, 5);
    REQUIRE(acf.size() == 5);
    for (double a : acf) CHECK(std::fabs(a) < 3.0 / std::sqrt(20000.0));
  }
  SUBCASE("alternating volatility regimes") {
    // Blocks of 50 calm draws then 50 wild ones. With regime variances v of
    // 0.01 and 9, lag-1 is about (49/50) var(E[x^2|v]) / (var(E[x^2|v]) + E[2v^2])
    // = 0.98 * 20.2 / (20.2 + 81), roughly 0.196.
    auto x = normals(3, 4000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= (i / 50) % 2 == 0 ? 0.1 : 3.0;
    const auto acf = acf_squared(x, 5);
    CHECK(acf[0] > 0.1);
    for (double a : acf) CHECK(a > 0.0);
  }
  SUBCASE("values are correlations") {
    for (std::uint32_t k = 0; k < 50; ++k) {
      auto x = normals(200 + k, 12);
      for (double a : acf_squared(x, 5)) {
        CHECK(a >= -1.0);
        CHECK(a <= 1.0);
      }
    }
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(acf_squared(std::vector<double>{1, -1, 1, -1, 1, -1, 1, -1}, 5), DataError);
    CHECK_THROWS_AS(acf_squared(std::vector<double>{1, 2, 3, 4, 5, 6}, 5), DataError);
  }
}

TEST_CASE("stylized report averages per-run statistics") {
  MarketConfig cfg;
  const std::vector<std::uint64_t> one{4};
  CHECK_THROWS_AS(stylized_report(cfg, one, 0, 100, 1), DataError);

  const std::vector<std::uint64_t> seeds{4, 5};
  const StylizedReport rep = stylized_report(cfg, seeds, 0, 100, 1);
  REQUIRE(rep.n_runs + rep.excluded.size() == 2);
  REQUIRE(rep.n_runs == 2);
  StylizedRun sum;
  for (auto s : seeds) {
    const MarketRecord rec = run_simulation(cfg, s, std::nullopt);
    const StylizedRun r = stylized_run(rec.mid_series, 100, cfg.order_lifetime);
    sum.std_returns += r.std_returns / 2;
    sum.kurtosis += r.kurtosis / 2;
    for (std::size_t k = 0; k < kAcfLags; ++k) sum.acf_sq[k] += r.acf_sq[k] / 2;
  }
  CHECK(rep.std_returns == doctest::Approx(sum.std_returns).epsilon(1e-12));
  CHECK(rep.kurtosis == doctest::Approx(sum.kurtosis).epsilon(1e-12));
  for (std::size_t k = 0; k < kAcfLags; ++k) CHECK(rep.acf_sq[k] == doctest::Approx(sum.acf_sq[k]).epsilon(1e-12));
  CHECK(rep.horizon == cfg.end_tick);

  const StylizedReport again = stylized_report(cfg, seeds, 0, 100, 2);
  CHECK(again.kurtosis == rep.kurtosis);
  CHECK(again.acf_sq == rep.acf_sq);
}

TEST_CASE("report of one seed repeated equals that run") {
  MarketConfig cfg;
  const std::vector<std::uint64_t> seeds{9, 9};
  const StylizedReport rep = stylized_report(cfg, seeds, 0, 100, 1);
  const MarketRecord rec = run_simulation(cfg, 9, std::nullopt);
  const StylizedRun r = stylized_run(rec.mid_series, 100, cfg.order_lifetime);
  CHECK(rep.std_returns == doctest::Approx(r.std_returns).epsilon(1e-15));
  CHECK(rep.kurtosis == doctest::Approx(r.kurtosis).epsilon(1e-15));
  for (std::size_t k = 0; k < kAcfLags; ++k) CHECK(rep.acf_sq[k] == doctest::Approx(r.acf_sq[k]).epsilon(1e-15));
}
