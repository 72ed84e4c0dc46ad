#include "mmsim/stats.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include "mmsim/parallel.hpp"

namespace mmsim {

ReturnSeries compute_returns(std::span<const Price> mid_series, Tick interval, Tick first, Tick last,
                             Tick warmup_end) {
  if (interval < 1) throw DataError("compute_returns: interval must be at least 1");
  if (first < 1 || last < first || static_cast<std::size_t>(last) >= mid_series.size()) {
    throw DataError("compute_returns: window outside the price series");
  }
  if (last < warmup_end) throw DataError("compute_returns: window contains only warm-up ticks");
  const Tick points = (last - first + 1) / interval;
  if (points < 2) throw DataError("compute_returns: fewer than two sample points in window");

  ReturnSeries r{interval, first, last, {}};
  r.values.reserve(static_cast<std::size_t>(points - 1));
  for (Tick k = 2; k <= points; ++k) {
    const Tick t = first - 1 + k * interval;
    r.values.push_back(std::log(static_cast<double>(mid_series[t].ticks) /
                                static_cast<double>(mid_series[t - interval].ticks)));
  }
  return r;
}

namespace {

double mean(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

}  // namespace

double standard_deviation(std::span<const double> x) {
  if (x.empty()) throw DataError("standard_deviation: empty series");
  const double m = mean(x);
  double m2 = 0.0;
  for (double v : x) m2 += (v - m) * (v - m);
  return std::sqrt(m2 / static_cast<double>(x.size()));
}

double excess_kurtosis(std::span<const double> x) {
  if (x.size() < 4) throw DataError("excess_kurtosis: need at least four samples");
  const double m = mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - m) * (v - m);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(x.size());
  m4 /= static_cast<double>(x.size());
  if (!(m2 > 0.0)) throw DataError("excess_kurtosis: degenerate series (zero variance)");
  return m4 / (m2 * m2) - 3.0;
}

std::vector<double> acf_squared(std::span<const double> x, std::size_t max_lag) {
  if (x.size() <= max_lag + 1) throw DataError("acf_squared: series too short for requested lags");
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
  const double m = mean(sq);
  double denom = 0.0;
  for (double v : sq) denom += (v - m) * (v - m);
  if (!(denom > 0.0)) throw DataError("acf_squared: degenerate series (zero variance of squares)");
  std::vector<double> out(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double num = 0.0;
    for (std::size_t i = 0; i + lag < sq.size(); ++i) num += (sq[i] - m) * (sq[i + lag] - m);
    out[lag - 1] = num / denom;
  }
  return out;
}

StylizedRun stylized_run(std::span<const Price> mid_series, Tick interval, Tick warmup_end) {
  const Tick last = static_cast<Tick>(mid_series.size()) - 1;
  const ReturnSeries r = compute_returns(mid_series, interval, warmup_end + 1, last, warmup_end);
  StylizedRun s;
  s.std_returns = standard_deviation(r.values);
  s.kurtosis = excess_kurtosis(r.values);
  const auto acf = acf_squared(r.values, kAcfLags);
  std::copy(acf.begin(), acf.end(), s.acf_sq.begin());
  return s;
}

StylizedReport stylized_report(MarketConfig cfg, std::span<const std::uint64_t> seeds, Tick horizon, Tick interval,
                               unsigned workers) {
  if (seeds.size() < 2) throw DataError("stylized_report: need at least two seeds");
  if (horizon > 0) cfg.end_tick = horizon;
  cfg.validate();

  std::vector<std::optional<StylizedRun>> runs(seeds.size());
  std::vector<std::string> errors(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    const MarketRecord rec = run_simulation(cfg, seeds[i], std::nullopt);
    try {
      runs[i] = stylized_run(rec.mid_series, interval, cfg.order_lifetime);
    } catch (const DataError& e) {
      errors[i] = e.what();
    }
  });

  StylizedReport rep;
  rep.horizon = cfg.end_tick;
  rep.interval = interval;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!runs[i]) {
      rep.excluded.emplace_back(seeds[i], errors[i]);
      continue;
    }
    rep.seeds.push_back(seeds[i]);
    rep.std_returns += runs[i]->std_returns;
    rep.kurtosis += runs[i]->kurtosis;
    for (std::size_t k = 0; k < kAcfLags; ++k) rep.acf_sq[k] += runs[i]->acf_sq[k];
  }
  rep.n_runs = rep.seeds.size();
  if (rep.n_runs == 0) throw DataError("stylized_report: every run was degenerate");
  const double n = static_cast<double>(rep.n_runs);
  rep.std_returns /= n;
  rep.kurtosis /= n;
  for (double& a : rep.acf_sq) a /= n;
  return rep;
}

}  // namespace mmsim
