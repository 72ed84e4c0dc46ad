#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mmsim/market.hpp"

namespace mmsim {

// Log returns ln(P[t] / P[t - interval]) at the end of each full interval of
// the inclusive tick window [first, last].
struct ReturnSeries {
  Tick interval{100};
  Tick first{0};
  Tick last{0};
  std::vector<double> values;
};

// Throws DataError if fewer than two sample points fit in the window, if the
// window lies entirely before warmup_end, or if it exceeds the series.
ReturnSeries compute_returns(std::span<const Price> mid_series, Tick interval, Tick first, Tick last,
                             Tick warmup_end = 0);

// Population standard deviation.
double standard_deviation(std::span<const double> x);

// m4 / m2^2 - 3 from central moments. Throws DataError on zero variance or
// fewer than four samples.
double excess_kurtosis(std::span<const double> x);

// Sample autocorrelation of x^2 at lags 1..max_lag. Throws DataError when the
// squared series has zero variance or is too short.
std::vector<double> acf_squared(std::span<const double> x, std::size_t max_lag = 5);

inline constexpr std::size_t kAcfLags = 5;

struct StylizedReport {
  double std_returns{0.0};
  double kurtosis{0.0};
  std::array<double, kAcfLags> acf_sq{};
  std::size_t n_runs{0};
  Tick horizon{0};
  Tick interval{100};
  std::vector<std::uint64_t> seeds;                            // seeds that contributed
  std::vector<std::pair<std::uint64_t, std::string>> excluded; // degenerate runs and why
};

struct StylizedRun {
  double std_returns{0.0};
  double kurtosis{0.0};
  std::array<double, kAcfLags> acf_sq{};
};

StylizedRun stylized_run(std::span<const Price> mid_series, Tick interval, Tick warmup_end);

// No-AI-agent runs for each seed, simulated to `horizon` (0 keeps the
// configured end tick), statistics over (order_lifetime, horizon] and
// averaged. Degenerate runs are listed in `excluded`; throws DataError if
// fewer than one run survives or fewer than two seeds are given.
StylizedReport stylized_report(MarketConfig cfg, std::span<const std::uint64_t> seeds, Tick horizon = 0,
                               Tick interval = 100, unsigned workers = 1);

}  // namespace mmsim
