#ifndef LERW_STATS_HPP
#define LERW_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lerw/erasure.hpp"
#include "lerw/geometry.hpp"
#include "lerw/loewner.hpp"
#include "lerw/parallel.hpp"
#include "lerw/walk.hpp"

namespace lerw {

namespace detail {

/// Sum in sorted order, so the result does not depend on input order.
inline double ordered_sum(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace detail

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Kolmogorov survival function Q(z) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 z^2).
inline double kolmogorov_survival(double z) {
  if (!(z > 0.0)) return 1.0;
  if (z < 1.18) {
    // Jacobi-transformed series, fast for small z.
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * z * z));
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / z * (y + std::pow(y, 9) + std::pow(y, 25) + std::pow(y, 49));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  const double x = std::exp(-2.0 * z * z);
  return std::clamp(2.0 * (x - std::pow(x, 4) + std::pow(x, 9)), 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

inline double ks_pvalue(double d, double effective_n) {
  const double s = std::sqrt(effective_n);
  return kolmogorov_survival((s + 0.12 + 0.11 / s) * d);
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_pvalue(d, na * nb / (na + nb))};
}

/// One-sample test against the standard normal law.
inline KsResult ks_normal(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("ks_normal: empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_pvalue(d, n)};
}

/// Equally spaced capacities lo, ..., hi.
inline std::vector<double> capacity_grid(double lo = 0.05, double hi = 1.0, std::size_t points = 20) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("capacity_grid: need 0 < lo < hi and >= 2 points");
  std::vector<double> g(points);
  for (std::size_t j = 0; j < points; ++j)
    g[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(points - 1);
  return g;
}

struct EnsembleSummary {
  std::size_t samples = 0;
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> var;
  /// Standard error of the mean at each grid point.
  std::vector<double> se;
  /// Normal KS statistic of theta(t)/sqrt(kappa_hat t); NaN when kappa_hat = 0.
  std::vector<double> ks;
  std::vector<double> ks_p;
  double kappa_hat = 0.0;
  /// Leave-one-out jackknife standard error of kappa_hat.
  double kappa_se = 0.0;
  double kappa_lo = 0.0;
  double kappa_hi = 0.0;
  /// Pooled lag-1 correlation of grid increments.
  double increment_autocorrelation = 0.0;
};

inline constexpr std::size_t kMinEnsemble = 30;

/// Variance-slope summary of theta over a capacity grid. kappa_hat is the
/// least-squares slope of Var theta(t) against t through the origin; its
/// interval is kappa_hat +- 2 jackknife standard errors.
inline EnsembleSummary driver_ensemble_stats(const std::vector<DrivingFunction>& drivers, std::vector<double> grid) {
  if (drivers.size() < kMinEnsemble)
    throw std::invalid_argument("driver_ensemble_stats: need at least " + std::to_string(kMinEnsemble) +
                                " samples (got " + std::to_string(drivers.size()) + ")");
  if (grid.empty()) throw std::invalid_argument("driver_ensemble_stats: empty grid");
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0.0)) throw std::invalid_argument("driver_ensemble_stats: grid must be positive");
  const double tmax = grid.back();
  for (std::size_t i = 0; i < drivers.size(); ++i)
    if (drivers[i].horizon() < tmax)
      throw std::invalid_argument("driver_ensemble_stats: sample " + std::to_string(i) + " has horizon " +
                                  std::to_string(drivers[i].horizon()) + " < " + std::to_string(tmax));

  const std::size_t n = drivers.size();
  const std::size_t m = grid.size();
  const double nd = static_cast<double>(n);
  // theta[j][i]: sample i at grid point j.
  std::vector<std::vector<double>> theta(m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) theta[j][i] = drivers[i].angle_at(grid[j]);

  EnsembleSummary s;
  s.samples = n;
  s.grid = grid;
  s.mean.resize(m);
  s.var.resize(m);
  s.se.resize(m);
  s.ks.assign(m, std::numeric_limits<double>::quiet_NaN());
  s.ks_p.assign(m, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> sum1(m);
  std::vector<double> sum2(m);
  for (std::size_t j = 0; j < m; ++j) {
    sum1[j] = detail::ordered_sum(theta[j]);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = theta[j][i] * theta[j][i];
    sum2[j] = detail::ordered_sum(sq);
    s.mean[j] = sum1[j] / nd;
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = (theta[j][i] - s.mean[j]) * (theta[j][i] - s.mean[j]);
    s.var[j] = detail::ordered_sum(dev) / (nd - 1.0);
    s.se[j] = std::sqrt(s.var[j] / nd);
  }

  double tt = 0.0;
  for (double t : grid) tt += t * t;
  auto slope = [&](const std::vector<double>& v) {
    double tv = 0.0;
    for (std::size_t j = 0; j < m; ++j) tv += grid[j] * v[j];
    return tv / tt;
  };
  s.kappa_hat = slope(s.var);

  // Leave-one-out variances from the running sums.
  std::vector<double> loo(n);
  std::vector<double> v(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double x = theta[j][i];
      const double s1 = sum1[j] - x;
      const double s2 = sum2[j] - x * x;
      v[j] = std::max(0.0, (s2 - s1 * s1 / (nd - 1.0)) / (nd - 2.0));
    }
    loo[i] = slope(v);
  }
  const double loo_mean = detail::ordered_sum(loo) / nd;
  std::vector<double> loo_dev(n);
  for (std::size_t i = 0; i < n; ++i) loo_dev[i] = (loo[i] - loo_mean) * (loo[i] - loo_mean);
  s.kappa_se = std::sqrt((nd - 1.0) / nd * detail::ordered_sum(loo_dev));
  s.kappa_lo = s.kappa_hat - 2.0 * s.kappa_se;
  s.kappa_hi = s.kappa_hat + 2.0 * s.kappa_se;

  if (s.kappa_hat > 0.0) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> z(n);
      const double scale = std::sqrt(s.kappa_hat * grid[j]);
      for (std::size_t i = 0; i < n; ++i) z[i] = theta[j][i] / scale;
      const auto r = ks_normal(std::move(z));
      s.ks[j] = r.statistic;
      s.ks_p[j] = r.p_value;
    }
  }

  if (m >= 3) {
    std::vector<double> xs, ys, xx, yy, xy;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j + 2 < m; ++j) {
        const double a = theta[j + 1][i] - theta[j][i];
        const double b = theta[j + 2][i] - theta[j + 1][i];
        xs.push_back(a);
        ys.push_back(b);
        xx.push_back(a * a);
        yy.push_back(b * b);
        xy.push_back(a * b);
      }
    const double k = static_cast<double>(xs.size());
    const double mx = detail::ordered_sum(xs) / k;
    const double my = detail::ordered_sum(ys) / k;
    const double cov = detail::ordered_sum(xy) / k - mx * my;
    const double vx = detail::ordered_sum(xx) / k - mx * mx;
    const double vy = detail::ordered_sum(yy) / k - my * my;
    s.increment_autocorrelation = vx > 0.0 && vy > 0.0 ? cov / std::sqrt(vx * vy) : 0.0;
  }
  return s;
}

struct QuasiLoopWitness {
  std::size_t curve = 0;
  QuasiLoop loop;
};

struct QuasiLoopFrequency {
  double fraction = 0.0;
  std::vector<QuasiLoopWitness> witnesses;
};

inline QuasiLoopFrequency quasi_loop_frequency(const std::vector<Curve>& curves, double alpha, double beta) {
  QuasiLoopFrequency out;
  if (curves.empty()) return out;
  for (std::size_t i = 0; i < curves.size(); ++i)
    if (auto q = quasi_loop_detect(curves[i], alpha, beta)) out.witnesses.push_back({i, *q});
  out.fraction = static_cast<double>(out.witnesses.size()) / static_cast<double>(curves.size());
  return out;
}

struct ReversalReport {
  std::size_t samples = 0;
  KsResult angle;
  KsResult length;
};

/// Loop-erasures of forward walks against loop-erasures of reversed walks,
/// drawn from independent streams. With self_test both batches are forward.
inline ReversalReport reversal_law_test(const EmbeddedGraph& g, const Domain& d, std::size_t n_samples,
                                        std::uint64_t seed, unsigned threads = default_thread_count(),
                                        bool self_test = false) {
  if (n_samples < 1) throw std::invalid_argument("reversal_law_test: need at least one sample");
  struct Features {
    double angle;
    double length;
  };
  auto batch = [&](const char* tag, bool reversed) {
    const std::uint64_t stream = derive_seed(seed, tag);
    auto results = parallel_replicas(n_samples, threads, [&](std::size_t i) {
      const auto w = run_walk(g, g.origin(), d, replica_seed(stream, i));
      const auto c = reversed ? lerw_of_reversal(w, g) : lerw_forward(w, g);
      double len = 0.0;
      for (std::size_t k = 0; k + 1 < c.curve.size(); ++k) len += std::abs(c.curve.points[k + 1] - c.curve.points[k]);
      return Features{std::arg(w.exit_point), len};
    });
    std::vector<double> angles, lengths;
    for (auto& r : results) {
      if (!r.ok()) throw WalkError(r.error);
      angles.push_back(r.value->angle);
      lengths.push_back(r.value->length);
    }
    return std::pair{angles, lengths};
  };
  auto [fa, fl] = batch("forward", false);
  auto [ra, rl] = self_test ? batch("forward-2", false) : batch("reversal", true);
  ReversalReport rep;
  rep.samples = n_samples;
  rep.angle = ks_two_sample(std::move(fa), std::move(ra));
  rep.length = ks_two_sample(std::move(fl), std::move(rl));
  return rep;
}

struct LerwEnsembleOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
  std::vector<double> grid = capacity_grid();
  ExtractOptions extract{};
  WalkOptions walk{};
};

struct SampleFailure {
  std::size_t index = 0;
  std::string message;
};

struct LerwEnsemble {
  std::vector<DrivingFunction> drivers;
  /// Samples whose walk or extraction threw.
  std::vector<SampleFailure> skipped;
  /// Samples whose capacity horizon fell short of the grid.
  std::size_t excluded = 0;
  std::optional<EnsembleSummary> summary;
};

/// LERW samples from the origin to the boundary of d, rescaled to the unit
/// disc, zipped only up to the end of the grid, then summarized.
inline LerwEnsemble lerw_driver_ensemble(const EmbeddedGraph& g, const Domain& d, const LerwEnsembleOptions& opt) {
  if (opt.grid.empty()) throw std::invalid_argument("lerw_driver_ensemble: empty grid");
  require_extends_beyond(g, d);
  const double tmax = *std::max_element(opt.grid.begin(), opt.grid.end());
  ExtractOptions ex = opt.extract;
  ex.max_capacity = std::min(ex.max_capacity, tmax);
  const double scale = 1.0 / d.radius();
  auto results = parallel_replicas(opt.samples, opt.threads, [&](std::size_t i) {
    auto c = sample_lerw(g, g.origin(), d, replica_seed(opt.seed, i), opt.walk).curve;
    for (auto& p : c.points) p *= scale;
    return extract_driving(c, ex);
  });
  LerwEnsemble out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      out.skipped.push_back({i, results[i].error});
      continue;
    }
    if (results[i].value->horizon() < tmax) {
      ++out.excluded;
      continue;
    }
    out.drivers.push_back(std::move(*results[i].value));
  }
  if (out.drivers.size() >= kMinEnsemble) out.summary = driver_ensemble_stats(out.drivers, opt.grid);
  return out;
}

}  // namespace lerw

#endif  // LERW_STATS_HPP
