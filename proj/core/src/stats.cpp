#include "matchmix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace matchmix::stats {

ChiSquare chi_square(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                     double min_expected) {
  if (observed.size() != probs.size()) throw std::invalid_argument("observed and probs differ in size");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (total == 0) throw std::invalid_argument("no observations");
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double pool_o = 0.0, pool_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double e = probs[i] * total;
    double o = static_cast<double>(observed[i]);
    if (e < min_expected) {
      pool_o += o;
      pool_e += e;
    } else {
      cells.emplace_back(o, e);
    }
  }
  if (pool_e > 0.0 || pool_o > 0.0) cells.emplace_back(pool_o, pool_e);
  ChiSquare r;
  for (auto [o, e] : cells) {
    if (e <= 0.0) {
      if (o > 0.0) {
        r.statistic = INFINITY;
        r.dof = static_cast<std::int64_t>(cells.size()) - 1;
        r.p_value = 0.0;
        return r;
      }
      continue;
    }
    r.statistic += (o - e) * (o - e) / e;
  }
  r.dof = static_cast<std::int64_t>(cells.size()) - 1;
  if (r.dof < 1) return r;
  boost::math::chi_squared dist(static_cast<double>(r.dof));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  r.count = xs.size();
  if (xs.empty()) return r;
  const double m = static_cast<double>(xs.size());
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / (m - 1));
    r.se = r.sd / std::sqrt(m);
  }
  return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  const double en = std::sqrt(na * nb / (na + nb));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  // Kolmogorov tail series.
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    if (std::fabs(term) < 1e-12) break;
  }
  r.p_value = lambda < 1e-3 ? 1.0 : std::clamp(p, 0.0, 1.0);
  return r;
}

}  // namespace matchmix::stats
