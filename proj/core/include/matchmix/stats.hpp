#pragma once

#include <cstdint>
#include <vector>

namespace matchmix::stats {

struct ChiSquare {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of counts against probabilities. Cells with expected
// count below min_expected are pooled into one cell.
ChiSquare chi_square(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                     double min_expected = 5.0);

struct MeanSe {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

MeanSe mean_se(const std::vector<double>& xs);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace matchmix::stats
