#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synthgame/tabular.hpp"

namespace synthgame {

struct StatsSummary {
    double mean = 0.0;
    double std_dev = 0.0; // population
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

/// Normalized histogram: continuous/date columns use bin_edges (size
/// bins+1), categorical columns use the schema level list. Masses sum to 1.
struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::string> levels;
    std::vector<double> masses;

    bool same_bins(const Histogram& other) const {
        return bin_edges == other.bin_edges && levels == other.levels;
    }
};

/// Population std; quantiles by linear interpolation between order
/// statistics (inclusive method).
StatsSummary descriptive_stats(const std::vector<double>& values);

/// Pearson correlation of fractional (average-tie) ranks. Returns 0 when
/// either variable is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Square root of the Jensen-Shannon divergence, log base 2, so the result
/// is 0 for identical histograms and 1 for disjoint supports.
double js_distance(const Histogram& p, const Histogram& q);

/// 1 - D with D the two-sample Kolmogorov-Smirnov statistic.
double ks_score(const std::vector<double>& a, const std::vector<double>& b);

/// Chi-squared similarity mapped to [0,1] via the p-value of the statistic
/// (regularized upper incomplete gamma). Expected counts are
/// reference * total_observed; levels with E=0,O=0 are dropped; E=0 with
/// O>0 yields 0; a single usable level yields 1 by convention.
double chi2_score(const std::vector<double>& observed_counts,
                  const std::vector<double>& reference_frequencies);

/// Number of equal-width bins for continuous/date histograms.
inline constexpr size_t kHistogramBins = 20;

/// Categorical: level-frequency masses over the schema levels.
/// Continuous/date: 20 equal-width bins over shared_range (or the column's
/// own extrema), last bin right-closed.
Histogram histogram(const std::vector<Cell>& values, const ColumnSpec& spec,
                    std::optional<std::pair<double, double>> shared_range = {});

/// Regularized upper incomplete gamma Q(a, x); the chi2 p-value kernel.
double regularized_gamma_q(double a, double x);

} // namespace synthgame
