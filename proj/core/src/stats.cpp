#include "synthgame/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace synthgame {

namespace {

void require_finite(const std::vector<double>& values) {
    for (double v : values)
        if (!std::isfinite(v)) throw Error(Errc::non_finite_value, "input contains a non-finite value");
}

double quantile_inclusive(const std::vector<double>& sorted, double q) {
    double pos = q * double(sorted.size() - 1);
    size_t lo = size_t(std::floor(pos));
    size_t hi = size_t(std::ceil(pos));
    double frac = pos - double(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Fractional ranks, 1-based, ties get the average of their rank range.
std::vector<double> fractional_ranks(const std::vector<double>& values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = 0.5 * double(i + j) + 1.0; // mean of ranks i+1 .. j+1
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

} // namespace

StatsSummary descriptive_stats(const std::vector<double>& values) {
    if (values.empty()) throw Error(Errc::empty_input, "descriptive_stats of nothing");
    require_finite(values);
    StatsSummary s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / double(values.size());
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(var / double(values.size()));
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.q25 = quantile_inclusive(sorted, 0.25);
    s.median = quantile_inclusive(sorted, 0.50);
    s.q75 = quantile_inclusive(sorted, 0.75);
    return s;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(Errc::length_mismatch, "spearman inputs differ in length");
    if (x.size() < 2) throw Error(Errc::too_few, "spearman needs at least 2 observations");
    require_finite(x);
    require_finite(y);
    return pearson(fractional_ranks(x), fractional_ranks(y));
}

double js_distance(const Histogram& p, const Histogram& q) {
    if (!p.same_bins(q) || p.masses.size() != q.masses.size())
        throw Error(Errc::bin_mismatch, "histograms are over different bins");
    auto term = [](double a, double m) {
        if (a == 0.0) return 0.0; // 0 log 0 = 0
        return a * std::log2(a / m);
    };
    double div = 0.0;
    for (size_t i = 0; i < p.masses.size(); ++i) {
        double m = 0.5 * (p.masses[i] + q.masses[i]);
        if (m == 0.0) continue;
        div += 0.5 * term(p.masses[i], m) + 0.5 * term(q.masses[i], m);
    }
    div = std::clamp(div, 0.0, 1.0);
    return std::sqrt(div);
}

double ks_score(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw Error(Errc::empty_input, "ks_score of an empty sample");
    require_finite(a);
    require_finite(b);
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    // sweep the merged order, tracking the ECDF gap after each value
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == v) ++i;
        while (j < sb.size() && sb[j] == v) ++j;
        double gap = std::abs(double(i) / double(sa.size()) - double(j) / double(sb.size()));
        d = std::max(d, gap);
    }
    d = std::max(d, std::abs(1.0 - double(j) / double(sb.size())));
    d = std::max(d, std::abs(1.0 - double(i) / double(sa.size())));
    return 1.0 - d;
}

double chi2_score(const std::vector<double>& observed_counts,
                  const std::vector<double>& reference_frequencies) {
    if (observed_counts.size() != reference_frequencies.size())
        throw Error(Errc::level_mismatch, "observed and reference level sets differ");
    if (observed_counts.empty()) throw Error(Errc::empty_input, "chi2_score over no levels");
    double ref_sum = std::accumulate(reference_frequencies.begin(), reference_frequencies.end(), 0.0);
    if (std::abs(ref_sum - 1.0) > 1e-9)
        throw Error(Errc::level_mismatch, "reference frequencies must sum to 1");
    double total = std::accumulate(observed_counts.begin(), observed_counts.end(), 0.0);
    if (total <= 0.0) throw Error(Errc::empty_input, "no observed counts");

    double statistic = 0.0;
    size_t used_levels = 0;
    for (size_t i = 0; i < observed_counts.size(); ++i) {
        double expected = reference_frequencies[i] * total;
        if (expected == 0.0) {
            if (observed_counts[i] > 0.0) return 0.0; // impossible event observed
            continue;
        }
        ++used_levels;
        double diff = observed_counts[i] - expected;
        statistic += diff * diff / expected;
    }
    if (used_levels <= 1) return 1.0; // degenerate df
    double df = double(used_levels - 1);
    return regularized_gamma_q(df / 2.0, statistic / 2.0);
}

Histogram histogram(const std::vector<Cell>& values, const ColumnSpec& spec,
                    std::optional<std::pair<double, double>> shared_range) {
    if (values.empty()) throw Error(Errc::empty_input, "histogram of an empty column");
    Histogram h;
    if (spec.kind == ColumnKind::categorical) {
        h.levels = spec.levels;
        h.masses.assign(spec.levels.size(), 0.0);
        for (const Cell& cell : values) {
            if (cell.is_missing()) throw Error(Errc::missing_value, "missing value in histogram input");
            h.masses[size_t(cell.cat_index())] += 1.0;
        }
        for (double& m : h.masses) m /= double(values.size());
        return h;
    }

    std::vector<double> nums;
    nums.reserve(values.size());
    for (const Cell& cell : values) {
        if (cell.is_missing()) throw Error(Errc::missing_value, "missing value in histogram input");
        nums.push_back(cell.as_double());
    }
    double lo, hi;
    if (shared_range) {
        lo = shared_range->first;
        hi = shared_range->second;
    } else {
        auto [mn, mx] = std::minmax_element(nums.begin(), nums.end());
        lo = *mn;
        hi = *mx;
    }
    h.bin_edges.resize(kHistogramBins + 1);
    double width = (hi - lo) / double(kHistogramBins);
    for (size_t i = 0; i <= kHistogramBins; ++i) h.bin_edges[i] = lo + width * double(i);
    h.bin_edges.back() = hi;

    h.masses.assign(kHistogramBins, 0.0);
    for (double v : nums) {
        size_t bin;
        if (width <= 0.0) {
            bin = 0; // degenerate range: all mass in the first bin
        } else {
            bin = size_t(std::min(std::floor((v - lo) / width), double(kHistogramBins - 1)));
        }
        h.masses[bin] += 1.0;
    }
    for (double& m : h.masses) m /= double(nums.size());
    return h;
}

// Regularized incomplete gamma, series for x < a+1 and continued fraction
// otherwise (Lentz). Converges fast for chi2-scale arguments.
double regularized_gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw Error(Errc::invalid_argument, "gamma_q domain");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, return 1 - P
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - lg);
        return std::clamp(1.0 - p, 0.0, 1.0);
    }
    // Q(a,x) by continued fraction
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    double q = std::exp(-x + a * std::log(x) - lg) * h;
    return std::clamp(q, 0.0, 1.0);
}

} // namespace synthgame
