#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "synthgame/rng.hpp"
#include "synthgame/stats.hpp"

using namespace synthgame;

namespace {

// independent rank oracle: average rank = (#smaller) + (#equal + 1) / 2
std::vector<double> oracle_ranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        size_t less = 0, equal = 0;
        for (size_t j = 0; j < v.size(); ++j) {
            less += v[j] < v[i];
            equal += v[j] == v[i];
        }
        ranks[i] = double(less) + (double(equal) + 1.0) / 2.0;
    }
    return ranks;
}

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(y.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return oracle_pearson(oracle_ranks(x), oracle_ranks(y));
}

// brute-force sup of the ECDF gap over every sample point
double oracle_ks_d(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> points = a;
    points.insert(points.end(), b.begin(), b.end());
    double d = 0.0;
    for (double p : points) {
        size_t ca = 0, cb = 0;
        for (double v : a) ca += v <= p;
        for (double v : b) cb += v <= p;
        d = std::max(d, std::abs(double(ca) / double(a.size()) - double(cb) / double(b.size())));
    }
    return d;
}

// upper regularized gamma by closed form: integer a via the Poisson sum,
// half-integer a via erfc plus the recurrence Q(a+1,x) = Q(a,x) + x^a e^-x / Gamma(a+1)
double oracle_gamma_q(double a, double x) {
    if (std::abs(a - std::round(a)) < 1e-12) {
        double q = std::exp(-x);
        double term = std::exp(-x);
        for (int k = 1; k < int(std::round(a)); ++k) {
            term *= x / double(k);
            q += term;
        }
        return q;
    }
    double q = std::erfc(std::sqrt(x));
    double base = 0.5;
    while (base + 1.0 <= a + 1e-12) {
        q += std::pow(x, base) * std::exp(-x - std::lgamma(base + 1.0));
        base += 1.0;
    }
    return q;
}

Histogram make_hist(std::vector<double> masses) {
    Histogram h;
    h.levels.resize(masses.size());
    for (size_t i = 0; i < masses.size(); ++i) h.levels[i] = "l" + std::to_string(i);
    h.masses = std::move(masses);
    return h;
}

} // namespace

TEST_CASE("descriptive_stats on spec examples") {
    auto constant = descriptive_stats({2, 2, 2});
    CHECK(constant.mean == 2.0);
    CHECK(constant.std_dev == 0.0);
    CHECK(constant.median == 2.0);
    CHECK(constant.q25 == 2.0);
    CHECK(constant.q75 == 2.0);

    auto four = descriptive_stats({1, 2, 3, 4});
    CHECK(four.median == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(four.q25 == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(four.q75 == doctest::Approx(3.25).epsilon(1e-12));

    auto two = descriptive_stats({0, 10});
    CHECK(two.mean == 5.0);
    CHECK(two.std_dev == 5.0); // population std

    CHECK_THROWS_AS(descriptive_stats({}), Error);
}

TEST_CASE("descriptive_stats quantile ordering holds on random input") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = 1 + rng.uniform_below(40);
        std::vector<double> v(n);
        for (auto& x : v) x = std::round(rng.normal() * 10.0);
        auto s = descriptive_stats(v);
        CHECK(s.q25 <= s.median);
        CHECK(s.median <= s.q75);
        CHECK(s.std_dev >= 0.0);
    }
}

TEST_CASE("spearman on spec examples") {
    CHECK(spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(spearman({5, 1, 9, 4}, {5, 1, 9, 4}) == doctest::Approx(1.0).epsilon(1e-12));
    double with_ties = spearman({1, 2, 2, 3}, {1, 2, 3, 3});
    CHECK(with_ties == doctest::Approx(oracle_spearman({1, 2, 2, 3}, {1, 2, 3, 3})).epsilon(1e-12));
    CHECK(spearman({1, 1, 1}, {1, 2, 3}) == 0.0); // constant input
    CHECK_THROWS_AS(spearman({1, 2}, {1}), Error);
    CHECK_THROWS_AS(spearman({1}, {1}), Error);
}

TEST_CASE("spearman matches the rank-then-pearson oracle on random ties") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = 2 + rng.uniform_below(30);
        std::vector<double> x(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = double(rng.uniform_below(8)); // heavy ties
            y[i] = double(rng.uniform_below(8));
        }
        double expected = oracle_spearman(x, y);
        CHECK(spearman(x, y) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("spearman is exactly invariant under strictly increasing transforms") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = 3 + rng.uniform_below(20);
        std::vector<double> x(n), y(n), tx(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
            tx[i] = std::exp(x[i]) * 3.0 + 7.0; // strictly increasing in x
        }
        CHECK(spearman(x, y) == spearman(tx, y));
    }
}

TEST_CASE("js_distance on spec examples") {
    auto p = make_hist({0.5, 0.5});
    CHECK(js_distance(p, p) == 0.0);

    CHECK(js_distance(make_hist({1, 0}), make_hist({0, 1})) == doctest::Approx(1.0).epsilon(1e-12));

    // direct formula: jsd = 0.5*kl(p||m) + 0.5*kl(q||m), log2
    auto q = make_hist({1.0, 0.0});
    double m0 = 0.75, m1 = 0.25;
    double expected = std::sqrt(0.5 * (0.5 * std::log2(0.5 / m0) + 0.5 * std::log2(0.5 / m1)) +
                                0.5 * (1.0 * std::log2(1.0 / m0)));
    CHECK(js_distance(p, q) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(js_distance(p, q) == doctest::Approx(0.5579).epsilon(1e-4));

    auto r3 = make_hist({0.2, 0.3, 0.5});
    CHECK_THROWS_AS(js_distance(p, r3), Error);
}

TEST_CASE("js_distance is a symmetric bounded metric on random histograms") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        size_t bins = 2 + rng.uniform_below(6);
        auto sample_hist = [&] {
            std::vector<double> m(bins);
            double total = 0;
            for (auto& v : m) {
                v = rng.uniform01();
                total += v;
            }
            for (auto& v : m) v /= total;
            return make_hist(m);
        };
        auto a = sample_hist(), b = sample_hist(), c = sample_hist();
        double ab = js_distance(a, b), ba = js_distance(b, a);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        // triangle inequality of the JS *distance* (sqrt of divergence)
        CHECK(js_distance(a, c) <= ab + js_distance(b, c) + 1e-12);
    }
}

TEST_CASE("ks_score on spec examples") {
    CHECK(ks_score({1, 2, 3}, {1, 2, 3}) == 1.0);
    CHECK(ks_score({0, 0, 0}, {1, 1, 1}) == 0.0);
    CHECK(ks_score({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(ks_score({}, {1}), Error);
}

TEST_CASE("ks statistic equals the brute-force ECDF oracle") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        size_t na = 1 + rng.uniform_below(50), nb = 1 + rng.uniform_below(50);
        std::vector<double> a(na), b(nb);
        for (auto& v : a) v = double(rng.uniform_below(12));
        for (auto& v : b) v = double(rng.uniform_below(12));
        double expected = 1.0 - oracle_ks_d(a, b);
        CHECK(ks_score(a, b) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("chi2_score on spec examples") {
    // observed proportional to reference: statistic 0, score 1
    CHECK(chi2_score({30, 70}, {0.3, 0.7}) == doctest::Approx(1.0).epsilon(1e-12));

    // statistic 10 on df 1
    double score = chi2_score({10, 0}, {0.5, 0.5});
    CHECK(score == doctest::Approx(std::erfc(std::sqrt(5.0))).epsilon(1e-9));
    CHECK(score == doctest::Approx(0.001565).epsilon(1e-3));

    // impossible event observed
    CHECK(chi2_score({5, 1}, {1.0, 0.0}) == 0.0);
    // single usable level
    CHECK(chi2_score({5}, {1.0}) == 1.0);
    // E=0, O=0 level is dropped
    CHECK(chi2_score({5, 0, 5}, {0.5, 0.0, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(chi2_score({1, 2}, {0.5}), Error);
    CHECK_THROWS_AS(chi2_score({1, 2}, {0.7, 0.7}), Error);
}

TEST_CASE("regularized gamma agrees with the closed-form oracle") {
    for (double a : {0.5, 1.0, 1.5, 2.0, 3.5, 5.0, 8.0, 10.5}) {
        for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 60.0}) {
            CHECK(regularized_gamma_q(a, x) ==
                  doctest::Approx(oracle_gamma_q(a, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("chi2_score is monotone in the statistic for fixed df") {
    // score as a function of the statistic via gamma_q directly
    for (size_t levels : {2, 4, 7}) {
        double df = double(levels - 1);
        double previous = 1.0;
        for (double stat = 0.0; stat <= 40.0; stat += 0.5) {
            double score = regularized_gamma_q(df / 2.0, stat / 2.0);
            CHECK(score <= previous + 1e-12);
            previous = score;
        }
    }
}

TEST_CASE("histogram masses behave") {
    ColumnSpec cat{"c", ColumnKind::categorical, {"a", "b", "c"}, false, false};
    std::vector<Cell> cells(5, Cell::cat(0));
    auto h = histogram(cells, cat);
    CHECK(h.masses == std::vector<double>{1.0, 0.0, 0.0});

    ColumnSpec num{"x", ColumnKind::continuous, {}, false, false};
    std::vector<Cell> values;
    for (int i = 0; i < 20; ++i) values.push_back(Cell::num(double(i)));
    auto h20 = histogram(values, num, std::pair{0.0, 20.0});
    CHECK(h20.masses.size() == kHistogramBins);
    for (double m : h20.masses) CHECK(m == doctest::Approx(0.05).epsilon(1e-12));

    // value at the range max lands in the last bin
    auto top = histogram({Cell::num(20.0)}, num, std::pair{0.0, 20.0});
    CHECK(top.masses.back() == 1.0);

    CHECK_THROWS_AS(histogram({}, num), Error);
    CHECK_THROWS_AS(histogram({Cell::missing()}, num), Error);
}

TEST_CASE("histogram masses sum to one on random inputs") {
    Rng rng(29);
    ColumnSpec num{"x", ColumnKind::continuous, {}, false, false};
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = 1 + rng.uniform_below(200);
        std::vector<Cell> cells;
        for (size_t i = 0; i < n; ++i) cells.push_back(Cell::num(rng.normal()));
        auto h = histogram(cells, num);
        double total = 0;
        for (double m : h.masses) {
            CHECK(m >= 0.0);
            total += m;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}
