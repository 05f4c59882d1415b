#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "synthgame/generators.hpp"
#include "synthgame/stats.hpp"
#include "synthgame/toy.hpp"

using namespace synthgame;

namespace {

Table numeric_pair(const std::vector<double>& x, const std::vector<double>& y) {
    Schema schema({{"x", ColumnKind::continuous, {}, false, false},
                   {"y", ColumnKind::continuous, {}, false, false}});
    std::vector<std::vector<Cell>> rows;
    std::vector<RecordId> ids;
    for (size_t i = 0; i < x.size(); ++i) {
        rows.push_back({Cell::num(x[i]), Cell::num(y[i])});
        ids.push_back(RecordId(i));
    }
    return Table(schema, rows, ids);
}

} // namespace

TEST_CASE("fit_independent point-mass categorical samples that level forever") {
    Schema schema({{"c", ColumnKind::categorical, {"only"}, false, false}});
    Table train(schema, {{Cell::cat(0)}, {Cell::cat(0)}}, {0, 1});
    GenModel model = fit_independent(train);
    Rng rng(9);
    Table sampled = sample(model, 100, rng);
    for (const auto& row : sampled.rows()) CHECK(row[0].cat_index() == 0);
}

TEST_CASE("fit_independent marginals match the empirical distribution") {
    Schema schema({{"c", ColumnKind::categorical, {"a", "b"}, false, false},
                   {"x", ColumnKind::continuous, {}, false, false}});
    Table train(schema,
                {{Cell::cat(0), Cell::num(1)},
                 {Cell::cat(0), Cell::num(1)},
                 {Cell::cat(0), Cell::num(2)},
                 {Cell::cat(1), Cell::num(4)}},
                {0, 1, 2, 3});
    GenModel model = fit_independent(train);
    CHECK(model.marginals[0].level_frequencies == std::vector<double>{0.75, 0.25});
    // quantile table reproduces exactly the training values at their ranks
    CHECK(model.marginals[1].sorted_values == std::vector<double>{1, 1, 2, 4});
    Rng rng(4);
    Table sampled = sample(model, 500, rng);
    for (const auto& row : sampled.rows()) {
        double v = row[1].num_value();
        CHECK((v == 1.0 || v == 2.0 || v == 4.0));
    }
}

TEST_CASE("fit_copula latent correlation from perfect and zero rank correlation") {
    // perfectly rank-correlated pair: r = 2 sin(pi/6) = 1, clamped before flooring
    Table perfect = numeric_pair({1, 2, 3, 4, 5}, {10, 20, 30, 40, 50});
    GenModel model = fit_copula(perfect);
    CHECK(model.latent_correlation[1] == doctest::Approx(0.999999).epsilon(1e-9));

    // zero rank correlation maps to zero latent correlation
    Table flat = numeric_pair({1, 2, 3, 4}, {5, 5, 5, 5});
    GenModel zero = fit_copula(flat);
    CHECK(zero.latent_correlation[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit_copula builds a symmetric unit-diagonal matrix") {
    Rng rng(31);
    std::vector<double> a(50), b(50), c(50);
    for (size_t i = 0; i < 50; ++i) {
        a[i] = rng.normal();
        b[i] = 0.5 * a[i] + rng.normal();
        c[i] = rng.normal();
    }
    Schema schema({{"a", ColumnKind::continuous, {}, false, false},
                   {"b", ColumnKind::continuous, {}, false, false},
                   {"c", ColumnKind::continuous, {}, false, false}});
    std::vector<std::vector<Cell>> rows;
    std::vector<RecordId> ids;
    for (size_t i = 0; i < 50; ++i) {
        rows.push_back({Cell::num(a[i]), Cell::num(b[i]), Cell::num(c[i])});
        ids.push_back(RecordId(i));
    }
    GenModel model = fit_copula(Table(schema, rows, ids));
    for (size_t i = 0; i < 3; ++i) {
        CHECK(model.latent_correlation[i * 3 + i] == doctest::Approx(1.0).epsilon(1e-9));
        for (size_t j = 0; j < 3; ++j)
            CHECK(model.latent_correlation[i * 3 + j] ==
                  doctest::Approx(model.latent_correlation[j * 3 + i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fit_copula(numeric_pair({1, 2}, {3, 4})), Error);
}

TEST_CASE("copula sampling preserves a strong rank correlation") {
    Rng data_rng(77);
    size_t n = 5000;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = data_rng.normal();
        y[i] = 0.95 * x[i] + 0.31 * data_rng.normal(); // spearman ~ 0.93
    }
    Table train = numeric_pair(x, y);
    double train_rho = spearman(x, y);
    CHECK(train_rho >= 0.9);

    GenModel model = fit_copula(train);
    Rng rng(123);
    Table sampled = sample(model, 5000, rng);
    double sampled_rho = spearman(sampled.column_as_doubles(0), sampled.column_as_doubles(1));
    CHECK(sampled_rho >= 0.85);
    CHECK(std::abs(sampled_rho - train_rho) <= 0.1);
}

TEST_CASE("sample rejects n = 0 and never reuses training ids") {
    Table train = numeric_pair({1, 2, 3}, {4, 5, 6});
    GenModel model = fit_independent(train);
    Rng rng(1);
    CHECK_THROWS_AS(sample(model, 0, rng), Error);

    Table sampled = sample(model, 10, rng);
    std::set<RecordId> train_ids(train.row_ids().begin(), train.row_ids().end());
    for (RecordId id : sampled.row_ids()) CHECK(train_ids.count(id) == 0);
}

TEST_CASE("sampling is deterministic for a fixed model and seed") {
    ToyData toy = make_toy(500, 3);
    GenModel model = fit_copula(toy.table);
    Rng a(99), b(99);
    Table s1 = sample(model, 200, a);
    Table s2 = sample(model, 200, b);
    CHECK(s1.rows() == s2.rows());
    CHECK(s1.row_ids() == s2.row_ids());
}

TEST_CASE("generator marginal fidelity on toy data") {
    ToyData toy = make_toy(5000, 11);
    const Table& train = toy.table;

    for (GeneratorKind kind : {GeneratorKind::independent, GeneratorKind::copula}) {
        GenModel model = fit_generator(kind, train);
        Rng rng(2024);
        Table synth = sample(model, 5000, rng);

        for (size_t c = 0; c < train.column_count(); ++c) {
            const ColumnSpec& spec = train.schema().column(c);
            if (spec.kind == ColumnKind::categorical) {
                std::vector<Cell> oc, sc;
                for (const auto& row : train.rows()) oc.push_back(row[c]);
                for (const auto& row : synth.rows()) sc.push_back(row[c]);
                double js = js_distance(histogram(oc, spec), histogram(sc, spec));
                CHECK(js <= 0.05);
            } else {
                double ks = ks_score(train.column_as_doubles(c), synth.column_as_doubles(c));
                CHECK(ks >= 0.9);
            }
        }
    }
}

TEST_CASE("copula keeps pairwise dependence within 0.1 on toy data") {
    ToyData toy = make_toy(5000, 19);
    const Table& train = toy.table;
    GenModel model = fit_copula(train);
    Rng rng(7);
    Table synth = sample(model, 5000, rng);

    for (size_t i = 0; i < train.column_count(); ++i) {
        for (size_t j = i + 1; j < train.column_count(); ++j) {
            double train_rho = spearman(train.column_as_doubles(i), train.column_as_doubles(j));
            double synth_rho = spearman(synth.column_as_doubles(i), synth.column_as_doubles(j));
            CHECK(std::abs(train_rho - synth_rho) <= 0.1);
        }
    }
}
