#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "synthgame/attack.hpp"
#include "synthgame/serialize.hpp"
#include "synthgame/toy.hpp"

using namespace synthgame;

namespace {

// trapezoid area under the ROC curve from a descending-score threshold
// sweep, grouping tied scores into single sweep steps
double oracle_trapezoid_auc(std::vector<double> scores, std::vector<bool> truths) {
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    double pos = 0, neg = 0;
    for (bool t : truths) (t ? pos : neg) += 1;

    double auc = 0.0;
    double tp = 0, fp = 0, prev_tp = 0, prev_fp = 0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (truths[order[j]] ? tp : fp) += 1;
            ++j;
        }
        auc += (fp / neg - prev_fp / neg) * (tp / pos + prev_tp / pos) / 2.0;
        prev_tp = tp;
        prev_fp = fp;
        i = j;
    }
    return auc;
}

AttackConfig small_config() {
    AttackConfig cfg;
    cfg.scenario = Scenario::likely;
    cfg.rounds = 2;
    cfg.releases_per_round = 10;
    cfg.original_sample_size = 60;
    cfg.shadow_count = 4;
    cfg.generator = GeneratorKind::independent;
    cfg.forest.n_trees = 20;
    cfg.master_seed = 42;
    return cfg;
}

} // namespace

TEST_CASE("feature layout arithmetic") {
    Schema one({{"x", ColumnKind::continuous, {}, false, false}});
    CHECK(feature_layout(one).length == 5); // no correlation block

    Schema two({{"x", ColumnKind::continuous, {}, false, false},
                {"c", ColumnKind::categorical, {"a", "b", "c"}, false, false}});
    CHECK(feature_layout(two).length == 5 + 3 + 1);

    Table t(two, {{Cell::num(1), Cell::cat(0)}, {Cell::num(2), Cell::cat(2)}}, {0, 1});
    auto f1 = extract_features(t);
    auto f2 = extract_features(t);
    CHECK(f1.size() == feature_layout(two).length);
    CHECK(f1 == f2);
    for (double v : f1) CHECK(std::isfinite(v));
}

TEST_CASE("categorical frequency block sums to one") {
    ToyData toy = make_toy(250, 7);
    auto features = extract_features(toy.table);
    FeatureLayout layout = feature_layout(toy.table.schema());
    REQUIRE(features.size() == layout.length);
    size_t offset = 0;
    for (const auto& col : toy.table.schema().columns()) {
        if (col.kind == ColumnKind::categorical) {
            double sum = 0;
            for (size_t i = 0; i < col.levels.size(); ++i) sum += features[offset + i];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            offset += col.levels.size();
        } else {
            offset += 5;
        }
    }
}

TEST_CASE("make_releases balances labels five against five") {
    ToyData toy = make_toy(200, 1);
    AttackConfig cfg = small_config();
    Rng rng(5);
    auto releases = make_releases(toy.table, 10, cfg, rng);
    size_t in_count = 0;
    for (const auto& rel : releases) in_count += size_t(rel.target_in);
    CHECK(releases.size() == 10);
    CHECK(in_count == 5);
}

TEST_CASE("release training sets contain or exclude the target across seeds") {
    ToyData toy = make_toy(150, 2);
    AttackConfig cfg = small_config();
    cfg.original_sample_size = 40;
    const RecordId target = 17;
    const auto& target_row = toy.table.row(toy.table.index_of(target));

    for (uint64_t seed = 0; seed < 60; ++seed) {
        Rng rng(seed);
        auto releases = make_releases(toy.table, target, cfg, rng);
        for (const auto& rel : releases) {
            bool found = rel.training.has_record(target);
            CHECK(found == rel.target_in);
            if (rel.target_in) {
                // the appended row is the target's full tuple
                CHECK(rel.training.row(rel.training.row_count() - 1) == target_row);
            }
        }
    }
}

TEST_CASE("original_data scenario releases the training subset itself") {
    ToyData toy = make_toy(150, 3);
    AttackConfig cfg = small_config();
    cfg.scenario = Scenario::original_data;
    Rng rng(9);
    auto releases = make_releases(toy.table, 5, cfg, rng);
    for (const auto& rel : releases) {
        CHECK(rel.release.rows() == rel.training.rows());
        if (rel.target_in) CHECK(rel.release.has_record(5));
    }
}

TEST_CASE("synthetic releases have the configured size and fresh ids") {
    ToyData toy = make_toy(150, 4);
    AttackConfig cfg = small_config();
    cfg.release_size = 25;
    Rng rng(11);
    auto releases = make_releases(toy.table, 3, cfg, rng);
    for (const auto& rel : releases) {
        CHECK(rel.release.row_count() == 25);
        for (RecordId id : rel.release.row_ids()) CHECK_FALSE(toy.table.has_record(id));
    }
}

TEST_CASE("build_shadow_set yields balanced labelled feature vectors") {
    ToyData toy = make_toy(300, 6);
    Table qi = project(toy.table, toy.table.schema().quasi_identifier_columns());
    AttackConfig cfg = small_config();
    cfg.shadow_count = 25;
    Rng rng(13);
    Table release = sample_rows(qi, 80, {}, {}, rng);
    const auto& target_row = qi.row(0);

    ShadowSet shadow = build_shadow_set(release, target_row, cfg, rng);
    REQUIRE(shadow.features.size() == 50);
    REQUIRE(shadow.labels.size() == 50);
    size_t in_count = 0;
    for (int label : shadow.labels) in_count += size_t(label);
    CHECK(in_count == 25);

    size_t expected_len = feature_layout(qi.schema()).length;
    for (const auto& f : shadow.features) CHECK(f.size() == expected_len);
}

TEST_CASE("an extreme target shifts the IN-label shadow features") {
    // one continuous column, target far outside the subsample's marginal
    Schema schema({{"x", ColumnKind::continuous, {}, false, false}});
    std::vector<std::vector<Cell>> rows;
    std::vector<RecordId> ids;
    Rng data_rng(3);
    for (size_t i = 0; i < 200; ++i) {
        rows.push_back({Cell::num(std::round(data_rng.normal() * 5.0 + 50.0))});
        ids.push_back(RecordId(i));
    }
    Table release(schema, rows, ids);
    std::vector<Cell> target_row{Cell::num(500.0)};

    AttackConfig cfg = small_config();
    cfg.shadow_count = 40;
    Rng rng(17);
    ShadowSet shadow = build_shadow_set(release, target_row, cfg, rng);

    double in_mean = 0, out_mean = 0;
    for (size_t i = 0; i < shadow.features.size(); ++i)
        (shadow.labels[i] ? in_mean : out_mean) += shadow.features[i][0]; // column mean feature
    in_mean /= 40.0;
    out_mean /= 40.0;
    CHECK(in_mean > out_mean); // appending one huge record pulls the mean up
}

TEST_CASE("attack_release returns a probability") {
    ToyData toy = make_toy(200, 8);
    Table qi = project(toy.table, toy.table.schema().quasi_identifier_columns());
    AttackConfig cfg = small_config();
    Rng rng(19);
    Table release = sample_rows(qi, 50, {}, {}, rng);
    double p = attack_release(release, qi.row(4), cfg, rng);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
}

TEST_CASE("roc_auc on spec examples") {
    CHECK(roc_auc({0.9, 0.8, 0.3}, {true, true, false}) == 1.0);
    CHECK(roc_auc({0.2, 0.8}, {true, false}) == 0.0);
    CHECK(roc_auc({0.5, 0.5}, {true, false}) == 0.5);
    CHECK_THROWS_AS(roc_auc({0.5, 0.6}, {true, true}), Error);
    CHECK_THROWS_AS(roc_auc({0.5}, {true, false}), Error);
}

TEST_CASE("roc_auc equals the trapezoid oracle and the complement identity") {
    Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        size_t n = 2 + rng.uniform_below(199);
        std::vector<double> scores(n);
        std::vector<bool> truths(n);
        bool has_in = false, has_out = false;
        for (size_t i = 0; i < n; ++i) {
            scores[i] = double(rng.uniform_below(10)) / 10.0; // many ties
            truths[i] = rng.uniform01() < 0.5;
            (truths[i] ? has_in : has_out) = true;
        }
        if (!has_in || !has_out) continue;

        double pairwise = roc_auc(scores, truths);
        CHECK(pairwise == doctest::Approx(oracle_trapezoid_auc(scores, truths)).epsilon(1e-9));

        std::vector<bool> flipped(n);
        for (size_t i = 0; i < n; ++i) flipped[i] = !truths[i];
        CHECK(pairwise + roc_auc(scores, flipped) == 1.0);

        // invariance under a strictly increasing transform
        std::vector<double> transformed(n);
        for (size_t i = 0; i < n; ++i) transformed[i] = std::exp(3.0 * scores[i]) + 1.0;
        CHECK(roc_auc(transformed, truths) == pairwise);
    }
}

TEST_CASE("confusion matrix and rates reproduce the formulas") {
    ConfusionMatrix cm = confusion_matrix({0.9, 0.2}, {true, false});
    CHECK(cm.tp == 1);
    CHECK(cm.tn == 1);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);

    ConfusionMatrix built{3, 1, 2, 4};
    CHECK(built.total() == 10);
    auto [tpr, fpr] = tpr_fpr(built);
    CHECK(tpr == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(fpr == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // threshold zero predicts everything IN
    ConfusionMatrix all_in = confusion_matrix({0.1, 0.0, 0.7}, {false, false, true}, 0.0);
    CHECK(all_in.fp == 2);
    CHECK(all_in.tp == 1);

    CHECK_THROWS_AS(tpr_fpr(ConfusionMatrix{0, 0, 1, 1}), Error);
    auto [tpr2, fpr2] = tpr_fpr(ConfusionMatrix{2, 0, 1, 3});
    CHECK(tpr2 == 1.0);
    (void)fpr2;
}

TEST_CASE("run_round is deterministic") {
    ToyData toy = make_toy(200, 10);
    Table qi = project(toy.table, toy.table.schema().quasi_identifier_columns());
    AttackConfig cfg = small_config();
    RoundOutcome a = run_round(qi, cfg, 1);
    RoundOutcome b = run_round(qi, cfg, 1);
    CHECK(a.target_id == b.target_id);
    REQUIRE(a.guesses.size() == b.guesses.size());
    for (size_t i = 0; i < a.guesses.size(); ++i) {
        CHECK(a.guesses[i].membership_probability == b.guesses[i].membership_probability);
        CHECK(a.guesses[i].truth_in == b.guesses[i].truth_in);
    }
    CHECK(a.auc == b.auc);
    CHECK(a.guesses.size() == size_t(cfg.releases_per_round));
}

TEST_CASE("run_game aggregates and parallelism does not change bytes") {
    ToyData toy = make_toy(200, 12);
    AttackConfig cfg = small_config();
    cfg.rounds = 3;

    cfg.threads = 1;
    GameReport serial = run_game(toy.table, cfg);
    cfg.threads = 8;
    GameReport parallel = run_game(toy.table, cfg);

    // wall time differs; the serialized report must not
    std::string serial_text = game_to_json_text(serial);
    std::string parallel_text = game_to_json_text(parallel);
    CHECK(serial_text == parallel_text);
    CHECK(swarm_csv(serial) == swarm_csv(parallel));

    CHECK(serial.rounds.size() == 3);
    for (const auto& round : serial.rounds) {
        CHECK(round.auc >= 0.0);
        CHECK(round.auc <= 1.0);
    }
    // summary recomputable from outcomes
    double sum = 0, maxv = 0;
    for (const auto& round : serial.rounds) {
        sum += round.auc;
        maxv = std::max(maxv, round.auc);
    }
    CHECK(serial.summary.mean_auc == sum / 3.0);
    CHECK(serial.summary.max_auc == maxv);

    GameReport back = game_from_json_text(serial_text);
    CHECK(game_to_json_text(back) == serial_text);
}

TEST_CASE("forced targets drive the round target choice") {
    ToyData toy = make_toy(200, 13);
    AttackConfig cfg = small_config();
    cfg.rounds = 4;
    cfg.forced_targets = {toy.outlier_ids[0], toy.outlier_ids[1]};
    GameReport report = run_game(toy.table, cfg);
    CHECK(report.rounds[0].target_id == toy.outlier_ids[0]);
    CHECK(report.rounds[1].target_id == toy.outlier_ids[1]);
    CHECK(report.rounds[2].target_id == toy.outlier_ids[0]);
    CHECK(report.rounds[3].target_id == toy.outlier_ids[1]);
}

TEST_CASE("config validation rejects bad settings") {
    AttackConfig cfg = small_config();
    cfg.releases_per_round = 7;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config();
    cfg.aux_subsample_fraction = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config();
    cfg.shadow_count = 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("attack config json round-trips") {
    AttackConfig cfg = small_config();
    cfg.forced_targets = {5, 9};
    cfg.shuffle_shadow_labels = true;
    AttackConfig back = attack_config_from_json_text(attack_config_to_json_text(cfg));
    CHECK(back.scenario == cfg.scenario);
    CHECK(back.rounds == cfg.rounds);
    CHECK(back.original_sample_size == cfg.original_sample_size);
    CHECK(back.shadow_count == cfg.shadow_count);
    CHECK(back.generator == cfg.generator);
    CHECK(back.forest.n_trees == cfg.forest.n_trees);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.forced_targets == cfg.forced_targets);
    CHECK(back.shuffle_shadow_labels == cfg.shuffle_shadow_labels);
}
