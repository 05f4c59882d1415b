#include "synthgame/attack.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "synthgame/parallel.hpp"
#include "synthgame/stats.hpp"

namespace synthgame {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::original_data: return "original";
        case Scenario::upper_bounds: return "upper";
        case Scenario::likely: return "likely";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "original" || name == "original_data") return Scenario::original_data;
    if (name == "upper" || name == "upper_bounds") return Scenario::upper_bounds;
    if (name == "likely") return Scenario::likely;
    throw Error(Errc::invalid_argument, "unknown scenario '" + name + "'");
}

void AttackConfig::validate() const {
    if (rounds < 1) throw Error(Errc::invalid_argument, "rounds must be at least 1");
    if (releases_per_round < 2 || releases_per_round % 2 != 0)
        throw Error(Errc::invalid_argument, "releases_per_round must be even and at least 2");
    if (original_sample_size < 2)
        throw Error(Errc::invalid_argument, "original_sample_size must be at least 2");
    if (shadow_count < 2) throw Error(Errc::invalid_argument, "shadow_count must be at least 2");
    if (!(aux_subsample_fraction > 0.0 && aux_subsample_fraction < 1.0))
        throw Error(Errc::invalid_argument, "aux_subsample_fraction must lie in (0,1)");
    if (threads < 1) throw Error(Errc::invalid_argument, "threads must be at least 1");
}

FeatureLayout feature_layout(const Schema& schema) {
    if (schema.size() == 0) throw Error(Errc::empty_input, "empty schema");
    FeatureLayout layout;
    static const char* stat_names[] = {"mean", "std", "median", "q25", "q75"};
    for (const auto& col : schema.columns()) {
        if (col.kind == ColumnKind::categorical) {
            for (const auto& level : col.levels) layout.names.push_back(col.name + ":freq:" + level);
        } else {
            for (const char* stat : stat_names) layout.names.push_back(col.name + ":" + stat);
        }
    }
    for (size_t i = 0; i < schema.size(); ++i)
        for (size_t j = i + 1; j < schema.size(); ++j)
            layout.names.push_back("rho:" + schema.column(i).name + ":" + schema.column(j).name);
    layout.length = layout.names.size();
    return layout;
}

std::vector<double> extract_features(const Table& table) {
    if (table.column_count() == 0) throw Error(Errc::empty_input, "table has no columns");
    if (table.row_count() == 0) throw Error(Errc::empty_input, "table has no rows");

    const Schema& schema = table.schema();
    std::vector<double> features;
    std::vector<std::vector<double>> encoded(schema.size());
    for (size_t c = 0; c < schema.size(); ++c) encoded[c] = table.column_as_doubles(c);

    for (size_t c = 0; c < schema.size(); ++c) {
        const ColumnSpec& spec = schema.column(c);
        if (spec.kind == ColumnKind::categorical) {
            std::vector<double> freq(spec.levels.size(), 0.0);
            for (double v : encoded[c]) freq[size_t(v)] += 1.0;
            for (double f : freq) features.push_back(f / double(table.row_count()));
        } else {
            StatsSummary s = descriptive_stats(encoded[c]);
            features.push_back(s.mean);
            features.push_back(s.std_dev);
            features.push_back(s.median);
            features.push_back(s.q25);
            features.push_back(s.q75);
        }
    }
    for (size_t i = 0; i < schema.size(); ++i) {
        for (size_t j = i + 1; j < schema.size(); ++j) {
            if (table.row_count() < 2) {
                features.push_back(0.0);
            } else {
                features.push_back(spearman(encoded[i], encoded[j]));
            }
        }
    }
    return features;
}

std::vector<Release> make_releases(const Table& pool, RecordId target, const AttackConfig& cfg,
                                   Rng& rng) {
    cfg.validate();
    if (!pool.has_record(target))
        throw Error(Errc::unknown_record, "target id " + std::to_string(target));

    const size_t n = size_t(cfg.original_sample_size);
    const size_t half = size_t(cfg.releases_per_round) / 2;
    std::vector<Release> releases;
    releases.reserve(size_t(cfg.releases_per_round));

    for (size_t r = 0; r < size_t(cfg.releases_per_round); ++r) {
        bool target_in = r < half;
        Table training = target_in ? sample_rows(pool, n, target, std::nullopt, rng)
                                   : sample_rows(pool, n, std::nullopt, target, rng);
        Release release;
        release.target_in = target_in;
        if (cfg.scenario == Scenario::original_data) {
            release.release = training;
        } else {
            GenModel model = fit_generator(cfg.generator, training);
            release.release = sample(model, size_t(cfg.effective_release_size()), rng);
        }
        release.training = std::move(training);
        releases.push_back(std::move(release));
    }
    return releases;
}

ShadowSet build_shadow_set(const Table& release, const std::vector<Cell>& target_row,
                           const AttackConfig& cfg, Rng& rng) {
    if (target_row.size() != release.column_count())
        throw Error(Errc::schema_mismatch, "target row does not match release schema");

    GenModel aux_model = fit_generator(cfg.generator, release);
    Table aux = sample(aux_model, release.row_count(), rng);

    size_t b_size = size_t(std::floor(cfg.aux_subsample_fraction * double(aux.row_count())));
    if (b_size < 3) throw Error(Errc::too_few_rows, "auxiliary subsample smaller than 3");
    Table b = sample_rows(aux, b_size, std::nullopt, std::nullopt, rng);

    RecordId target_id = aux.row_ids().empty() ? 0 : *std::max_element(aux.row_ids().begin(),
                                                                       aux.row_ids().end()) +
                                                        1;
    GenModel g_in = fit_generator(cfg.generator, b.with_row(target_row, target_id));
    GenModel g_out = fit_generator(cfg.generator, b);

    ShadowSet shadow;
    shadow.features.reserve(2 * size_t(cfg.shadow_count));
    shadow.labels.reserve(2 * size_t(cfg.shadow_count));
    for (int k = 0; k < cfg.shadow_count; ++k) {
        shadow.features.push_back(extract_features(sample(g_in, release.row_count(), rng)));
        shadow.labels.push_back(1);
    }
    for (int k = 0; k < cfg.shadow_count; ++k) {
        shadow.features.push_back(extract_features(sample(g_out, release.row_count(), rng)));
        shadow.labels.push_back(0);
    }
    if (cfg.shuffle_shadow_labels) rng.shuffle(shadow.labels);
    return shadow;
}

double attack_release(const Table& release, const std::vector<Cell>& target_row,
                      const AttackConfig& cfg, Rng& rng) {
    ShadowSet shadow = build_shadow_set(release, target_row, cfg, rng);
    Forest classifier = train_forest(shadow.features, shadow.labels, cfg.forest, rng.next_u64());
    return classifier.predict_proba(extract_features(release));
}

RoundOutcome run_round(const Table& pool, const AttackConfig& cfg, int round_index) {
    Rng rng(mix_seed(cfg.master_seed, uint64_t(round_index)));

    RecordId target;
    if (cfg.forced_targets.empty()) {
        target = pool.row_id(size_t(rng.uniform_below(pool.row_count())));
    } else {
        target = cfg.forced_targets[size_t(round_index) % cfg.forced_targets.size()];
        if (!pool.has_record(target))
            throw Error(Errc::unknown_record, "forced target id " + std::to_string(target));
    }
    const std::vector<Cell>& target_row = pool.row(pool.index_of(target));

    RoundOutcome outcome;
    outcome.round_index = round_index;
    outcome.target_id = target;

    auto releases = make_releases(pool, target, cfg, rng);
    std::vector<double> scores;
    std::vector<bool> truths;
    for (const Release& rel : releases) {
        double p = attack_release(rel.release, target_row, cfg, rng);
        outcome.guesses.push_back(Guess{p, rel.target_in});
        scores.push_back(p);
        truths.push_back(rel.target_in);
    }
    outcome.auc = roc_auc(scores, truths);
    return outcome;
}

GameReport run_game(const Table& pool, const AttackConfig& cfg) {
    cfg.validate();
    auto started = std::chrono::steady_clock::now();

    Table working = pool;
    if (cfg.scenario == Scenario::likely) {
        auto qi = pool.schema().quasi_identifier_columns();
        if (qi.empty())
            throw Error(Errc::empty_projection, "likely scenario needs quasi-identifier columns");
        working = project(pool, qi);
    }

    GameReport report;
    report.config = cfg;
    report.rounds.resize(size_t(cfg.rounds));
    try {
        parallel_for(size_t(cfg.rounds), cfg.threads,
                     [&](size_t i) { report.rounds[i] = run_round(working, cfg, int(i)); });
    } catch (const Error& e) {
        throw Error(e.code(), std::string("attack game failed: ") + e.what());
    }

    double sum = 0.0, maxv = 0.0;
    size_t above_half = 0, above_07 = 0;
    std::vector<double> all_scores;
    std::vector<bool> all_truths;
    for (const auto& round : report.rounds) {
        sum += round.auc;
        maxv = std::max(maxv, round.auc);
        if (round.auc > 0.5) ++above_half;
        if (round.auc > 0.7) ++above_07;
        for (const auto& guess : round.guesses) {
            all_scores.push_back(guess.membership_probability);
            all_truths.push_back(guess.truth_in);
        }
    }
    report.summary.mean_auc = sum / double(report.rounds.size());
    report.summary.max_auc = maxv;
    report.summary.fraction_above_half = double(above_half) / double(report.rounds.size());
    report.summary.fraction_above_07 = double(above_07) / double(report.rounds.size());
    report.summary.pooled_auc = roc_auc(all_scores, all_truths);

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

ConfusionMatrix confusion_matrix(const std::vector<double>& guesses,
                                 const std::vector<bool>& truths, double threshold) {
    if (guesses.size() != truths.size())
        throw Error(Errc::length_mismatch, "guesses and truths differ in length");
    ConfusionMatrix cm;
    for (size_t i = 0; i < guesses.size(); ++i) {
        bool predicted_in = guesses[i] >= threshold; // ties predict IN
        if (truths[i]) {
            (predicted_in ? cm.tp : cm.fn) += 1;
        } else {
            (predicted_in ? cm.fp : cm.tn) += 1;
        }
    }
    return cm;
}

std::pair<double, double> tpr_fpr(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0 || cm.fp + cm.tn == 0)
        throw Error(Errc::degenerate_rate, "a confusion-matrix row is empty");
    double tpr = double(cm.tp) / double(cm.tp + cm.fn);
    double fpr = double(cm.fp) / double(cm.fp + cm.tn);
    return {tpr, fpr};
}

double roc_auc(const std::vector<double>& scores, const std::vector<bool>& truths) {
    if (scores.size() != truths.size())
        throw Error(Errc::length_mismatch, "scores and truths differ in length");
    size_t in_count = 0;
    for (bool t : truths) in_count += size_t(t);
    size_t out_count = truths.size() - in_count;
    if (in_count == 0 || out_count == 0)
        throw Error(Errc::single_class, "roc_auc needs at least one IN and one OUT truth");

    double wins = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (!truths[i]) continue;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (truths[j]) continue;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / (double(in_count) * double(out_count));
}

} // namespace synthgame
