#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synthgame/forest.hpp"
#include "synthgame/generators.hpp"
#include "synthgame/rng.hpp"
#include "synthgame/tabular.hpp"

namespace synthgame {

enum class Scenario { original_data, upper_bounds, likely };

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

/// Fixed feature layout for a schema: 5 descriptive stats per continuous or
/// date column, level frequencies per categorical column, then the upper
/// triangle of pairwise Spearman correlations over all columns.
struct FeatureLayout {
    size_t length = 0;
    std::vector<std::string> names;
};

FeatureLayout feature_layout(const Schema& schema);

/// Summary of a dataset as the membership classifier sees it. The layout is
/// a function of the schema alone; the values are estimable without knowing
/// the target record.
std::vector<double> extract_features(const Table& table);

struct AttackConfig {
    Scenario scenario = Scenario::likely;
    int rounds = 50;
    int releases_per_round = 10;   // half with the target in, half without
    int original_sample_size = 1000;
    int release_size = 0;          // 0 -> original_sample_size
    int shadow_count = 25;         // shadow datasets per label
    double aux_subsample_fraction = 0.5;
    GeneratorKind generator = GeneratorKind::copula;
    ForestParams forest;
    uint64_t master_seed = 0;
    int threads = 1;

    // Experiment controls: force the per-round target choice instead of a
    // uniform draw (round i takes forced_targets[i % size]), and optionally
    // shuffle the shadow labels as a null-attack calibration check.
    std::vector<RecordId> forced_targets;
    bool shuffle_shadow_labels = false;

    int effective_release_size() const {
        return release_size > 0 ? release_size : original_sample_size;
    }
    void validate() const;
};

struct ConfusionMatrix {
    size_t tp = 0, fn = 0, fp = 0, tn = 0;
    size_t total() const { return tp + fn + fp + tn; }
};

struct Guess {
    double membership_probability = 0.0;
    bool truth_in = false;
};

struct RoundOutcome {
    int round_index = 0;
    RecordId target_id = -1;
    std::vector<Guess> guesses;
    double auc = 0.0;
};

struct GameSummary {
    double mean_auc = 0.0;
    double max_auc = 0.0;
    double fraction_above_half = 0.0;
    double fraction_above_07 = 0.0;
    double pooled_auc = 0.0; // over all guesses across rounds
};

struct GameReport {
    AttackConfig config;
    std::vector<RoundOutcome> rounds;
    GameSummary summary;
    double wall_time_seconds = 0.0; // informational; never serialized
};

/// One challenger release with its ground truth. The training subset is
/// exposed so release-construction invariants stay testable.
struct Release {
    Table training;
    Table release;
    bool target_in = false;
};

/// Builds releases_per_round challenger releases for one target: IN rounds
/// sample n-1 rows excluding the target then append it, OUT rounds sample n
/// rows excluding the target. The original_data scenario releases the
/// training subset itself; otherwise the configured generator is fitted to
/// the training subset and release_size rows are sampled.
std::vector<Release> make_releases(const Table& pool, RecordId target, const AttackConfig& cfg,
                                   Rng& rng);

struct ShadowSet {
    std::vector<std::vector<double>> features;
    std::vector<int> labels; // 1 = IN, 0 = OUT
};

/// Attacker-side shadow modelling with the two-generator shortcut: fit a
/// generator to the release, sample a synthetic auxiliary of the same size,
/// draw a subsample B, then fit one generator on B plus the target row and
/// one on B alone, and draw shadow_count datasets from each.
ShadowSet build_shadow_set(const Table& release, const std::vector<Cell>& target_row,
                           const AttackConfig& cfg, Rng& rng);

/// Trains the membership classifier on the shadow set and applies it to the
/// released dataset's feature vector.
double attack_release(const Table& release, const std::vector<Cell>& target_row,
                      const AttackConfig& cfg, Rng& rng);

/// One full round: derive the round rng from mix_seed(master_seed, index),
/// pick the target, build releases, attack each, score with roc_auc. The
/// pool must already be projected for the likely scenario.
RoundOutcome run_round(const Table& pool, const AttackConfig& cfg, int round_index);

/// Runs all rounds (in parallel when cfg.threads > 1) over the raw pool;
/// applies the quasi-identifier projection for the likely scenario first.
GameReport run_game(const Table& pool, const AttackConfig& cfg);

ConfusionMatrix confusion_matrix(const std::vector<double>& guesses,
                                 const std::vector<bool>& truths, double threshold = 0.5);

/// tpr = tp/(tp+fn), fpr = fp/(fp+tn); DegenerateRate if a row is empty.
std::pair<double, double> tpr_fpr(const ConfusionMatrix& cm);

/// Mann-Whitney pairwise counting: IN-over-OUT pairs count 1, ties 0.5.
double roc_auc(const std::vector<double>& scores, const std::vector<bool>& truths);

} // namespace synthgame
