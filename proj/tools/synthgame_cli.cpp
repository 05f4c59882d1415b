// synthgame: membership-inference risk and fidelity assessment for
// synthetic tabular data. Subcommands: assess, cluster, attack, make-toy,
// report. All runs are deterministic for a fixed seed; repeated invocations
// produce byte-identical artifacts.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "synthgame/attack.hpp"
#include "synthgame/fidelity.hpp"
#include "synthgame/serialize.hpp"
#include "synthgame/tabular.hpp"
#include "synthgame/toy.hpp"

namespace fs = std::filesystem;
using namespace synthgame;

namespace {

int default_threads() {
    if (const char* env = std::getenv("SYNTHGAME_THREADS")) {
        int value = std::atoi(env);
        if (value >= 1) return value;
    }
    return 1;
}

void ensure_out_dir(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(Errc::io_error, "cannot create output directory '" + out + "'");
}

Table load_table(const std::string& dataset, const std::string& schema_path) {
    Schema schema = load_schema(schema_path);
    LoadResult loaded = load_csv(dataset, schema, /*drop_incomplete=*/true);
    if (loaded.dropped_rows > 0)
        std::fprintf(stderr, "dropped %zu incomplete rows from %s\n", loaded.dropped_rows,
                     dataset.c_str());
    return loaded.table;
}

int cmd_assess(const std::string& dataset, const std::string& schema_path,
               const std::string& synthetic, const std::string& out, int threads) {
    ensure_out_dir(out);
    Table original = load_table(dataset, schema_path);
    Table synth = load_table(synthetic, schema_path);
    FidelityReport report = fidelity_report(original, synth, threads);
    write_text_file(out + "/fidelity.json", fidelity_to_json_text(report));
    write_text_file(out + "/fidelity_columns.csv", fidelity_csv(report));
    std::printf("nn=%.4f js_mean=%.4f ks_mean=%s chi2_mean=%s exact_matches=%zu\n",
                report.nn_distance, report.js_mean,
                report.ks_mean ? std::to_string(*report.ks_mean).c_str() : "n/a",
                report.chi2_mean ? std::to_string(*report.chi2_mean).c_str() : "n/a",
                report.exact_matches);
    return 0;
}

int cmd_cluster(const std::string& dataset, const std::string& schema_path, size_t k,
                size_t restarts, uint64_t seed, const std::string& out) {
    ensure_out_dir(out);
    Table table = load_table(dataset, schema_path);
    Rng rng(seed);
    ClusterVulnerability cv = cluster_vulnerability(table, k, restarts, rng);
    write_text_file(out + "/clusters.json", clusters_to_json_text(cv, seed));
    std::printf("k=%zu min_cluster_fraction=%.4f degenerate=%s\n", cv.k_used,
                cv.min_cluster_fraction, cv.degenerate ? "true" : "false");
    return 0;
}

int cmd_attack(const AttackConfig& cfg, const std::string& dataset,
               const std::string& schema_path, const std::string& out) {
    ensure_out_dir(out);
    Table pool = load_table(dataset, schema_path);
    GameReport report = run_game(pool, cfg);
    write_text_file(out + "/game.json", game_to_json_text(report));
    write_text_file(out + "/swarm.csv", swarm_csv(report));
    std::printf("rounds=%d mean_auc=%.4f max_auc=%.4f frac>0.5=%.4f\n", cfg.rounds,
                report.summary.mean_auc, report.summary.max_auc,
                report.summary.fraction_above_half);
    std::fprintf(stderr, "wall_time=%.2fs\n", report.wall_time_seconds);
    return 0;
}

int cmd_make_toy(const std::string& out, size_t rows, uint64_t seed) {
    ensure_out_dir(out);
    ToyData toy = make_toy(rows, seed);
    write_csv(out + "/toy.csv", toy.table);
    save_schema(out + "/toy_schema.json", toy.table.schema());
    write_text_file(out + "/toy_outliers.json", toy_sidecar_json_text(toy));
    std::printf("rows=%zu minority_fraction=%.4f outliers=%zu\n", toy.table.row_count(),
                toy.minority_fraction, toy.outlier_ids.size());
    return 0;
}

int cmd_report(const std::string& game_path, const std::string& out) {
    ensure_out_dir(out);
    GameReport report = game_from_json_text(read_text_file(game_path));
    write_text_file(out + "/swarm.csv", swarm_csv(report));
    std::printf("rounds=%zu\n", report.rounds.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Privacy-game simulator and fidelity assessor for synthetic tabular data"};
    app.require_subcommand(1);

    std::string dataset, schema_path, synthetic, out = ".", config_path, game_path;
    std::string scenario = "likely", generator;
    size_t k = 15, restarts = 4, rows = 2000;
    uint64_t seed = 0;
    int threads = default_threads();
    int rounds = 0, sample_size = 0, releases = 0, shadows = 0;
    double aux_fraction = 0.0;
    std::vector<RecordId> targets;
    bool shuffle_labels = false;

    auto* assess = app.add_subcommand("assess", "Compare a synthetic dataset to its original");
    assess->add_option("--dataset", dataset, "original CSV")->required();
    assess->add_option("--schema", schema_path, "schema JSON")->required();
    assess->add_option("--synthetic", synthetic, "synthetic CSV")->required();
    assess->add_option("--out", out, "output directory");
    assess->add_option("--threads", threads, "worker threads");

    auto* cluster = app.add_subcommand("cluster", "K-means cluster-vulnerability pre-study");
    cluster->add_option("--dataset", dataset)->required();
    cluster->add_option("--schema", schema_path)->required();
    cluster->add_option("--k", k, "cluster count (default 15)");
    cluster->add_option("--restarts", restarts, "k-means restarts");
    cluster->add_option("--seed", seed, "rng seed");
    cluster->add_option("--out", out, "output directory");

    auto* attack = app.add_subcommand("attack", "Run the membership-inference privacy game");
    attack->add_option("--config", config_path, "JSON config; flags override it");
    attack->add_option("--dataset", dataset)->required();
    attack->add_option("--schema", schema_path)->required();
    attack->add_option("--scenario", scenario, "original|upper|likely")
        ->check(CLI::IsMember({"original", "upper", "likely"}));
    attack->add_option("--rounds", rounds, "attack rounds");
    attack->add_option("--seed", seed, "master seed");
    attack->add_option("--threads", threads, "worker threads");
    attack->add_option("--generator", generator, "copula|independent")
        ->check(CLI::IsMember({"copula", "independent"}));
    attack->add_option("--sample-size", sample_size, "challenger training-sample size");
    attack->add_option("--releases", releases, "releases per round (even)");
    attack->add_option("--shadows", shadows, "shadow datasets per label");
    attack->add_option("--aux-fraction", aux_fraction, "auxiliary subsample fraction");
    attack->add_option("--targets", targets, "force these record ids as targets")->delimiter(',');
    attack->add_flag("--shuffle-shadow-labels", shuffle_labels,
                     "null-attack calibration: shuffle shadow labels");
    attack->add_option("--out", out, "output directory");

    auto* make_toy_cmd = app.add_subcommand("make-toy", "Generate the bundled toy dataset");
    make_toy_cmd->add_option("--out", out, "output directory");
    make_toy_cmd->add_option("--rows", rows, "row count (>= 100)");
    make_toy_cmd->add_option("--seed", seed, "rng seed");

    auto* report = app.add_subcommand("report", "Re-render a game.json to swarm.csv");
    report->add_option("--game", game_path, "game.json path")->required();
    report->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors exit 1, help exits 0
    }

    try {
        if (assess->parsed()) return cmd_assess(dataset, schema_path, synthetic, out, threads);
        if (cluster->parsed()) return cmd_cluster(dataset, schema_path, k, restarts, seed, out);
        if (attack->parsed()) {
            AttackConfig cfg;
            if (!config_path.empty()) cfg = attack_config_from_json_text(read_text_file(config_path));
            if (attack->count("--scenario") || config_path.empty())
                cfg.scenario = scenario_from_name(scenario);
            if (attack->count("--rounds")) cfg.rounds = rounds;
            if (attack->count("--seed")) cfg.master_seed = seed;
            if (attack->count("--threads") || std::getenv("SYNTHGAME_THREADS")) cfg.threads = threads;
            if (attack->count("--generator"))
                cfg.generator = generator == "copula" ? GeneratorKind::copula
                                                      : GeneratorKind::independent;
            if (attack->count("--sample-size")) cfg.original_sample_size = sample_size;
            if (attack->count("--releases")) cfg.releases_per_round = releases;
            if (attack->count("--shadows")) cfg.shadow_count = shadows;
            if (attack->count("--aux-fraction")) cfg.aux_subsample_fraction = aux_fraction;
            if (attack->count("--targets")) cfg.forced_targets = targets;
            if (shuffle_labels) cfg.shuffle_shadow_labels = true;
            return cmd_attack(cfg, dataset, schema_path, out);
        }
        if (make_toy_cmd->parsed()) return cmd_make_toy(out, rows, seed);
        if (report->parsed()) return cmd_report(game_path, out);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
