#include "synthgame/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace synthgame {

namespace {

using nlohmann::json;

std::string shortest(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

const char* generator_name(GeneratorKind kind) {
    return kind == GeneratorKind::copula ? "copula" : "independent";
}

GeneratorKind generator_from_name(const std::string& name) {
    if (name == "copula") return GeneratorKind::copula;
    if (name == "independent") return GeneratorKind::independent;
    throw Error(Errc::invalid_argument, "unknown generator '" + name + "'");
}

const char* feature_rule_name(FeatureRule rule) {
    switch (rule) {
        case FeatureRule::sqrt_rule: return "sqrt";
        case FeatureRule::all: return "all";
        case FeatureRule::fraction: return "fraction";
    }
    return "?";
}

FeatureRule feature_rule_from_name(const std::string& name) {
    if (name == "sqrt") return FeatureRule::sqrt_rule;
    if (name == "all") return FeatureRule::all;
    if (name == "fraction") return FeatureRule::fraction;
    throw Error(Errc::invalid_argument, "unknown feature rule '" + name + "'");
}

json forest_to_json(const ForestParams& p) {
    json j;
    j["n_trees"] = p.n_trees;
    j["max_depth"] = p.max_depth;
    j["min_leaf"] = p.min_leaf;
    j["feature_rule"] = feature_rule_name(p.feature_rule);
    j["feature_fraction"] = p.feature_fraction;
    j["bootstrap"] = p.bootstrap;
    return j;
}

ForestParams forest_from_json(const json& j) {
    ForestParams p;
    p.n_trees = j.value("n_trees", p.n_trees);
    p.max_depth = j.value("max_depth", p.max_depth);
    p.min_leaf = j.value("min_leaf", p.min_leaf);
    if (j.contains("feature_rule")) p.feature_rule = feature_rule_from_name(j["feature_rule"]);
    p.feature_fraction = j.value("feature_fraction", p.feature_fraction);
    p.bootstrap = j.value("bootstrap", p.bootstrap);
    return p;
}

json config_to_json(const AttackConfig& cfg) {
    json j;
    j["scenario"] = scenario_name(cfg.scenario);
    j["rounds"] = cfg.rounds;
    j["releases_per_round"] = cfg.releases_per_round;
    j["original_sample_size"] = cfg.original_sample_size;
    j["release_size"] = cfg.release_size;
    j["shadow_count"] = cfg.shadow_count;
    j["aux_subsample_fraction"] = cfg.aux_subsample_fraction;
    j["generator"] = generator_name(cfg.generator);
    j["forest"] = forest_to_json(cfg.forest);
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    if (!cfg.forced_targets.empty()) j["forced_targets"] = cfg.forced_targets;
    if (cfg.shuffle_shadow_labels) j["shuffle_shadow_labels"] = true;
    return j;
}

AttackConfig config_from_json(const json& j) {
    AttackConfig cfg;
    if (j.contains("scenario")) cfg.scenario = scenario_from_name(j["scenario"]);
    cfg.rounds = j.value("rounds", cfg.rounds);
    cfg.releases_per_round = j.value("releases_per_round", cfg.releases_per_round);
    cfg.original_sample_size = j.value("original_sample_size", cfg.original_sample_size);
    cfg.release_size = j.value("release_size", cfg.release_size);
    cfg.shadow_count = j.value("shadow_count", cfg.shadow_count);
    cfg.aux_subsample_fraction = j.value("aux_subsample_fraction", cfg.aux_subsample_fraction);
    if (j.contains("generator")) cfg.generator = generator_from_name(j["generator"]);
    if (j.contains("forest")) cfg.forest = forest_from_json(j["forest"]);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.threads = j.value("threads", cfg.threads);
    if (j.contains("forced_targets"))
        cfg.forced_targets = j["forced_targets"].get<std::vector<RecordId>>();
    cfg.shuffle_shadow_labels = j.value("shuffle_shadow_labels", false);
    return cfg;
}

} // namespace

std::string fidelity_to_json_text(const FidelityReport& report) {
    json j;
    j["nn_distance"] = report.nn_distance;
    j["js_mean"] = report.js_mean;
    if (report.ks_mean) {
        j["ks_mean"] = *report.ks_mean;
    } else {
        j["ks_mean"] = nullptr;
    }
    if (report.chi2_mean) {
        j["chi2_mean"] = *report.chi2_mean;
    } else {
        j["chi2_mean"] = nullptr;
    }
    j["exact_matches"] = report.exact_matches;
    json cols = json::array();
    for (const auto& col : report.per_column) {
        json c;
        c["column"] = col.column;
        c["js"] = col.js;
        if (col.ks) c["ks"] = *col.ks;
        if (col.chi2) c["chi2"] = *col.chi2;
        cols.push_back(c);
    }
    j["per_column"] = cols;
    return j.dump(2) + "\n";
}

std::string clusters_to_json_text(const ClusterVulnerability& cv, uint64_t seed) {
    json j;
    j["k_requested"] = cv.k_requested;
    j["k_used"] = cv.k_used;
    j["min_cluster_fraction"] = cv.min_cluster_fraction;
    j["cluster_sizes"] = cv.cluster_sizes;
    j["degenerate"] = cv.degenerate;
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

std::string game_to_json_text(const GameReport& report) {
    json j;
    j["config"] = config_to_json(report.config);
    json rounds = json::array();
    for (const auto& round : report.rounds) {
        json r;
        r["round"] = round.round_index;
        r["target_id"] = round.target_id;
        r["auc"] = round.auc;
        json guesses = json::array();
        for (const auto& g : round.guesses) {
            json gg;
            gg["p"] = g.membership_probability;
            gg["in"] = g.truth_in;
            guesses.push_back(gg);
        }
        r["guesses"] = guesses;
        rounds.push_back(r);
    }
    j["rounds"] = rounds;
    json s;
    s["mean_auc"] = report.summary.mean_auc;
    s["max_auc"] = report.summary.max_auc;
    s["fraction_above_0.5"] = report.summary.fraction_above_half;
    s["fraction_above_0.7"] = report.summary.fraction_above_07;
    s["pooled_auc"] = report.summary.pooled_auc;
    j["summary"] = s;
    return j.dump(2) + "\n";
}

GameReport game_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, std::string("game json: ") + e.what());
    }
    GameReport report;
    report.config = config_from_json(j.at("config"));
    for (const auto& r : j.at("rounds")) {
        RoundOutcome round;
        round.round_index = r.at("round").get<int>();
        round.target_id = r.at("target_id").get<RecordId>();
        round.auc = r.at("auc").get<double>();
        for (const auto& g : r.at("guesses"))
            round.guesses.push_back(Guess{g.at("p").get<double>(), g.at("in").get<bool>()});
        report.rounds.push_back(std::move(round));
    }
    const auto& s = j.at("summary");
    report.summary.mean_auc = s.at("mean_auc").get<double>();
    report.summary.max_auc = s.at("max_auc").get<double>();
    report.summary.fraction_above_half = s.at("fraction_above_0.5").get<double>();
    report.summary.fraction_above_07 = s.at("fraction_above_0.7").get<double>();
    report.summary.pooled_auc = s.at("pooled_auc").get<double>();
    return report;
}

std::string attack_config_to_json_text(const AttackConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

AttackConfig attack_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, std::string("config json: ") + e.what());
    }
    return config_from_json(j);
}

std::string swarm_csv(const GameReport& report) {
    std::string out = "round,target_id,scenario,auc\n";
    for (const auto& round : report.rounds) {
        out += std::to_string(round.round_index);
        out.push_back(',');
        out += std::to_string(round.target_id);
        out.push_back(',');
        out += scenario_name(report.config.scenario);
        out.push_back(',');
        out += shortest(round.auc);
        out.push_back('\n');
    }
    return out;
}

std::string fidelity_csv(const FidelityReport& report) {
    std::string out = "column,js,ks,chi2\n";
    for (const auto& col : report.per_column) {
        out += col.column;
        out.push_back(',');
        out += shortest(col.js);
        out.push_back(',');
        if (col.ks) out += shortest(*col.ks);
        out.push_back(',');
        if (col.chi2) out += shortest(*col.chi2);
        out.push_back('\n');
    }
    return out;
}

std::string toy_sidecar_json_text(const ToyData& toy) {
    json j;
    j["minority_fraction"] = toy.minority_fraction;
    j["minority_count"] = toy.minority_ids.size();
    j["outlier_ids"] = toy.outlier_ids;
    j["modal_ids"] = toy.modal_ids;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(Errc::io_error, "short write to '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace synthgame
