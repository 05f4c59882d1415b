#pragma once

#include <string>

#include "synthgame/attack.hpp"
#include "synthgame/fidelity.hpp"
#include "synthgame/toy.hpp"

namespace synthgame {

/// JSON texts are stable byte-for-byte for equal inputs: keys serialize in
/// sorted order and doubles use shortest round-trip formatting. Wall time
/// is deliberately not part of the game report text.
std::string fidelity_to_json_text(const FidelityReport& report);
std::string clusters_to_json_text(const ClusterVulnerability& cv, uint64_t seed);
std::string game_to_json_text(const GameReport& report);
GameReport game_from_json_text(const std::string& text);

std::string attack_config_to_json_text(const AttackConfig& cfg);
AttackConfig attack_config_from_json_text(const std::string& text);

/// Swarm CSV, one row per attack round: round,target_id,scenario,auc.
std::string swarm_csv(const GameReport& report);

/// Per-column fidelity breakdown as CSV.
std::string fidelity_csv(const FidelityReport& report);

std::string toy_sidecar_json_text(const ToyData& toy);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace synthgame
