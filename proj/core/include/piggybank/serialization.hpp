#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "piggybank/adversary.hpp"
#include "piggybank/classical.hpp"
#include "piggybank/experiments.hpp"
#include "piggybank/protocol.hpp"

namespace piggybank {

using nlohmann::json;

inline constexpr std::string_view kVersion = PIGGYBANK_VERSION;

/// FNV-1a 64 of the compact dump (keys are sorted by nlohmann::json), as 16 hex digits.
std::string config_hash(const json& config);

// Integers that fit in 64 bits serialize as JSON numbers, larger ones as
// decimal strings. Parsing accepts either.
json bigint_to_json(const classical::BigInt& v);
classical::BigInt bigint_from_json(const json& j);

json to_json(const classical::ClassicalTranscript& t);
json to_json(const SessionConfig& c);
json to_json(const LegRecord& r);
/// god_view snapshots are included only when the config asked for them.
json to_json(const Transcript& t);
json to_json(const EveReport& r);
json to_json(const GameCell& c);
json to_json(const GameMatrix& m);
json to_json(const SweepRow& r);
json to_json(const BenchResult& r);
json to_json(const AttackStrategy& a);
json to_json(const GameConfig& g);
json to_json(const SweepConfig& s);
json to_json(const BenchConfig& b);

// Config readers: start from defaults and override present keys. Unknown
// keys are rejected with InvalidConfig.
SessionConfig session_config_from_json(const json& j, SessionConfig base = {});
AttackStrategy attack_from_json(const json& j);
GameConfig game_config_from_json(const json& j);
SweepConfig sweep_config_from_json(const json& j);
BenchConfig bench_config_from_json(const json& j);

}  // namespace piggybank
