#include "piggybank/serialization.hpp"

#include <cstdio>
#include <initializer_list>
#include <limits>

#include "piggybank/error.hpp"

namespace piggybank {

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::InvalidConfig, std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) {
      throw Error(ErrorCode::InvalidConfig,
                  "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

/// Runs a reader, turning nlohmann type errors into InvalidConfig.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

json opt_angle(const std::optional<Angle>& a) {
  return a ? json(a->radians()) : json(nullptr);
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

SiphonPlan plan_from_json(const json& j) {
  reject_unknown(j, {"cover_out", "cover_return", "message"}, "siphon plan");
  SiphonPlan p;
  read(j, "cover_out", p.cover_out);
  read(j, "cover_return", p.cover_return);
  read(j, "message", p.message);
  return p;
}

json to_json(const SiphonPlan& p) {
  return {{"cover_out", p.cover_out}, {"cover_return", p.cover_return}, {"message", p.message}};
}

}  // namespace

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json bigint_to_json(const classical::BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) {
    return json(v.convert_to<std::uint64_t>());
  }
  if (v < 0 && v >= std::numeric_limits<std::int64_t>::min()) {
    return json(v.convert_to<std::int64_t>());
  }
  return json(v.str());
}

classical::BigInt bigint_from_json(const json& j) {
  if (j.is_number_unsigned()) return classical::BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) return classical::BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return classical::BigInt(j.get<std::string>());
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "not a decimal integer: " + j.get<std::string>());
    }
  }
  throw Error(ErrorCode::InvalidConfig, "expected an integer or decimal string, got " + j.dump());
}

json to_json(const classical::ClassicalTranscript& t) {
  return {
      {"n", bigint_to_json(t.n)},
      {"e", bigint_to_json(t.e)},
      {"R", bigint_to_json(t.R)},
      {"fR", bigint_to_json(t.fR)},
      {"K", bigint_to_json(t.K)},
      {"S", bigint_to_json(t.S)},
      {"C", bigint_to_json(t.C)},
      {"fK", bigint_to_json(t.fK)},
      {"recovered_K", bigint_to_json(t.recovered_K)},
      {"recovered_S", bigint_to_json(t.recovered_S)},
      {"reduced", t.reduced},
  };
}

json to_json(const SessionConfig& c) {
  return {
      {"n_cover", c.n_cover},
      {"m_message", c.m_message},
      {"grid_size", c.grid.size()},
      {"message_basis", c.message_basis.radians()},
      {"message_bits", c.message_bits},
      {"seed", c.seed},
      {"loss_rate", c.loss_rate},
      {"detection_confidence", c.detection_confidence},
      {"m_guard_ratio", c.m_guard_ratio},
      {"god_view", c.god_view},
  };
}

json to_json(const LegRecord& r) {
  return {{"sent", r.sent},       {"received", r.received},       {"siphoned", r.siphoned},
          {"lost", r.lost},       {"intercepted", r.intercepted}};
}

json to_json(const Transcript& t) {
  json legs = json::object();
  for (const Stage s : {Stage::CoverOut, Stage::CoverReturn, Stage::Message}) {
    legs[std::string(to_string(s))] = to_json(t.leg(s));
  }
  json tallies = json::array();
  std::size_t ties = 0;
  for (const auto& b : t.tallies) {
    tallies.push_back({{"aligned", b.aligned}, {"orthogonal", b.orthogonal}, {"tie", b.tie}});
    ties += b.tie ? 1 : 0;
  }
  json out = {
      {"config", to_json(t.config)},
      {"phi", t.phi.radians()},
      {"chi", t.chi.radians()},
      {"theta", opt_angle(t.theta)},
      {"theta_index", opt(t.theta_index)},
      {"theta_hat", opt_angle(t.theta_hat)},
      {"theta_hat_index", opt(t.theta_hat_index)},
      {"legs", legs},
      {"outcome", to_string(t.outcome)},
      {"detected", t.outcome == SessionOutcome::AbortDetected},
      {"detected_on", t.detected_on ? json(to_string(*t.detected_on)) : json(nullptr)},
      {"decoded_bits", t.decoded_bits},
      {"tallies", tallies},
      {"ties_flagged", ties},
      {"bit_errors", t.bit_errors()},
  };
  if (t.config.god_view) {
    json snaps = json::array();
    for (const auto& s : t.god_view) {
      snaps.push_back({{"leg", to_string(s.leg)}, {"angles", s.angles}});
    }
    out["god_view"] = snaps;
  }
  return out;
}

json to_json(const EveReport& r) {
  return {
      {"obtained",
       {{"cover_out", r.obtained[0]}, {"cover_return", r.obtained[1]}, {"message", r.obtained[2]}}},
      {"total_obtained", r.total_obtained()},
      {"theta_hat", opt_angle(r.theta_hat)},
      {"theta_hat_index", opt(r.theta_hat_index)},
      {"bit_guesses", r.bit_guesses},
  };
}

json to_json(const GameCell& c) {
  return {
      {"row", to_string(c.row)},
      {"col", to_string(c.col)},
      {"verdict", to_string(c.verdict)},
      {"total_photons", c.total_photons},
      {"threshold", c.threshold},
      {"eve_bit_accuracy", c.eve_bit_accuracy},
      {"detected", c.detected},
      {"detection_rate", c.detection_rate},
      {"trials", c.trials},
  };
}

json to_json(const GameMatrix& m) {
  json cells = json::array();
  for (const auto& row : m.cells) {
    for (const auto& c : row) cells.push_back(to_json(c));
  }
  return {{"threshold", m.threshold},
          {"cells", cells},
          {"matches_reference_pattern", m.matches_reference_pattern()}};
}

json to_json(const SweepRow& r) {
  return {{"n_cover", r.n_cover},
          {"required_m", opt(r.required_m)},
          {"achieved_error", r.achieved_error},
          {"trials", r.trials}};
}

json to_json(const BenchResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"grid_size", row.grid_size},
                    {"photons", row.photons},
                    {"paper_budget", row.paper_budget},
                    {"success_rate", row.success_rate},
                    {"rmse", row.rmse},
                    {"trials", row.trials}});
  }
  json reqs = json::array();
  for (const auto& q : r.requirements) {
    reqs.push_back({{"grid_size", q.grid_size},
                    {"paper_budget", q.paper_budget},
                    {"empirical_requirement", opt(q.empirical)}});
  }
  return {{"rows", rows}, {"requirements", reqs}};
}

SessionConfig session_config_from_json(const json& j, SessionConfig base) {
  return guarded([&] {
    reject_unknown(j,
                   {"n_cover", "m_message", "grid_size", "message_basis", "message_bits", "seed",
                    "loss_rate", "detection_confidence", "m_guard_ratio", "god_view"},
                   "session config");
    SessionConfig c = std::move(base);
    read(j, "n_cover", c.n_cover);
    read(j, "m_message", c.m_message);
    if (j.contains("grid_size")) c.grid = AngleGrid(j.at("grid_size").get<std::size_t>());
    if (j.contains("message_basis")) c.message_basis = Angle(j.at("message_basis").get<double>());
    if (j.contains("message_bits")) {
      const auto& bits = j.at("message_bits");
      c.message_bits.clear();
      if (bits.is_string()) {
        for (char ch : bits.get<std::string>()) {
          if (ch != '0' && ch != '1') {
            throw Error(ErrorCode::InvalidConfig, "message_bits string must contain only 0/1");
          }
          c.message_bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
      } else {
        c.message_bits = bits.get<std::vector<std::uint8_t>>();
      }
    }
    read(j, "seed", c.seed);
    read(j, "loss_rate", c.loss_rate);
    read(j, "detection_confidence", c.detection_confidence);
    read(j, "m_guard_ratio", c.m_guard_ratio);
    read(j, "god_view", c.god_view);
    return c;
  });
}

AttackStrategy attack_from_json(const json& j) {
  return guarded([&] {
    reject_unknown(j, {"mode", "siphon_counts", "eve_grid_size", "exploit_loss"}, "adversary");
    AttackStrategy a;
    if (j.contains("mode")) {
      const auto mode = j.at("mode").get<std::string>();
      if (mode == "none") {
        a.mode = AttackMode::None;
      } else if (mode == "siphon") {
        a.mode = AttackMode::Siphon;
      } else if (mode == "intercept_resend") {
        a.mode = AttackMode::InterceptResend;
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown adversary mode '" + mode + "'");
      }
    }
    if (j.contains("siphon_counts")) a.siphon_counts = plan_from_json(j.at("siphon_counts"));
    if (j.contains("eve_grid_size")) a.eve_grid = AngleGrid(j.at("eve_grid_size").get<std::size_t>());
    read(j, "exploit_loss", a.exploit_loss);
    return a;
  });
}

GameConfig game_config_from_json(const json& j) {
  return guarded([&] {
    reject_unknown(j,
                   {"low", "high", "tomography_photons", "eve_budget_factor", "few", "many",
                    "eve_grid_size", "trials", "seed"},
                   "game config");
    GameConfig g = default_game_config();
    if (j.contains("low")) g.low = session_config_from_json(j.at("low"), g.low);
    if (j.contains("high")) g.high = session_config_from_json(j.at("high"), g.high);
    read(j, "tomography_photons", g.tomography_photons);
    read(j, "eve_budget_factor", g.eve_budget_factor);
    if (j.contains("few")) g.few = plan_from_json(j.at("few"));
    if (j.contains("many")) g.many = plan_from_json(j.at("many"));
    if (j.contains("eve_grid_size")) g.eve_grid = AngleGrid(j.at("eve_grid_size").get<std::size_t>());
    read(j, "trials", g.trials);
    read(j, "seed", g.seed);
    return g;
  });
}

SweepConfig sweep_config_from_json(const json& j) {
  return guarded([&] {
    reject_unknown(j, {"n_ladder", "max_m", "epsilon", "trials", "seed", "base"}, "sweep config");
    SweepConfig s;
    read(j, "n_ladder", s.n_ladder);
    read(j, "max_m", s.max_m);
    read(j, "epsilon", s.epsilon);
    read(j, "trials", s.trials);
    read(j, "seed", s.seed);
    if (j.contains("base")) s.base = session_config_from_json(j.at("base"), s.base);
    return s;
  });
}

BenchConfig bench_config_from_json(const json& j) {
  return guarded([&] {
    reject_unknown(j, {"grid_sizes", "photon_ladder", "trials", "seed", "target_success"},
                   "tomography-bench config");
    BenchConfig b;
    read(j, "grid_sizes", b.grid_sizes);
    read(j, "photon_ladder", b.photon_ladder);
    read(j, "trials", b.trials);
    read(j, "seed", b.seed);
    read(j, "target_success", b.target_success);
    return b;
  });
}

json to_json(const AttackStrategy& a) {
  return {{"mode", to_string(a.mode)},
          {"siphon_counts", to_json(a.siphon_counts)},
          {"eve_grid_size", a.eve_grid.size()},
          {"exploit_loss", a.exploit_loss}};
}

json to_json(const GameConfig& g) {
  json out = {{"low", to_json(g.low)},
              {"high", to_json(g.high)},
              {"tomography_photons", g.tomography_photons},
              {"eve_budget_factor", g.eve_budget_factor},
              {"few", to_json(g.few)},
              {"eve_grid_size", g.eve_grid.size()},
              {"trials", g.trials},
              {"seed", g.seed}};
  out["many"] = g.many ? to_json(*g.many) : json(nullptr);
  return out;
}

json to_json(const SweepConfig& s) {
  return {{"n_ladder", s.n_ladder}, {"max_m", s.max_m}, {"epsilon", s.epsilon},
          {"trials", s.trials},     {"seed", s.seed},   {"base", to_json(s.base)}};
}

json to_json(const BenchConfig& b) {
  return {{"grid_sizes", b.grid_sizes},
          {"photon_ladder", b.photon_ladder},
          {"trials", b.trials},
          {"seed", b.seed},
          {"target_success", b.target_success}};
}

}  // namespace piggybank
