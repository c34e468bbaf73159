#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "piggybank/adversary.hpp"
#include "piggybank/classical.hpp"
#include "piggybank/error.hpp"
#include "piggybank/experiments.hpp"
#include "piggybank/protocol.hpp"
#include "piggybank/serialization.hpp"

namespace piggybank::cli {

namespace {

using classical::BigInt;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::RecoveryMismatch:
    case ErrorCode::InsufficientPhotons:
    case ErrorCode::EmptyBatch:
    case ErrorCode::WrongStage:
    case ErrorCode::SiphonExceedsBatch:
      return kProtocolFailure;
    default:
      return kConfigError;
  }
}

CommandResult failure(int exit_code, std::string_view name, const std::string& message) {
  CommandResult r;
  r.exit_code = exit_code;
  r.error = json{{"error", name}, {"message", message}, {"exit_code", exit_code}}.dump();
  return r;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_preamble(std::uint64_t seed, const std::string& hash) {
  return "# piggybank " + std::string(kVersion) + " seed=" + std::to_string(seed) +
         " config_hash=" + hash + "\n";
}

json meta(std::string_view command, std::uint64_t seed, const std::string& hash) {
  return {{"command", command},
          {"version", kVersion},
          {"seed", seed},
          {"config_hash", hash}};
}

void require_json_only(const RunSpec& spec) {
  if (spec.format != Format::Json) {
    throw Error(ErrorCode::InvalidConfig, spec.command + " only supports --format json");
  }
}

std::uint64_t effective_seed(const json& config, const RunSpec& spec) {
  if (spec.seed) return *spec.seed;
  if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
  return 0;
}

/// Splits off the listed keys; the rest goes back to the caller.
json take(json& from, std::initializer_list<const char*> keys) {
  json out = json::object();
  for (const char* k : keys) {
    if (from.contains(k)) {
      out[k] = from.at(k);
      from.erase(k);
    }
  }
  return out;
}

}  // namespace

CommandResult cmd_classical(const json& config, const RunSpec& spec) {
  require_json_only(spec);
  json cfg = config;
  const std::uint64_t seed = effective_seed(cfg, spec);
  cfg["seed"] = seed;
  const std::string hash = config_hash(cfg);

  json rest = cfg;
  const json known = take(rest, {"p", "q", "e", "n", "d", "R", "S", "hash", "reduce", "seed"});
  if (!rest.empty()) {
    throw Error(ErrorCode::InvalidConfig, "unknown key '" + rest.begin().key() + "' in classical config");
  }
  if (!known.contains("e") || !known.contains("S")) {
    throw Error(ErrorCode::InvalidConfig, "classical config needs e and S");
  }

  classical::PiggyBankKeys keys;
  const BigInt e = bigint_from_json(known.at("e"));
  if (known.contains("p") && known.contains("q")) {
    keys = classical::keygen(bigint_from_json(known.at("p")), bigint_from_json(known.at("q")), e);
    if (known.contains("d") && bigint_from_json(known.at("d")) != keys.d) {
      throw Error(ErrorCode::InvalidConfig, "configured d does not match the generated key");
    }
  } else if (known.contains("n") && known.contains("d")) {
    keys = classical::keys_from_exponents(bigint_from_json(known.at("n")), e,
                                          bigint_from_json(known.at("d")));
  } else {
    throw Error(ErrorCode::InvalidConfig, "classical config needs p, q or n, d");
  }

  classical::HashSpec hash_spec = classical::ModularHash{};
  if (known.contains("hash")) {
    const json& h = known.at("hash");
    const std::string mode = h.value("mode", "modular");
    if (mode == "explicit") {
      hash_spec = classical::ExplicitHash{bigint_from_json(h.at("K"))};
    } else if (mode == "modular") {
      hash_spec = classical::ModularHash{h.value("prime", std::uint64_t{251})};
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown hash mode '" + mode + "'");
    }
  }
  std::optional<BigInt> R;
  if (known.contains("R")) R = bigint_from_json(known.at("R"));
  const bool reduce = known.value("reduce", true);

  Rng rng(seed);
  const auto transcript = classical::run_classical_session(
      keys, R, bigint_from_json(known.at("S")), hash_spec, reduce, rng);

  json out = meta("classical", seed, hash);
  out["transcript"] = to_json(transcript);
  CommandResult r;
  r.output = out.dump(2) + "\n";
  return r;
}

CommandResult cmd_quantum(const json& config, const RunSpec& spec) {
  require_json_only(spec);
  json cfg = config;
  const std::uint64_t seed = effective_seed(cfg, spec);
  cfg["seed"] = seed;
  const std::string hash = config_hash(cfg);

  json session_part = cfg;
  const json extra = take(session_part, {"adversary", "sessions", "random_bits"});
  const SessionConfig base = session_config_from_json(session_part);
  base.validate();
  const std::size_t sessions = extra.value("sessions", std::size_t{1});
  if (sessions == 0) throw Error(ErrorCode::InvalidConfig, "sessions must be >= 1");
  const bool random_bits = extra.value("random_bits", false);
  std::optional<AttackStrategy> attack;
  if (extra.contains("adversary")) attack = attack_from_json(extra.at("adversary"));

  json runs = json::array();
  std::size_t completed = 0, bits = 0, errors = 0, detected = 0;
  for (std::size_t i = 0; i < sessions; ++i) {
    SessionConfig cfg_i = base;
    cfg_i.seed = sessions == 1 ? seed : derive_seed(seed, i);
    if (random_bits) {
      Rng bits_rng(derive_seed(cfg_i.seed, 0));
      for (auto& b : cfg_i.message_bits) b = bits_rng.bernoulli(0.5) ? 1 : 0;
    }
    json entry;
    if (attack) {
      Eavesdropper eve(*attack, public_knowledge(cfg_i), derive_seed(cfg_i.seed, kEveStream));
      const Transcript t = run_session(cfg_i, &eve);
      const EveReport report = eve.report();
      entry = to_json(t);
      entry["eve"] = to_json(report);
      entry["eve"]["bit_accuracy"] = eve_bit_accuracy(report, cfg_i.message_bits);
      completed += t.aborted() ? 0 : 1;
      detected += t.outcome == SessionOutcome::AbortDetected ? 1 : 0;
      bits += t.decoded_bits.size();
      errors += t.bit_errors();
    } else {
      const Transcript t = run_session(cfg_i);
      entry = to_json(t);
      completed += t.aborted() ? 0 : 1;
      detected += t.outcome == SessionOutcome::AbortDetected ? 1 : 0;
      bits += t.decoded_bits.size();
      errors += t.bit_errors();
    }
    runs.push_back(std::move(entry));
  }

  json out = meta("quantum", seed, hash);
  if (attack) out["adversary"] = to_json(*attack);
  out["summary"] = {{"sessions", sessions},
                    {"completed", completed},
                    {"detected", detected},
                    {"bits", bits},
                    {"bit_errors", errors},
                    {"bit_error_rate", bits ? static_cast<double>(errors) / bits : 0.0}};
  out["sessions"] = runs;
  CommandResult r;
  r.output = out.dump(2) + "\n";
  return r;
}

CommandResult cmd_sweep_nm(const json& config, const RunSpec& spec) {
  SweepConfig sweep = sweep_config_from_json(config);
  if (spec.seed) sweep.seed = *spec.seed;
  const std::string hash = config_hash(to_json(sweep));
  const auto rows = sweep_nm(sweep);

  CommandResult r;
  if (spec.format == Format::Csv) {
    std::ostringstream os;
    os << csv_preamble(sweep.seed, hash);
    os << "n_cover,required_m,achieved_error,trials,seed\n";
    for (const auto& row : rows) {
      os << row.n_cover << ','
         << (row.required_m ? std::to_string(*row.required_m) : std::string("MNotFound")) << ','
         << num(row.achieved_error) << ',' << row.trials << ',' << sweep.seed << '\n';
    }
    r.output = os.str();
  } else {
    json out = meta("sweep-nm", sweep.seed, hash);
    out["epsilon"] = sweep.epsilon;
    json jrows = json::array();
    for (const auto& row : rows) {
      json jr = to_json(row);
      jr["status"] = row.required_m ? "ok" : "MNotFound";
      jrows.push_back(jr);
    }
    out["rows"] = jrows;
    r.output = out.dump(2) + "\n";
  }
  return r;
}

namespace {

std::string render_table(const GameMatrix& m, const GameConfig& g) {
  const auto cell_text = [&](GameRow row, GameCol col) {
    const GameCell& c = m.at(row, col);
    std::string verdict(to_string(c.verdict));
    if (row == GameRow::LowNM && col == GameCol::SiphonFew && c.verdict == Verdict::Safe) {
      verdict += " (low range)";
    }
    std::ostringstream photons;
    photons << "photons " << c.total_photons << (c.total_photons >= c.threshold ? " >= 2n" : " < 2n");
    std::ostringstream eve;
    eve << "eve acc " << std::fixed << std::setprecision(3) << c.eve_bit_accuracy << ", det "
        << std::setprecision(3) << c.detection_rate;
    return std::array<std::string, 3>{verdict, photons.str(), eve.str()};
  };

  constexpr int kLabel = 30;
  constexpr int kCell = 34;
  std::ostringstream os;
  os << "Game matrix: threshold 2n = " << m.threshold << " photons, " << g.trials
     << " trials per cell\n";
  os << "low n, m = (" << g.low.n_cover << ", " << g.low.m_message << "), high n, m = ("
     << g.high.n_cover << ", " << g.high.m_message << "), channel loss "
     << g.low.loss_rate << " / " << g.high.loss_rate << "\n\n";
  os << std::left << std::setw(kLabel) << "" << "| " << std::setw(kCell)
     << "Eve siphons few photons" << "| " << "Eve siphons many photons" << '\n';
  os << std::string(kLabel, '-') << '+' << std::string(kCell + 1, '-') << '+'
     << std::string(kCell, '-') << '\n';
  for (const GameRow row : {GameRow::LowNM, GameRow::HighNM}) {
    const auto few = cell_text(row, GameCol::SiphonFew);
    const auto many = cell_text(row, GameCol::SiphonMany);
    for (int line = 0; line < 3; ++line) {
      const std::string label =
          line == 0 ? (row == GameRow::LowNM ? "Alice and Bob use low n, m"
                                             : "Alice and Bob use high n, m")
                    : "";
      os << std::setw(kLabel) << label << "| " << std::setw(kCell) << few[line] << "| "
         << many[line] << '\n';
    }
  }
  os << "\nnote: channel loss is what lets Eve hide a large siphon; in a lossless channel every\n"
        "      missing photon is detected and the UNSAFE cell cannot occur.\n";
  os << "pattern " << (m.matches_reference_pattern() ? "matches" : "DOES NOT match")
     << " [SAFE, SAFE_DETECTED; SAFE, UNSAFE]\n";
  return os.str();
}

}  // namespace

CommandResult cmd_game_matrix(const json& config, const RunSpec& spec) {
  GameConfig game = game_config_from_json(config);
  if (spec.seed) game.seed = *spec.seed;
  const std::string hash = config_hash(to_json(game));
  const GameMatrix matrix = evaluate_game(game);

  CommandResult r;
  if (spec.format == Format::Csv) {
    std::ostringstream os;
    os << csv_preamble(game.seed, hash);
    os << "row,col,verdict,total_photons,threshold,eve_bit_accuracy,detected,trials\n";
    for (const auto& row : matrix.cells) {
      for (const auto& c : row) {
        os << to_string(c.row) << ',' << to_string(c.col) << ',' << to_string(c.verdict) << ','
           << num(c.total_photons) << ',' << c.threshold << ',' << num(c.eve_bit_accuracy) << ','
           << (c.detected ? "true" : "false") << ',' << c.trials << '\n';
      }
    }
    r.output = os.str();
  } else {
    json out = meta("game-matrix", game.seed, hash);
    out["matrix"] = to_json(matrix);
    r.output = out.dump(2) + "\n";
  }

  if (spec.trials_out_path) {
    std::ostringstream os;
    os << csv_preamble(game.seed, hash);
    os << "row,col,trial,seed,total_photons,detected,outcome,eve_bit_accuracy,bob_bit_errors,"
          "verdict\n";
    for (const auto& t : matrix.trials) {
      os << to_string(t.row) << ',' << to_string(t.col) << ',' << t.trial << ',' << t.seed << ','
         << t.total_photons << ',' << (t.detected ? "true" : "false") << ','
         << to_string(t.outcome) << ',' << num(t.eve_bit_accuracy) << ',' << t.bob_bit_errors
         << ',' << to_string(t.verdict) << '\n';
    }
    r.trials_output = os.str();
  }

  r.console = render_table(matrix, game);
  if (!matrix.matches_reference_pattern()) {
    r.exit_code = kPatternMismatch;
    r.error = json{{"error", "PatternMismatch"},
                   {"message", "game-matrix verdicts deviate from [SAFE, SAFE_DETECTED; SAFE, UNSAFE]"},
                   {"exit_code", kPatternMismatch}}
                  .dump();
  }
  return r;
}

CommandResult cmd_tomography_bench(const json& config, const RunSpec& spec) {
  BenchConfig bench = bench_config_from_json(config);
  if (spec.seed) bench.seed = *spec.seed;
  const std::string hash = config_hash(to_json(bench));
  const BenchResult result = tomography_bench(bench);

  CommandResult r;
  if (spec.format == Format::Csv) {
    std::ostringstream os;
    os << csv_preamble(bench.seed, hash);
    os << "grid_size,photons,paper_budget,success_rate,rmse,trials\n";
    for (const auto& row : result.rows) {
      os << row.grid_size << ',' << row.photons << ',' << row.paper_budget << ','
         << num(row.success_rate) << ',' << num(row.rmse) << ',' << row.trials << '\n';
    }
    r.output = os.str();
  } else {
    json out = meta("tomography-bench", bench.seed, hash);
    out["target_success"] = bench.target_success;
    out["result"] = to_json(result);
    r.output = out.dump(2) + "\n";
  }
  return r;
}

CommandResult run(const RunSpec& spec, const json& config) {
  try {
    if (spec.command == "classical") return cmd_classical(config, spec);
    if (spec.command == "quantum") return cmd_quantum(config, spec);
    if (spec.command == "sweep-nm") return cmd_sweep_nm(config, spec);
    if (spec.command == "game-matrix") return cmd_game_matrix(config, spec);
    if (spec.command == "tomography-bench") return cmd_tomography_bench(config, spec);
    return failure(kConfigError, "UnknownCommand", "unknown command '" + spec.command + "'");
  } catch (const Error& e) {
    return failure(exit_code_for(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return failure(kConfigError, "InvalidConfig", e.what());
  }
}

CommandResult run(const RunSpec& spec) {
  std::ifstream in(spec.config_path);
  if (!in) {
    return failure(kConfigError, "InvalidConfig", "cannot open config file '" + spec.config_path + "'");
  }
  json config;
  try {
    config = json::parse(in);
  } catch (const json::exception& e) {
    return failure(kConfigError, "InvalidConfig", e.what());
  }
  return run(spec, config);
}

}  // namespace piggybank::cli
