#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

bool write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  using piggybank::cli::Format;

  CLI::App app{"piggybank: classical and quantum piggybank protocol simulator"};
  app.require_subcommand(1);

  piggybank::cli::RunSpec spec;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string out_path;
  std::string trials_out;

  const char* commands[][2] = {
      {"classical", "Run the RSA-style piggybank exchange"},
      {"quantum", "Run two-stage quantum piggybank sessions"},
      {"sweep-nm", "Minimal message photons m per cover size n at a target bit-error rate"},
      {"game-matrix", "Evaluate the 2x2 Alice/Bob vs Eve game matrix"},
      {"tomography-bench", "Angle-identification success and RMSE per grid and photon count"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", spec.config_path, "JSON config file ({} for defaults)")
        ->required();
    sub->add_option("--seed", seed, "Seed; overrides the config");
    sub->add_option("--out", out_path, "Primary output file (default: stdout)");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    if (std::string(name) == "game-matrix") {
      sub->add_option("--trials-out", trials_out, "Per-trial outcomes CSV");
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : app.get_subcommands()) {
    spec.command = sub->get_name();
    if (sub->count("--seed") > 0) spec.seed = seed;
    if (sub->count("--out") > 0) spec.out_path = out_path;
    if (!trials_out.empty()) spec.trials_out_path = trials_out;
  }
  spec.format = format == "csv" ? Format::Csv : Format::Json;

  const auto result = piggybank::cli::run(spec);

  if (!result.output.empty()) {
    if (spec.out_path) {
      if (!write_file(*spec.out_path, result.output)) {
        std::cerr << R"({"error":"IoError","message":"cannot write output file"})" << '\n';
        return piggybank::cli::kConfigError;
      }
    } else {
      std::cout << result.output;
    }
  }
  if (spec.trials_out_path && !result.trials_output.empty()) {
    write_file(*spec.trials_out_path, result.trials_output);
  }
  if (!result.console.empty()) (spec.out_path ? std::cout : std::cerr) << result.console;
  if (!result.error.empty()) std::cerr << result.error << '\n';
  return result.exit_code;
}
