// Command-line front end: evaluates a preset experiment sweep and emits CSV.
// Exit codes: 0 success, 1 usage or validation error, 2 oracle-check failure.

#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deprep/deprep.hpp"

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement distribution experiment runner"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "evaluate a preset sweep and emit CSV");
  std::string config_path;
  std::string preset_token;
  std::string out_path;
  std::vector<std::string> overrides;
  CLI::Option* copt =
      run->add_option("--config", config_path, "config file of key=value lines");
  CLI::Option* popt = run->add_option("--preset", preset_token, "preset name");
  copt->excludes(popt);
  popt->excludes(copt);
  run->add_option("--set", overrides, "override one config key, as key=value")->type_size(1);
  run->add_option("--out", out_path, "output CSV path (default: stdout, or the config's out key)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (config_path.empty() && preset_token.empty()) {
      throw std::invalid_argument("either --config or --preset is required");
    }
    std::string text = config_path.empty() ? "preset=" + preset_token + "\n"
                                           : read_file(config_path);
    for (const std::string& kv : overrides) text += kv + "\n";

    deprep::experiments::ExperimentConfig cfg = deprep::experiments::parse_config(text);
    std::string target = !out_path.empty() ? out_path : cfg.out;
    cfg.out.clear();

    deprep::experiments::ResultTable table = deprep::experiments::run_experiment(cfg);
    table.metadata.emplace_back("generated", utc_timestamp());

    if (!target.empty()) {
      deprep::experiments::emit_csv(table, target);
    } else {
      std::cout << deprep::experiments::to_csv(table);
    }

    if (cfg.preset == deprep::experiments::Preset::OracleCheck &&
        !deprep::experiments::oracle_check_passed(table)) {
      std::cerr << "oracle-check: at least one gating comparison failed\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
