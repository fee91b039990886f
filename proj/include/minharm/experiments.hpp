#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace minharm {

// Flat line-oriented `key = value` format with '#' comments and dotted
// keys.  Unknown and duplicate keys are rejected at run time.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path);

struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> budget;
};

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunArtifacts {
  std::string experiment;
  std::vector<Assertion> assertions;
  std::filesystem::path out_dir;
  std::filesystem::path results_csv, summary_json, manifest_cfg;
  bool all_pass() const;
};

// Runs one experiment: writes results.csv, summary.json and manifest.cfg
// (the fully resolved config, re-runnable) into the output directory.
// Throws ConfigError for invalid configs.
RunArtifacts run_experiment(const std::map<std::string, std::string>& config,
                            const CliOverrides& overrides = {});

std::string list_experiments_text();

// Command line entry: `run <config> [--out dir] [--seed s] [--budget n]`
// and `list`.  Returns the process exit code: 0 all assertions pass,
// 1 assertion failure, 2 configuration/usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace minharm
