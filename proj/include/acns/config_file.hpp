#pragma once

#include <filesystem>
#include <string>

#include "acns/sweep.hpp"

namespace acns {

/// Fully resolved configuration of one run or sweep. The echo written into
/// every run directory is itself a loadable config with all defaults
/// expanded.
struct ResolvedConfig {
    SimConfig sim;
    std::vector<double> sweep_epsilons;  // empty unless [sweep] present
    int workers = 0;
    std::vector<double> q_exponents{4.0, 5.0};
    std::vector<int> modulus_multiples{2, 4, 8, 16};
    std::string output_dir = "out";
    bool write_snapshots = true;
};

/// Parse the line-oriented `key = value` format. Unknown sections or keys
/// raise ConfigError naming the offending line.
ResolvedConfig load_config(const std::filesystem::path& path);
ResolvedConfig parse_config_text(const std::string& text, const std::string& origin);

/// Serialize with defaults expanded (deterministic field order/format).
std::string config_echo(const ResolvedConfig& cfg, double resolved_dt);

SweepScenario make_scenario(const ResolvedConfig& cfg, const std::string& id);

}  // namespace acns
