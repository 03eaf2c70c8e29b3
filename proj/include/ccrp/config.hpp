#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccrp/channel.hpp"
#include "ccrp/optimizer.hpp"
#include "ccrp/simulator.hpp"

namespace ccrp {

// Everything a run needs: the channel (kept in physical form when given that
// way, so packet-size sweeps can rebuild it), arrival rates, grid resolution
// and the simulation budget.
struct RunConfig {
    std::optional<PhysicalConfig> physical; // present iff channel.physical was used
    ChannelTable table{};
    double lambda_p = 0.0;
    double lambda_e = 0.0;
    GridSpec grid{};
    SimOptions sim{};
};

// Parse the JSON config file with sections `channel` (physical | direct),
// `arrivals`, `policy-grid`, `simulation`. Unknown or malformed keys raise
// ConfigError naming the offending entry.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text); // same, from a string

// Built-in parameter families.
struct Preset {
    std::string name;
    std::string summary;
    DirectProbabilities probs;
    double lambda_e = 0.0;
    double lambda_p = 0.0;   // fixed value when it is not the swept axis
    std::string default_axis; // "lambda_p" | "lambda_e" | "X" | "B"
    double from = 0.0, to = 0.0, step = 0.0;
    std::vector<std::string> systems;
};

const std::vector<Preset>& presets();
const Preset& preset_by_name(const std::string& name); // ConfigError if unknown
RunConfig preset_config(const std::string& name);

} // namespace ccrp
