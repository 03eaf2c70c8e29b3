// Command-line front end: named parameter presets, sweep orchestration and
// CSV emission. Exit codes: 0 ok, 2 bad configuration, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccrp/config.hpp"
#include "ccrp/errors.hpp"
#include "ccrp/sweep.hpp"

namespace {

using namespace ccrp;

std::vector<SystemId> parse_systems(const std::string& csv) {
    std::vector<SystemId> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(system_from_name(item));
    }
    if (out.empty()) throw ConfigError("--systems: empty list");
    return out;
}

void print_preset(std::ostream& os, const Preset& p, bool detailed) {
    os << p.name << ": " << p.summary << "\n";
    if (!detailed) return;
    const DirectProbabilities& d = p.probs;
    os << "  free sweep variable: " << p.default_axis << " (" << p.from << " to " << p.to
       << " step " << p.step << ")\n";
    os << "  lambda_e = " << p.lambda_e << ", lambda_p = " << p.lambda_p
       << " (fixed when not the axis)\n";
    os << "  pbar: pd_p.0=" << d.solo_pdp << " ps.0=" << d.solo_ps << " sd_s.0=" << d.solo_sds
       << " sd_p.0=" << d.solo_sdp << "\n";
    os << "  dhat: sd_s=" << d.delay_sds << " sd_p=" << d.delay_sdp << "\n";
    os << "  delta: pd_p.00=" << d.mpr_pdp_su0 << " pd_p.01=" << d.mpr_pdp_su1
       << " sd_s.00=" << d.mpr_sds_i0 << " sd_s.10=" << d.mpr_sds_i1
       << " sd_p.00=" << d.mpr_sdp_i0 << " sd_p.10=" << d.mpr_sdp_i1 << "\n";
    os << "  systems: ";
    for (std::size_t i = 0; i < p.systems.size(); ++i)
        os << (i ? "," : "") << p.systems[i];
    os << "\n";
}

int run_cli(int argc, char** argv) {
    CLI::App app{"throughput bounds and slot-level simulation of a cooperative "
                 "energy-harvesting cognitive-radio link"};
    app.require_subcommand(1);

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate systems across a parameter sweep");
    std::string preset_name, config_path, axis_str, systems_str, out_path;
    double from = -1.0, to = -1.0, step = -1.0;
    double lambda_p_override = -1.0, lambda_e_override = -1.0;
    int grid_points = 0;
    bool with_sim = false;
    std::uint64_t replicas = 0, slots = 0, seed = 0;
    bool seed_set = false;

    sweep_cmd->add_option("--preset", preset_name, "built-in parameter family (fig2, fig3, fig5)");
    sweep_cmd->add_option("--config", config_path, "JSON configuration file");
    sweep_cmd->add_option("--axis", axis_str, "swept axis: lambda_p | lambda_e | X | B");
    sweep_cmd->add_option("--from", from, "first axis value");
    sweep_cmd->add_option("--to", to, "last axis value");
    sweep_cmd->add_option("--step", step, "axis increment (> 0)");
    sweep_cmd->add_option("--systems", systems_str, "comma list of S1,S2,S3,Sc,SIM");
    sweep_cmd->add_option("--grid", grid_points, "grid points per policy axis (>= 2)");
    sweep_cmd->add_flag("--sim", with_sim, "append a SIM row per sweep value");
    sweep_cmd->add_option("--replicas", replicas, "simulation replicas");
    sweep_cmd->add_option("--slots", slots, "slots per replica");
    sweep_cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_set = true;
    });
    sweep_cmd->add_option("--lambda-p", lambda_p_override, "fixed primary arrival rate");
    sweep_cmd->add_option("--lambda-e", lambda_e_override, "fixed energy arrival rate");
    sweep_cmd->add_option("--out", out_path, "CSV destination (default stdout)");

    // --- presets ---
    auto* presets_cmd = app.add_subcommand("presets", "list built-in parameter presets");
    std::string presets_arg;
    presets_cmd->add_option("name", presets_arg, "show one preset in detail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints the message or the help text
        return code == 0 ? 0 : 2;
    }

    if (presets_cmd->parsed()) {
        if (presets_arg.empty()) {
            for (const Preset& p : presets()) print_preset(std::cout, p, false);
        } else {
            print_preset(std::cout, preset_by_name(presets_arg), true);
        }
        return 0;
    }

    // sweep
    if (preset_name.empty() == config_path.empty())
        throw ConfigError("sweep: exactly one of --preset or --config is required");

    RunConfig cfg;
    SweepSpec spec;
    if (!preset_name.empty()) {
        const Preset& p = preset_by_name(preset_name);
        cfg = preset_config(preset_name);
        spec.axis = axis_from_name(p.default_axis);
        spec.from = p.from;
        spec.to = p.to;
        spec.step = p.step;
        spec.systems.clear();
        for (const std::string& s : p.systems) spec.systems.push_back(system_from_name(s));
    } else {
        cfg = load_config(config_path);
    }

    if (!axis_str.empty()) spec.axis = axis_from_name(axis_str);
    if (from >= 0.0) spec.from = from;
    if (to >= 0.0) spec.to = to;
    if (step > 0.0) spec.step = step;
    if (!systems_str.empty()) spec.systems = parse_systems(systems_str);
    if (grid_points > 0) {
        cfg.grid.points = grid_points;
        cfg.grid.validate();
    }
    if (lambda_p_override >= 0.0) {
        if (lambda_p_override > 1.0) throw ConfigError("--lambda-p outside [0,1]");
        cfg.lambda_p = lambda_p_override;
    }
    if (lambda_e_override >= 0.0) {
        if (lambda_e_override > 1.0) throw ConfigError("--lambda-e outside [0,1]");
        cfg.lambda_e = lambda_e_override;
    }
    if (with_sim) {
        bool has_sim_row = false;
        for (SystemId id : spec.systems) has_sim_row |= id == SystemId::Sim;
        if (!has_sim_row) spec.systems.push_back(SystemId::Sim);
    }
    if (replicas > 0) cfg.sim.replicas = replicas;
    if (slots > 0) cfg.sim.slots = slots;
    if (seed_set) cfg.sim.seed = seed;
    cfg.sim.validate();

    const std::vector<SweepRow> rows = run_sweep(cfg, spec);
    if (out_path.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file " + out_path);
        write_csv(out, rows);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ccrp::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const CLI::ParseError&) {
        // CLI11_PARSE already printed the message / handled --help.
        return 2;
    } catch (const ccrp::InvariantError& err) {
        std::cerr << "internal invariant violation: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return 3;
    }
}
