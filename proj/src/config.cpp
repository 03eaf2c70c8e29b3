#include "ccrp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ccrp/errors.hpp"

namespace ccrp {

namespace {

using nlohmann::json;

double get_number(const json& obj, const std::string& section, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(section + "." + key + ": missing");
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(section + "." + key + ": expected a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& section, const std::string& key,
                     double fallback) {
    return obj.contains(key) ? get_number(obj, section, key) : fallback;
}

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError(section + "." + it.key() + ": unknown key");
}

PhysicalConfig parse_physical(const json& obj) {
    const std::string s = "channel.physical";
    reject_unknown(obj, s,
                   {"bits", "slot_s", "bandwidth_hz", "tau_s", "energy_j", "p_primary_w",
                    "noise_w.d_p", "noise_w.s", "noise_w.d_s", "sigma.pd_p", "sigma.ps",
                    "sigma.sd_s", "sigma.sd_p", "sigma.pd_s"});
    PhysicalConfig cfg;
    cfg.packet_bits = get_number(obj, s, "bits");
    cfg.slot_seconds = get_number(obj, s, "slot_s");
    cfg.bandwidth_hz = get_number(obj, s, "bandwidth_hz");
    cfg.decision_seconds = get_number(obj, s, "tau_s");
    cfg.energy_per_packet_j = get_number(obj, s, "energy_j");
    cfg.primary_power_w = get_number(obj, s, "p_primary_w");
    cfg.noise_dp_w = get_number(obj, s, "noise_w.d_p");
    cfg.noise_s_w = get_number(obj, s, "noise_w.s");
    cfg.noise_ds_w = get_number(obj, s, "noise_w.d_s");
    cfg.sigma_pdp = get_number(obj, s, "sigma.pd_p");
    cfg.sigma_ps = get_number(obj, s, "sigma.ps");
    cfg.sigma_sds = get_number(obj, s, "sigma.sd_s");
    cfg.sigma_sdp = get_number(obj, s, "sigma.sd_p");
    cfg.sigma_pds = get_number(obj, s, "sigma.pd_s");
    cfg.validate();
    return cfg;
}

DirectProbabilities parse_direct(const json& obj) {
    const std::string s = "channel.direct";
    reject_unknown(obj, s,
                   {"pbar.pd_p.0", "pbar.ps.0", "pbar.sd_s.0", "pbar.sd_p.0", "pbar.sd_s.1",
                    "pbar.sd_p.1", "dhat.sd_s", "dhat.sd_p", "delta.pd_p.00", "delta.pd_p.01",
                    "delta.sd_s.00", "delta.sd_s.10", "delta.sd_p.00", "delta.sd_p.10"});
    DirectProbabilities p;
    p.solo_pdp = get_number(obj, s, "pbar.pd_p.0");
    p.solo_ps = get_number(obj, s, "pbar.ps.0");
    p.solo_sds = get_number(obj, s, "pbar.sd_s.0");
    p.solo_sdp = get_number(obj, s, "pbar.sd_p.0");
    p.delay_sds = get_number(obj, s, "dhat.sd_s");
    p.delay_sdp = get_number(obj, s, "dhat.sd_p");
    if (obj.contains("pbar.sd_s.1")) p.solo_sds1 = get_number(obj, s, "pbar.sd_s.1");
    if (obj.contains("pbar.sd_p.1")) p.solo_sdp1 = get_number(obj, s, "pbar.sd_p.1");
    p.mpr_pdp_su0 = get_number(obj, s, "delta.pd_p.00");
    p.mpr_pdp_su1 = get_number(obj, s, "delta.pd_p.01");
    p.mpr_sds_i0 = get_number(obj, s, "delta.sd_s.00");
    p.mpr_sds_i1 = get_number(obj, s, "delta.sd_s.10");
    p.mpr_sdp_i0 = get_number(obj, s, "delta.sd_p.00");
    p.mpr_sdp_i1 = get_number(obj, s, "delta.sd_p.10");
    return p;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: invalid JSON: ") + err.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(root, "config", {"channel", "arrivals", "policy-grid", "simulation"});

    RunConfig cfg;

    if (!root.contains("channel")) throw ConfigError("channel: missing section");
    const json& channel = root.at("channel");
    reject_unknown(channel, "channel", {"physical", "direct"});
    const bool has_physical = channel.contains("physical");
    const bool has_direct = channel.contains("direct");
    if (has_physical == has_direct)
        throw ConfigError("channel: exactly one of `physical` or `direct` is required");
    if (has_physical) {
        cfg.physical = parse_physical(channel.at("physical"));
        cfg.table = build_table(*cfg.physical);
    } else {
        cfg.table = build_table(parse_direct(channel.at("direct")));
    }

    if (root.contains("arrivals")) {
        const json& arrivals = root.at("arrivals");
        reject_unknown(arrivals, "arrivals", {"lambda_p", "lambda_e"});
        cfg.lambda_p = get_number_or(arrivals, "arrivals", "lambda_p", 0.0);
        cfg.lambda_e = get_number_or(arrivals, "arrivals", "lambda_e", 0.0);
        if (!(cfg.lambda_p >= 0.0 && cfg.lambda_p <= 1.0))
            throw ConfigError("arrivals.lambda_p: outside [0,1]");
        if (!(cfg.lambda_e >= 0.0 && cfg.lambda_e <= 1.0))
            throw ConfigError("arrivals.lambda_e: outside [0,1]");
    }

    if (root.contains("policy-grid")) {
        const json& grid = root.at("policy-grid");
        reject_unknown(grid, "policy-grid", {"points", "exhaustive_gamma"});
        cfg.grid.points = static_cast<int>(get_number_or(grid, "policy-grid", "points", 41));
        if (grid.contains("exhaustive_gamma")) {
            if (!grid.at("exhaustive_gamma").is_boolean())
                throw ConfigError("policy-grid.exhaustive_gamma: expected a boolean");
            cfg.grid.exhaustive_gamma = grid.at("exhaustive_gamma").get<bool>();
        }
        cfg.grid.validate();
    }

    if (root.contains("simulation")) {
        const json& sim = root.at("simulation");
        reject_unknown(sim, "simulation",
                       {"replicas", "slots", "seed", "warmup_fraction", "blowup_threshold"});
        cfg.sim.replicas =
            static_cast<std::uint64_t>(get_number_or(sim, "simulation", "replicas", 20));
        cfg.sim.slots =
            static_cast<std::uint64_t>(get_number_or(sim, "simulation", "slots", 100000));
        cfg.sim.seed = static_cast<std::uint64_t>(get_number_or(sim, "simulation", "seed", 1));
        cfg.sim.warmup_fraction =
            get_number_or(sim, "simulation", "warmup_fraction", 0.1);
        cfg.sim.blowup_threshold = static_cast<std::uint64_t>(
            get_number_or(sim, "simulation", "blowup_threshold", 100000));
        cfg.sim.validate();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> kPresets = [] {
        std::vector<Preset> ps;

        // Shared direct-probability family of the lambda_p sweeps: the
        // direct primary link is dead, so every served primary packet rides
        // the relay. The pd_p reduction factors are immaterial (scaled by a
        // zero solo probability) and set to 1.
        DirectProbabilities relay_only;
        relay_only.solo_pdp = 0.0;
        relay_only.solo_ps = 0.8;
        relay_only.solo_sds = 0.7;
        relay_only.solo_sdp = 0.8;
        relay_only.delay_sds = 0.7;
        relay_only.delay_sdp = 0.7;
        relay_only.mpr_pdp_su0 = 1.0;
        relay_only.mpr_pdp_su1 = 1.0;
        relay_only.mpr_sds_i0 = 0.3;
        relay_only.mpr_sds_i1 = 0.2;
        relay_only.mpr_sdp_i0 = 0.3;
        relay_only.mpr_sdp_i1 = 0.2;

        Preset fig2;
        fig2.name = "fig2";
        fig2.summary = "relay-only family, lambda_e = 0.9; bounds S1/S2/S3 vs lambda_p";
        fig2.probs = relay_only;
        fig2.lambda_e = 0.9;
        fig2.lambda_p = 0.2;
        fig2.default_axis = "lambda_p";
        fig2.from = 0.0;
        fig2.to = 0.5;
        fig2.step = 0.05;
        fig2.systems = {"S1", "S2", "S3"};
        ps.push_back(fig2);

        Preset fig3;
        fig3.name = "fig3";
        fig3.summary =
            "relay-only family, lambda_e = 1.0 (bounds overlap); S2/S3 and the conventional "
            "baseline vs lambda_p";
        fig3.probs = relay_only;
        fig3.lambda_e = 1.0;
        fig3.lambda_p = 0.2;
        fig3.default_axis = "lambda_p";
        fig3.from = 0.0;
        fig3.to = 0.5;
        fig3.step = 0.05;
        fig3.systems = {"S2", "S3", "Sc"};
        ps.push_back(fig3);

        // MPR-strength family: every interference reduction factor swept
        // together as X, including delta.pd_p.01 (one common MPR strength).
        DirectProbabilities mpr;
        mpr.solo_pdp = 0.6;
        mpr.solo_ps = 0.8;
        mpr.solo_sds = 0.7;
        mpr.solo_sdp = 0.8;
        mpr.delay_sds = 0.5;
        mpr.delay_sdp = 0.5;
        mpr.mpr_pdp_su0 = 0.5;
        mpr.mpr_pdp_su1 = 0.5;
        mpr.mpr_sds_i0 = 0.5;
        mpr.mpr_sds_i1 = 0.5;
        mpr.mpr_sdp_i0 = 0.5;
        mpr.mpr_sdp_i1 = 0.5;

        Preset fig5;
        fig5.name = "fig5";
        fig5.summary =
            "MPR-strength family, lambda_e = 0.8: free sweep variable X rewrites every "
            "delta entry";
        fig5.probs = mpr;
        fig5.lambda_e = 0.8;
        fig5.lambda_p = 0.2;
        fig5.default_axis = "X";
        fig5.from = 0.0;
        fig5.to = 1.0;
        fig5.step = 0.1;
        fig5.systems = {"S2", "S3"};
        ps.push_back(fig5);
        return ps;
    }();
    return kPresets;
}

const Preset& preset_by_name(const std::string& name) {
    for (const Preset& p : presets())
        if (p.name == name) return p;
    std::string known;
    for (const Preset& p : presets()) {
        if (!known.empty()) known += ", ";
        known += p.name;
    }
    throw ConfigError("unknown preset `" + name + "`; available presets: " + known);
}

RunConfig preset_config(const std::string& name) {
    const Preset& p = preset_by_name(name);
    RunConfig cfg;
    cfg.table = build_table(p.probs);
    cfg.lambda_e = p.lambda_e;
    cfg.lambda_p = p.lambda_p;
    return cfg;
}

} // namespace ccrp
