#include "ccrp/channel.hpp"

#include <cmath>
#include <sstream>

#include "ccrp/errors.hpp"

namespace ccrp {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void require_prob(double v, const std::string& name) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
            name + ": " + std::to_string(v) + " outside [0,1]");
}

bool is_secondary_tx(Link link) { return link == Link::SdS || link == Link::SdP; }

} // namespace

const char* link_name(Link link) {
    switch (link) {
        case Link::PdP: return "pd_p";
        case Link::Ps: return "ps";
        case Link::SdS: return "sd_s";
        case Link::SdP: return "sd_p";
    }
    return "?";
}

void PhysicalConfig::validate() const {
    require(packet_bits > 0.0, "channel.physical.bits must be > 0");
    require(slot_seconds > 0.0, "channel.physical.slot_s must be > 0");
    require(bandwidth_hz > 0.0, "channel.physical.bandwidth_hz must be > 0");
    require(decision_seconds >= 0.0 && decision_seconds < slot_seconds,
            "channel.physical.tau_s must satisfy 0 <= tau < slot_s");
    require(energy_per_packet_j > 0.0, "channel.physical.energy_j must be > 0");
    require(primary_power_w > 0.0, "channel.physical.p_primary_w must be > 0");
    require(noise_dp_w > 0.0, "channel.physical.noise_w.d_p must be > 0");
    require(noise_s_w > 0.0, "channel.physical.noise_w.s must be > 0");
    require(noise_ds_w > 0.0, "channel.physical.noise_w.d_s must be > 0");
    require(sigma_pdp > 0.0, "channel.physical.sigma.pd_p must be > 0");
    require(sigma_ps > 0.0, "channel.physical.sigma.ps must be > 0");
    require(sigma_sds > 0.0, "channel.physical.sigma.sd_s must be > 0");
    require(sigma_sdp > 0.0, "channel.physical.sigma.sd_p must be > 0");
    require(sigma_pds > 0.0, "channel.physical.sigma.pd_s must be > 0");
}

double PhysicalConfig::spectral_efficiency(Link link, int instant) const {
    const bool secondary = is_secondary_tx(link);
    if (!secondary && instant != 0)
        throw ConfigError("primary transmitter always starts at t = 0 (instant must be 0)");
    if (instant != 0 && instant != 1)
        throw ConfigError("start instant must be 0 or 1");
    const double airtime = slot_seconds - instant * decision_seconds;
    return packet_bits / (bandwidth_hz * airtime);
}

double PhysicalConfig::tx_gamma_sigma(Link link, int instant) const {
    switch (link) {
        case Link::PdP:
            if (instant != 0)
                throw ConfigError("primary transmitter always starts at t = 0 (instant must be 0)");
            return primary_power_w / noise_dp_w * sigma_pdp;
        case Link::Ps:
            if (instant != 0)
                throw ConfigError("primary transmitter always starts at t = 0 (instant must be 0)");
            return primary_power_w / noise_s_w * sigma_ps;
        case Link::SdS: {
            const double power = energy_per_packet_j / (slot_seconds - instant * decision_seconds);
            return power / noise_ds_w * sigma_sds;
        }
        case Link::SdP: {
            const double power = energy_per_packet_j / (slot_seconds - instant * decision_seconds);
            return power / noise_dp_w * sigma_sdp;
        }
    }
    throw ConfigError("unknown link");
}

double PhysicalConfig::interferer_gamma_sigma(Link link, int interferer_instant) const {
    switch (link) {
        case Link::PdP: {
            // Interferer is the SU at d_p, starting at n ∈ {0,1}.
            if (interferer_instant != 0 && interferer_instant != 1)
                throw ConfigError("SU interferer instant must be 0 or 1");
            const double power =
                energy_per_packet_j / (slot_seconds - interferer_instant * decision_seconds);
            return power / noise_dp_w * sigma_sdp;
        }
        case Link::Ps:
            throw ConfigError("link p->s never experiences interference (SU receives only when silent)");
        case Link::SdS:
            // Interferer is the PU at d_s, always from t = 0.
            if (interferer_instant != 0)
                throw ConfigError("PU interferer always starts at t = 0 (instant must be 0)");
            return primary_power_w / noise_ds_w * sigma_pds;
        case Link::SdP:
            if (interferer_instant != 0)
                throw ConfigError("PU interferer always starts at t = 0 (instant must be 0)");
            return primary_power_w / noise_dp_w * sigma_pdp;
    }
    throw ConfigError("unknown link");
}

double solo_success(const PhysicalConfig& cfg, Link link, int instant) {
    const double gs = cfg.tx_gamma_sigma(link, instant);
    if (!(gs > 0.0)) throw ConfigError("non-positive gamma*sigma for transmitter");
    const double threshold = std::exp2(cfg.spectral_efficiency(link, instant)) - 1.0;
    return std::exp(-threshold / gs);
}

double interference_reduction(const PhysicalConfig& cfg, Link link, int instant,
                              int interferer_instant) {
    const double gs_tx = cfg.tx_gamma_sigma(link, instant);
    const double gs_int = cfg.interferer_gamma_sigma(link, interferer_instant);
    const double threshold = std::exp2(cfg.spectral_efficiency(link, instant)) - 1.0;
    return 1.0 / (1.0 + threshold * gs_int / gs_tx);
}

double rho_ratio(const PhysicalConfig& cfg) {
    cfg.validate();
    const double threshold = std::exp2(cfg.spectral_efficiency(Link::PdP, 0)) - 1.0;
    const double a = threshold * cfg.interferer_gamma_sigma(Link::PdP, 0) /
                     cfg.tx_gamma_sigma(Link::PdP, 0);
    const double keep = 1.0 - cfg.decision_seconds / cfg.slot_seconds;
    return (1.0 + a) / (1.0 + a / keep);
}

double ChannelTable::solo(Link link, int instant) const {
    switch (link) {
        case Link::PdP:
            if (instant != 0) throw ConfigError("p->d_p has no delayed start");
            return solo_pdp;
        case Link::Ps:
            if (instant != 0) throw ConfigError("p->s has no delayed start");
            return solo_ps;
        case Link::SdS: return solo_sds[instant];
        case Link::SdP: return solo_sdp[instant];
    }
    throw ConfigError("unknown link");
}

double ChannelTable::mpr(Link link, int index) const {
    switch (link) {
        case Link::PdP: return mpr_pdp[index];
        case Link::Ps: throw ConfigError("p->s never experiences interference");
        case Link::SdS: return mpr_sds[index];
        case Link::SdP: return mpr_sdp[index];
    }
    throw ConfigError("unknown link");
}

void ChannelTable::validate(double tol) const {
    require_prob(solo_pdp, "pbar.pd_p.0");
    require_prob(solo_ps, "pbar.ps.0");
    require_prob(solo_sds[0], "pbar.sd_s.0");
    require_prob(solo_sds[1], "pbar.sd_s.1");
    require_prob(solo_sdp[0], "pbar.sd_p.0");
    require_prob(solo_sdp[1], "pbar.sd_p.1");
    require_prob(delay_sds, "dhat.sd_s");
    require_prob(delay_sdp, "dhat.sd_p");
    require_prob(mpr_pdp[0], "delta.pd_p.00");
    require_prob(mpr_pdp[1], "delta.pd_p.01");
    require_prob(mpr_sds[0], "delta.sd_s.00");
    require_prob(mpr_sds[1], "delta.sd_s.10");
    require_prob(mpr_sdp[0], "delta.sd_p.00");
    require_prob(mpr_sdp[1], "delta.sd_p.10");

    // Delayed access never helps, and dhat must reproduce the stored pair.
    require(solo_sds[1] <= solo_sds[0] + tol, "pbar.sd_s.1 exceeds pbar.sd_s.0");
    require(solo_sdp[1] <= solo_sdp[0] + tol, "pbar.sd_p.1 exceeds pbar.sd_p.0");
    if (std::fabs(delay_sds * solo_sds[0] - solo_sds[1]) > tol)
        throw ConfigError("dhat.sd_s inconsistent with pbar.sd_s pair");
    if (std::fabs(delay_sdp * solo_sdp[0] - solo_sdp[1]) > tol)
        throw ConfigError("dhat.sd_p inconsistent with pbar.sd_p pair");
}

ChannelTable build_table(const PhysicalConfig& cfg) {
    cfg.validate();
    ChannelTable t;
    t.solo_pdp = solo_success(cfg, Link::PdP, 0);
    t.solo_ps = solo_success(cfg, Link::Ps, 0);
    for (int i = 0; i < 2; ++i) {
        t.solo_sds[i] = solo_success(cfg, Link::SdS, i);
        t.solo_sdp[i] = solo_success(cfg, Link::SdP, i);
        t.mpr_pdp[i] = interference_reduction(cfg, Link::PdP, 0, i);
        t.mpr_sds[i] = interference_reduction(cfg, Link::SdS, i, 0);
        t.mpr_sdp[i] = interference_reduction(cfg, Link::SdP, i, 0);
    }
    t.delay_sds = t.solo_sds[1] / t.solo_sds[0];
    t.delay_sdp = t.solo_sdp[1] / t.solo_sdp[0];
    t.validate();
    return t;
}

ChannelTable build_table(const DirectProbabilities& probs) {
    ChannelTable t;
    t.solo_pdp = probs.solo_pdp;
    t.solo_ps = probs.solo_ps;
    t.solo_sds[0] = probs.solo_sds;
    t.solo_sdp[0] = probs.solo_sdp;
    t.delay_sds = probs.delay_sds;
    t.delay_sdp = probs.delay_sdp;
    t.solo_sds[1] = probs.solo_sds1 ? *probs.solo_sds1 : probs.delay_sds * probs.solo_sds;
    t.solo_sdp[1] = probs.solo_sdp1 ? *probs.solo_sdp1 : probs.delay_sdp * probs.solo_sdp;
    t.mpr_pdp[0] = probs.mpr_pdp_su0;
    t.mpr_pdp[1] = probs.mpr_pdp_su1;
    t.mpr_sds[0] = probs.mpr_sds_i0;
    t.mpr_sds[1] = probs.mpr_sds_i1;
    t.mpr_sdp[0] = probs.mpr_sdp_i0;
    t.mpr_sdp[1] = probs.mpr_sdp_i1;
    t.validate();
    return t;
}

} // namespace ccrp
