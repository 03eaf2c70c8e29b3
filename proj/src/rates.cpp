#include "ccrp/rates.hpp"

#include <cmath>
#include <string>

#include "ccrp/errors.hpp"
#include "ccrp/queue_analysis.hpp"

namespace ccrp {

namespace {

void require_prob(double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0 && v <= 1.0))
        throw ConfigError(std::string(name) + ": " + std::to_string(v) + " outside [0,1]");
}

void require_rate(double v, const char* name) { require_prob(v, name); }

// Pr{relaying queue nonempty} with the degenerate no-flow case pinned to 0.
Occupancy relay_occupancy(double arrival, double service) {
    if (arrival <= 0.0 && service <= 0.0) return {0.0, true};
    return occupancy(arrival, service);
}

// Success-probability factor of a secondary transmission from `solo0`,
// averaged over the PU state: access at t=0 with probability 1-f (PU busy
// with probability pi_p), access at t=tau after a no-resume decision or a
// detected idle slot.
double secondary_access_factor(double receive, double resume, double pi_p, double solo_ratio,
                               double mpr0, double mpr1) {
    const double direct = (1.0 - receive) * (pi_p * mpr0 + (1.0 - pi_p));
    const double delayed =
        receive * solo_ratio * ((1.0 - resume) * pi_p * mpr1 + (1.0 - pi_p));
    return direct + delayed;
}

} // namespace

void PolicyParams::validate() const {
    require_prob(receive_prob, "policy.f");
    require_prob(resume_prob, "policy.omega");
    require_prob(depleted_receive_prob, "policy.alpha");
    require_prob(admit_prob, "policy.beta");
    require_prob(relay_select_prob, "policy.gamma");
}

RateVector rates_s1(const ChannelTable& table, double lambda_e, double lambda_p,
                    const PolicyParams& pol) {
    pol.validate();
    require_rate(lambda_e, "lambda_e");
    require_rate(lambda_p, "lambda_p");

    RateVector r;
    if (pol.resume_prob != 1.0) r.flags |= RateVector::kResumeIgnored;

    const double f = pol.receive_prob;
    const double f_bar = 1.0 - f;
    r.energy_service = f_bar; // a token is spent exactly when the SU accesses at t=0
    r.energy_empty = energy_empty_prob({lambda_e, r.energy_service});
    const double energy_avail = 1.0 - r.energy_empty;

    const double coop = (1.0 - table.solo_pdp) * table.solo_ps * pol.admit_prob;
    const double reception = pol.depleted_receive_prob * r.energy_empty + f * energy_avail;

    r.primary_service =
        table.solo_pdp * ((1.0 - energy_avail * f_bar) + table.mpr_pdp[0] * f_bar * energy_avail) +
        coop * reception;
    r.relay_arrival = coop * reception; // PU backlogged: every slot offers an admission chance
    r.relay_service = table.solo_sdp[0] * pol.relay_select_prob * f_bar * energy_avail *
                      table.mpr_sdp[0];

    const Occupancy occ_r = relay_occupancy(r.relay_arrival, r.relay_service);
    r.relay_busy = occ_r.prob;
    r.relay_stable = occ_r.stable;
    r.primary_busy = 1.0;
    r.primary_stable = lambda_p <= r.primary_service;

    r.secondary_service = table.solo_sds[0] * f_bar * energy_avail * table.mpr_sds[0] *
                          (1.0 - pol.relay_select_prob * r.relay_busy);
    return r;
}

RateVector rates_s2(const ChannelTable& table, double lambda_e, double lambda_p,
                    const PolicyParams& pol) {
    pol.validate();
    require_rate(lambda_e, "lambda_e");
    require_rate(lambda_p, "lambda_p");

    RateVector r;
    const double f = pol.receive_prob;
    const double f_bar = 1.0 - f;
    const double w = pol.resume_prob;

    r.energy_service = 1.0; // one token leaves every slot, used or not
    r.energy_empty = 1.0 - lambda_e;
    const double energy_avail = lambda_e;

    const double coop = (1.0 - table.solo_pdp) * table.solo_ps * pol.admit_prob;
    const double reception = pol.depleted_receive_prob * (1.0 - lambda_e) + f * energy_avail * w;

    r.primary_service =
        table.solo_pdp * ((1.0 - energy_avail) + f * energy_avail * w +
                          energy_avail * (table.mpr_pdp[0] * f_bar +
                                          table.mpr_pdp[1] * f * (1.0 - w))) +
        coop * reception;

    const Occupancy occ_p = occupancy(lambda_p, r.primary_service);
    r.primary_busy = occ_p.prob;
    r.primary_stable = occ_p.stable;

    r.relay_service = energy_avail * table.solo_sdp[0] * pol.relay_select_prob *
                      secondary_access_factor(f, w, r.primary_busy, table.delay_sdp,
                                              table.mpr_sdp[0], table.mpr_sdp[1]);
    r.relay_arrival = coop * reception * r.primary_busy;

    const Occupancy occ_r = relay_occupancy(r.relay_arrival, r.relay_service);
    r.relay_busy = occ_r.prob;
    r.relay_stable = occ_r.stable;

    r.secondary_service = table.solo_sds[0] * energy_avail *
                          secondary_access_factor(f, w, r.primary_busy, table.delay_sds,
                                                  table.mpr_sds[0], table.mpr_sds[1]) *
                          (1.0 - pol.relay_select_prob * r.relay_busy);
    return r;
}

RateVector rates_s3(const ChannelTable& table, double lambda_p, const PolicyParams& pol) {
    pol.validate();
    require_rate(lambda_p, "lambda_p");

    RateVector r;
    if (pol.depleted_receive_prob != 0.0) r.flags |= RateVector::kDepletedReceiveIgnored;

    const double f = pol.receive_prob;
    const double f_bar = 1.0 - f;
    const double w = pol.resume_prob;

    r.energy_empty = 0.0; // backlogged energy queue

    const double coop = (1.0 - table.solo_pdp) * table.solo_ps * pol.admit_prob;

    r.primary_service =
        table.solo_pdp *
            (f * w + table.mpr_pdp[0] * f_bar + table.mpr_pdp[1] * f * (1.0 - w)) +
        coop * f * w;

    const Occupancy occ_p = occupancy(lambda_p, r.primary_service);
    r.primary_busy = occ_p.prob;
    r.primary_stable = occ_p.stable;

    r.energy_service = 1.0 - r.primary_busy * f * w;

    r.relay_service = table.solo_sdp[0] * pol.relay_select_prob *
                      secondary_access_factor(f, w, r.primary_busy, table.delay_sdp,
                                              table.mpr_sdp[0], table.mpr_sdp[1]);
    r.relay_arrival = coop * f * w * r.primary_busy;

    const Occupancy occ_r = relay_occupancy(r.relay_arrival, r.relay_service);
    r.relay_busy = occ_r.prob;
    r.relay_stable = occ_r.stable;

    r.secondary_service = table.solo_sds[0] *
                          secondary_access_factor(f, w, r.primary_busy, table.delay_sds,
                                                  table.mpr_sds[0], table.mpr_sds[1]) *
                          (1.0 - pol.relay_select_prob * r.relay_busy);
    return r;
}

PolicyParams conventional_policy(double relay_select_prob) {
    PolicyParams pol;
    pol.receive_prob = 1.0;
    pol.resume_prob = 0.0;
    pol.depleted_receive_prob = 1.0;
    pol.admit_prob = 1.0;
    pol.relay_select_prob = relay_select_prob;
    return pol;
}

RateVector rates_conventional(const ChannelTable& table, double lambda_e, double lambda_p,
                              double relay_select_prob, ConventionalBound bound) {
    const PolicyParams pol = conventional_policy(relay_select_prob);
    if (bound == ConventionalBound::Outer) return rates_s3(table, lambda_p, pol);
    return rates_s2(table, lambda_e, lambda_p, pol);
}

} // namespace ccrp
