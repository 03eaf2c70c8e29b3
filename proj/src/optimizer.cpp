#include "ccrp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccrp/errors.hpp"
#include "ccrp/queue_analysis.hpp"

namespace ccrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Roundoff headroom when re-checking constraints the closed forms satisfy
// with equality.
constexpr double kStabilityTol = 1e-9;
// Rounding headroom for the gamma floor's [0,1] admissibility test.
constexpr double kFloorSlack = 1e-12;

bool feasible_rates(double lambda_p, const RateVector& r) {
    return lambda_p <= r.primary_service + kStabilityTol &&
           r.relay_arrival <= r.relay_service + kStabilityTol;
}

// Pr{relaying queue nonempty} with the no-flow case pinned to 0.
double relay_pi(double arrival, double service) {
    if (arrival <= 0.0 && service <= 0.0) return 0.0;
    return occupancy(arrival, service).prob;
}

struct Search {
    double objective = -kInf;
    PolicyParams policy{};
    bool found = false;
    double worst_violation = kInf;

    // Strict improvement only: with axes iterated in ascending (beta, f,
    // alpha, omega, gamma) order this keeps the lexicographically smallest
    // policy among ties.
    void consider(double mu_s, const PolicyParams& pol) {
        if (!found || mu_s > objective) {
            objective = mu_s;
            policy = pol;
            found = true;
        }
    }

    void track_violation(double v) { worst_violation = std::min(worst_violation, v); }
};

OptimizationResult finish(const Search& search, const GridSpec& grid, double lambda_p,
                          const RateVector& best_rates) {
    OptimizationResult res;
    res.grid = grid;
    res.feasible = search.found;
    res.worst_violation = search.worst_violation;
    if (search.found) {
        res.best_policy = search.policy;
        res.best_rates = best_rates;
        res.objective = search.objective;
        if (!feasible_rates(lambda_p, res.best_rates))
            throw InvariantError("optimizer reported an infeasible best point");
    }
    return res;
}

// Smallest gamma keeping lambda_r <= cap * gamma; infinity when no gamma in
// [0,1] can.
double gamma_floor(double relay_arrival, double relay_cap) {
    if (relay_arrival <= 0.0) return 0.0;
    if (relay_cap <= 0.0) return kInf;
    const double raw = relay_arrival / relay_cap;
    if (raw > 1.0 + kFloorSlack) return kInf;
    return std::min(raw, 1.0);
}

} // namespace

void GridSpec::validate() const {
    if (points < 2) throw ConfigError("policy-grid.points must be >= 2");
}

double s1_depleted_receive_floor(const ChannelTable& t, double lambda_e, double lambda_p,
                                 double receive_prob, double admit_prob) {
    const double f = receive_prob;
    const double f_bar = 1.0 - f;
    const double empty = energy_empty_prob({lambda_e, f_bar});
    const double avail = 1.0 - empty;
    const double direct =
        t.solo_pdp * ((1.0 - avail * f_bar) + t.mpr_pdp[0] * f_bar * avail);
    const double coop = (1.0 - t.solo_pdp) * t.solo_ps * admit_prob;
    if (coop * empty <= 0.0) {
        // alpha cannot change mu_p here; the floor is 0 when the point is
        // already stable and unattainable otherwise.
        return lambda_p <= direct + coop * f * avail ? 0.0 : kInf;
    }
    return ((lambda_p - direct) / coop - f * avail) / empty;
}

double s1_relay_select_floor(const ChannelTable& t, double lambda_e, double receive_prob,
                             double depleted_receive_prob, double admit_prob) {
    const double f = receive_prob;
    const double f_bar = 1.0 - f;
    const double empty = energy_empty_prob({lambda_e, f_bar});
    const double avail = 1.0 - empty;
    const double relay_arrival = (1.0 - t.solo_pdp) * t.solo_ps * admit_prob *
                                 (depleted_receive_prob * empty + f * avail);
    const double cap = t.solo_sdp[0] * f_bar * avail * t.mpr_sdp[0];
    if (relay_arrival <= 0.0) return 0.0;
    if (cap <= 0.0) return kInf;
    return relay_arrival / cap;
}

OptimizationResult optimize_s1(const ChannelTable& table, double lambda_e, double lambda_p,
                               const GridSpec& grid) {
    grid.validate();
    Search search;
    for (int bi = 0; bi < grid.points; ++bi) {
        const double beta = grid.value(bi);
        for (int fi = 0; fi < grid.points; ++fi) {
            const double f = grid.value(fi);

            const double alpha_raw =
                s1_depleted_receive_floor(table, lambda_e, lambda_p, f, beta);
            const double alpha = std::clamp(alpha_raw, 0.0, 1.0);

            PolicyParams pol;
            pol.receive_prob = f;
            pol.resume_prob = 1.0;
            pol.depleted_receive_prob = alpha;
            pol.admit_prob = beta;
            pol.relay_select_prob = 1.0;

            // Violation diagnostic at the stability-friendliest corner.
            const RateVector probe = rates_s1(table, lambda_e, lambda_p, pol);
            search.track_violation(std::max(lambda_p - probe.primary_service,
                                            probe.relay_arrival - probe.relay_service));
            if (alpha_raw > 1.0) continue; // primary unstabilisable here

            if (grid.exhaustive_gamma) {
                for (int gi = 0; gi < grid.points; ++gi) {
                    pol.relay_select_prob = grid.value(gi);
                    const RateVector r = rates_s1(table, lambda_e, lambda_p, pol);
                    if (!feasible_rates(lambda_p, r)) continue;
                    search.consider(r.secondary_service, pol);
                }
            } else {
                // probe already carries lambda_r and the gamma=1 capacity.
                const double g = gamma_floor(probe.relay_arrival, probe.relay_service);
                if (g == kInf) continue;
                pol.relay_select_prob = g;
                const RateVector r = rates_s1(table, lambda_e, lambda_p, pol);
                if (!feasible_rates(lambda_p, r)) continue;
                search.consider(r.secondary_service, pol);
            }
        }
    }
    RateVector best{};
    if (search.found) best = rates_s1(table, lambda_e, lambda_p, search.policy);
    return finish(search, grid, lambda_p, best);
}

OptimizationResult optimize_s2(const ChannelTable& t, double lambda_e, double lambda_p,
                               const GridSpec& grid) {
    grid.validate();
    Search search;
    const double avail = lambda_e;
    const double empty = 1.0 - lambda_e;
    const double coop0 = (1.0 - t.solo_pdp) * t.solo_ps;

    for (int bi = 0; bi < grid.points; ++bi) {
        const double beta = grid.value(bi);
        const double coop = coop0 * beta;
        for (int fi = 0; fi < grid.points; ++fi) {
            const double f = grid.value(fi);
            const double f_bar = 1.0 - f;
            for (int ai = 0; ai < grid.points; ++ai) {
                const double alpha = grid.value(ai);
                for (int wi = 0; wi < grid.points; ++wi) {
                    const double w = grid.value(wi);
                    const double recv = alpha * empty + f * avail * w;
                    const double mu_p =
                        t.solo_pdp * (empty + f * avail * w +
                                      avail * (t.mpr_pdp[0] * f_bar +
                                               t.mpr_pdp[1] * f * (1.0 - w))) +
                        coop * recv;
                    const double pi_p = occupancy(lambda_p, mu_p).prob;
                    const double pi_p_bar = 1.0 - pi_p;
                    const double access_sdp =
                        f_bar * (pi_p * t.mpr_sdp[0] + pi_p_bar) +
                        f * t.delay_sdp * ((1.0 - w) * pi_p * t.mpr_sdp[1] + pi_p_bar);
                    const double cap = avail * t.solo_sdp[0] * access_sdp;
                    const double relay_arrival = coop * recv * pi_p;
                    search.track_violation(std::max(lambda_p - mu_p, relay_arrival - cap));
                    if (lambda_p > mu_p + kStabilityTol) continue;

                    const double access_sds =
                        f_bar * (pi_p * t.mpr_sds[0] + pi_p_bar) +
                        f * t.delay_sds * ((1.0 - w) * pi_p * t.mpr_sds[1] + pi_p_bar);
                    const double base = t.solo_sds[0] * avail * access_sds;

                    if (grid.exhaustive_gamma) {
                        for (int gi = 0; gi < grid.points; ++gi) {
                            const double g = grid.value(gi);
                            if (relay_arrival > cap * g + kStabilityTol) continue;
                            const double pi_r = relay_pi(relay_arrival, cap * g);
                            search.consider(base * (1.0 - g * pi_r),
                                            {f, w, alpha, beta, g});
                        }
                    } else {
                        const double g = gamma_floor(relay_arrival, cap);
                        if (g == kInf) continue;
                        search.consider(base * (1.0 - g), {f, w, alpha, beta, g});
                    }
                }
            }
        }
    }
    RateVector best{};
    if (search.found) best = rates_s2(t, lambda_e, lambda_p, search.policy);
    return finish(search, grid, lambda_p, best);
}

OptimizationResult optimize_s3(const ChannelTable& t, double lambda_p, const GridSpec& grid) {
    grid.validate();
    Search search;
    const double coop0 = (1.0 - t.solo_pdp) * t.solo_ps;

    for (int bi = 0; bi < grid.points; ++bi) {
        const double beta = grid.value(bi);
        const double coop = coop0 * beta;
        for (int fi = 0; fi < grid.points; ++fi) {
            const double f = grid.value(fi);
            const double f_bar = 1.0 - f;
            for (int wi = 0; wi < grid.points; ++wi) {
                const double w = grid.value(wi);
                const double mu_p =
                    t.solo_pdp * (f * w + t.mpr_pdp[0] * f_bar +
                                  t.mpr_pdp[1] * f * (1.0 - w)) +
                    coop * f * w;
                const double pi_p = occupancy(lambda_p, mu_p).prob;
                const double pi_p_bar = 1.0 - pi_p;
                const double access_sdp =
                    f_bar * (pi_p * t.mpr_sdp[0] + pi_p_bar) +
                    f * t.delay_sdp * ((1.0 - w) * pi_p * t.mpr_sdp[1] + pi_p_bar);
                const double cap = t.solo_sdp[0] * access_sdp;
                const double relay_arrival = coop * f * w * pi_p;
                search.track_violation(std::max(lambda_p - mu_p, relay_arrival - cap));
                if (lambda_p > mu_p + kStabilityTol) continue;

                const double access_sds =
                    f_bar * (pi_p * t.mpr_sds[0] + pi_p_bar) +
                    f * t.delay_sds * ((1.0 - w) * pi_p * t.mpr_sds[1] + pi_p_bar);
                const double base = t.solo_sds[0] * access_sds;

                if (grid.exhaustive_gamma) {
                    for (int gi = 0; gi < grid.points; ++gi) {
                        const double g = grid.value(gi);
                        if (relay_arrival > cap * g + kStabilityTol) continue;
                        const double pi_r = relay_pi(relay_arrival, cap * g);
                        search.consider(base * (1.0 - g * pi_r), {f, w, 0.0, beta, g});
                    }
                } else {
                    const double g = gamma_floor(relay_arrival, cap);
                    if (g == kInf) continue;
                    search.consider(base * (1.0 - g), {f, w, 0.0, beta, g});
                }
            }
        }
    }
    RateVector best{};
    if (search.found) best = rates_s3(t, lambda_p, search.policy);
    return finish(search, grid, lambda_p, best);
}

OptimizationResult optimize_conventional(const ChannelTable& table, double lambda_e,
                                         double lambda_p, ConventionalBound bound,
                                         const GridSpec& grid) {
    grid.validate();
    Search search;
    // mu_p, lambda_r and the relay capacity are all independent of the relay
    // selection; probe them at gamma = 1.
    const RateVector probe = rates_conventional(table, lambda_e, lambda_p, 1.0, bound);
    search.track_violation(std::max(lambda_p - probe.primary_service,
                                    probe.relay_arrival - probe.relay_service));
    if (lambda_p <= probe.primary_service + kStabilityTol) {
        if (grid.exhaustive_gamma) {
            for (int gi = 0; gi < grid.points; ++gi) {
                const double g = grid.value(gi);
                const RateVector r = rates_conventional(table, lambda_e, lambda_p, g, bound);
                if (!feasible_rates(lambda_p, r)) continue;
                search.consider(r.secondary_service, conventional_policy(g));
            }
        } else {
            const double g = gamma_floor(probe.relay_arrival, probe.relay_service);
            if (g != kInf) {
                const RateVector r = rates_conventional(table, lambda_e, lambda_p, g, bound);
                if (feasible_rates(lambda_p, r))
                    search.consider(r.secondary_service, conventional_policy(g));
            }
        }
    }
    RateVector best{};
    if (search.found)
        best = rates_conventional(table, lambda_e, lambda_p,
                                  search.policy.relay_select_prob, bound);
    return finish(search, grid, lambda_p, best);
}

} // namespace ccrp
