#include "ccrp/simulator.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "ccrp/errors.hpp"

namespace ccrp {

namespace {

const char* action_name(SuAction a) {
    switch (a) {
        case SuAction::AccessImmediate: return "access0";
        case SuAction::AccessDelayed: return "access_tau";
        case SuAction::Receive: return "receive";
        case SuAction::Idle: return "idle";
    }
    return "?";
}

const char* queue_name(TxQueue q) {
    switch (q) {
        case TxQueue::None: return "none";
        case TxQueue::Own: return "own";
        case TxQueue::Relay: return "relay";
    }
    return "?";
}

void emit_trace(std::ostream& os, const SlotTrace& t, std::uint64_t slot) {
    os << "slot=" << slot << " pu=" << int(t.pu_active) << " dummy=" << int(t.pu_dummy)
       << " act=" << action_name(t.su_action) << " q=" << queue_name(t.queue_used)
       << " pdp=" << int(t.draw_pdp) << " ps=" << int(t.draw_ps) << " s=" << int(t.draw_s)
       << " del_p=" << int(t.primary_delivered) << " adm=" << int(t.primary_admitted)
       << " del_s=" << int(t.secondary_delivered) << " del_r=" << int(t.relay_delivered)
       << " e=" << int(t.energy_consumed) << " qp=" << t.q_p_after << " qr=" << t.q_r_after
       << " qe=" << t.q_e_after << "\n";
}

// Accumulators for one replica's post-warmup window.
struct Tally {
    std::uint64_t measured = 0;
    std::uint64_t busy_p = 0, busy_r = 0, energy_avail = 0, energy_empty = 0;
    std::uint64_t service_p = 0;            // direct decodes + admissions (dummy ones too)
    std::uint64_t delivered_s = 0, delivered_r = 0, admitted = 0;
    std::uint64_t relay_opportunities = 0;  // relay service process, busy or not
    std::uint64_t tokens_spent = 0;         // consumed + drained
    double sum_q_p = 0.0, sum_q_r = 0.0, sum_q_e = 0.0;

    double ratio(std::uint64_t num, std::uint64_t den) const {
        return den == 0 ? std::numeric_limits<double>::quiet_NaN()
                        : static_cast<double>(num) / static_cast<double>(den);
    }
};

FieldEstimate estimate(const std::vector<double>& xs) {
    std::size_t n = 0;
    double sum = 0.0;
    for (double x : xs)
        if (!std::isnan(x)) {
            sum += x;
            ++n;
        }
    FieldEstimate e;
    if (n == 0) {
        e.mean = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    e.mean = sum / static_cast<double>(n);
    if (n >= 2) {
        double ss = 0.0;
        for (double x : xs)
            if (!std::isnan(x)) {
                const double d = x - e.mean;
                ss += d * d;
            }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        e.ci = 1.96 * sd / std::sqrt(static_cast<double>(n));
    }
    return e;
}

} // namespace

void SimOptions::validate() const {
    if (replicas < 1) throw ConfigError("simulation.replicas must be >= 1");
    if (slots < 1) throw ConfigError("simulation.slots must be >= 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw ConfigError("simulation.warmup_fraction must lie in [0,1)");
}

SlotTrace step(NetworkState& state, const ChannelTable& table, const PolicyParams& pol,
               double lambda_p, double lambda_e, SimVariant variant) {
    SlotTrace t;
    auto& rng = state.rng;

    // (1) Arrivals, visible to this slot's decisions.
    if (rng.bernoulli(lambda_p)) ++state.q_p;
    if (rng.bernoulli(lambda_e)) ++state.q_e;

    // (2) Primary transmission. Under S1 an empty queue is covered by a
    // dummy packet that interferes but delivers nothing.
    const bool pu_real = state.q_p > 0;
    t.pu_active = pu_real || variant == SimVariant::S1;
    t.pu_dummy = t.pu_active && !pu_real;
    t.q_p_busy = pu_real;
    t.q_r_busy = state.q_r > 0;

    // (3) SU decision tree.
    const bool energy = variant == SimVariant::S3 ? true : state.q_e > 0;
    t.q_e_empty = !energy;
    if (energy) {
        if (variant == SimVariant::S1) {
            // Single decision at t=0; a listener never comes back to access.
            t.su_action = rng.bernoulli(1.0 - pol.receive_prob) ? SuAction::AccessImmediate
                                                                : SuAction::Receive;
        } else if (rng.bernoulli(1.0 - pol.receive_prob)) {
            t.su_action = SuAction::AccessImmediate;
        } else if (t.pu_active) {
            t.su_action = rng.bernoulli(pol.resume_prob) ? SuAction::Receive
                                                         : SuAction::AccessDelayed;
        } else {
            t.su_action = SuAction::AccessDelayed;
        }
    } else {
        t.su_action = rng.bernoulli(pol.depleted_receive_prob) ? SuAction::Receive
                                                               : SuAction::Idle;
    }

    // (4) Queue selection on access.
    const bool su_tx =
        t.su_action == SuAction::AccessImmediate || t.su_action == SuAction::AccessDelayed;
    if (su_tx)
        t.queue_used = (state.q_r > 0 && rng.bernoulli(pol.relay_select_prob)) ? TxQueue::Relay
                                                                               : TxQueue::Own;

    // (5) Channel draws, independent per link.
    const int instant = t.su_action == SuAction::AccessDelayed ? 1 : 0;
    const double relay_success_prob =
        table.solo_sdp[0] * (instant == 1 ? table.delay_sdp : 1.0) *
        (t.pu_active ? table.mpr_sdp[instant] : 1.0);
    if (t.pu_active) {
        double p = table.solo_pdp;
        if (su_tx) p *= table.mpr_pdp[instant];
        t.draw_pdp = rng.bernoulli(p) ? 1 : 0;
    }
    if (t.pu_active && t.su_action == SuAction::Receive)
        t.draw_ps = rng.bernoulli(table.solo_ps) ? 1 : 0;
    if (su_tx) {
        double p = t.queue_used == TxQueue::Own
                       ? table.solo_sds[0] * (instant == 1 ? table.delay_sds : 1.0) *
                             (t.pu_active ? table.mpr_sds[instant] : 1.0)
                       : relay_success_prob;
        t.draw_s = rng.bernoulli(p) ? 1 : 0;
    }

    // (6) Dispositions.
    if (t.pu_active) {
        if (t.draw_pdp == 1) {
            if (pu_real) --state.q_p;
            t.primary_delivered = pu_real;
        } else if (t.draw_ps == 1 && rng.bernoulli(pol.admit_prob)) {
            // Decoded at the SU while d_p failed: admitted for relaying.
            // Dummy packets are admitted too: the backlogged fiction of S1
            // loads the relaying queue as if the PU were always real.
            if (pu_real) --state.q_p;
            ++state.q_r;
            t.primary_admitted = true;
        } else {
            t.primary_retained = pu_real;
        }
    }
    if (su_tx) {
        if (t.queue_used == TxQueue::Relay) {
            if (t.draw_s == 1) {
                --state.q_r;
                t.relay_delivered = true;
                t.relay_opportunity = true;
            }
        } else {
            if (t.draw_s == 1)
                t.secondary_delivered = true; // own queue is saturated: nothing to pop
            // With an empty relaying queue the selection coin was never
            // flipped; flip it (and the s->d_p channel) virtually so the
            // service opportunity process is observed every slot.
            if (!t.q_r_busy && rng.bernoulli(pol.relay_select_prob))
                t.relay_opportunity = rng.bernoulli(relay_success_prob);
        }
        t.energy_consumed = true;
        if (variant != SimVariant::S3) --state.q_e;
    }
    if (variant == SimVariant::S2 && !t.energy_consumed && state.q_e > 0) {
        --state.q_e; // token leaves whether or not it was used
        t.energy_drained = true;
    }

    t.q_p_after = state.q_p;
    t.q_r_after = state.q_r;
    t.q_e_after = state.q_e;
    ++state.slot;
    return t;
}

SimReport run(const ChannelTable& table, const PolicyParams& pol, double lambda_p,
              double lambda_e, const SimOptions& opts) {
    opts.validate();
    pol.validate();
    table.validate();
    if (!(lambda_p >= 0.0 && lambda_p <= 1.0)) throw ConfigError("lambda_p outside [0,1]");
    if (!(lambda_e >= 0.0 && lambda_e <= 1.0)) throw ConfigError("lambda_e outside [0,1]");

    const std::uint64_t warmup =
        static_cast<std::uint64_t>(static_cast<double>(opts.slots) * opts.warmup_fraction);

    const std::size_t n = static_cast<std::size_t>(opts.replicas);
    std::vector<Tally> tallies(n);
    SimReport report;
    report.replicas = opts.replicas;
    report.slots = opts.slots;
    report.warmup_slots = warmup;

    for (std::size_t r = 0; r < n; ++r) {
        NetworkState state;
        state.rng = Xoshiro256::substream(opts.seed, r);
        Tally& tally = tallies[r];
        std::uint64_t mid_q_p = 0, mid_q_r = 0;
        SimCounters c;

        for (std::uint64_t s = 0; s < opts.slots; ++s) {
            const std::uint64_t q_p_before = state.q_p;
            const std::uint64_t q_e_before = state.q_e;
            const SlotTrace t =
                step(state, table, pol, lambda_p, lambda_e, opts.variant);

            // Arrival counts recovered exactly from the state delta.
            const std::uint64_t dep_p =
                (t.primary_delivered || (t.primary_admitted && !t.pu_dummy)) ? 1 : 0;
            c.arrivals_p += state.q_p + dep_p - q_p_before;
            if (opts.variant != SimVariant::S3) {
                const std::uint64_t dep_e =
                    (t.energy_consumed || t.energy_drained) ? 1 : 0;
                c.arrivals_e += state.q_e + dep_e - q_e_before;
            }
            c.delivered_p_direct += t.primary_delivered;
            c.admitted_real += t.primary_admitted && !t.pu_dummy;
            c.admitted_dummy += t.primary_admitted && t.pu_dummy;
            c.relay_delivered += t.relay_delivered;
            c.secondary_delivered += t.secondary_delivered;
            c.energy_consumed += t.energy_consumed;
            c.energy_drained += t.energy_drained;

            if (opts.trace_sink && r == 0) emit_trace(*opts.trace_sink, t, s);
            if (s == opts.slots / 2) {
                mid_q_p = state.q_p;
                mid_q_r = state.q_r;
            }
            if (s < warmup) continue;

            ++tally.measured;
            const bool busy_p = opts.variant == SimVariant::S1 ? true : t.q_p_busy;
            tally.busy_p += busy_p;
            tally.busy_r += t.q_r_busy;
            tally.energy_avail += !t.q_e_empty;
            tally.energy_empty += t.q_e_empty;
            tally.service_p += t.primary_delivered || t.primary_admitted ||
                               (t.pu_dummy && t.draw_pdp == 1);
            tally.delivered_s += t.secondary_delivered;
            tally.delivered_r += t.relay_delivered;
            tally.relay_opportunities += t.relay_opportunity;
            tally.admitted += t.primary_admitted;
            tally.tokens_spent += t.energy_consumed || t.energy_drained;
            tally.sum_q_p += static_cast<double>(t.q_p_after);
            tally.sum_q_r += static_cast<double>(t.q_r_after);
            tally.sum_q_e += static_cast<double>(t.q_e_after);
        }

        c.final_q_p = state.q_p;
        c.final_q_r = state.q_r;
        c.final_q_e = state.q_e;
        report.totals.arrivals_p += c.arrivals_p;
        report.totals.arrivals_e += c.arrivals_e;
        report.totals.delivered_p_direct += c.delivered_p_direct;
        report.totals.admitted_real += c.admitted_real;
        report.totals.admitted_dummy += c.admitted_dummy;
        report.totals.relay_delivered += c.relay_delivered;
        report.totals.secondary_delivered += c.secondary_delivered;
        report.totals.energy_consumed += c.energy_consumed;
        report.totals.energy_drained += c.energy_drained;
        report.totals.final_q_p += c.final_q_p;
        report.totals.final_q_r += c.final_q_r;
        report.totals.final_q_e += c.final_q_e;

        if (state.q_p > opts.blowup_threshold && state.q_p > mid_q_p) report.unstable_p = true;
        if (state.q_r > opts.blowup_threshold && state.q_r > mid_q_r) report.unstable_r = true;
    }

    auto collect = [&](auto&& f) {
        std::vector<double> xs(n);
        for (std::size_t r = 0; r < n; ++r) xs[r] = f(tallies[r]);
        return estimate(xs);
    };
    report.mu_s = collect([](const Tally& t) { return t.ratio(t.delivered_s, t.measured); });
    report.mu_p = collect([](const Tally& t) { return t.ratio(t.service_p, t.busy_p); });
    report.mu_r =
        collect([](const Tally& t) { return t.ratio(t.relay_opportunities, t.measured); });
    report.mu_e =
        collect([](const Tally& t) { return t.ratio(t.tokens_spent, t.energy_avail); });
    report.lambda_r = collect([](const Tally& t) { return t.ratio(t.admitted, t.measured); });
    report.nu0 = collect([](const Tally& t) { return t.ratio(t.energy_empty, t.measured); });
    report.pi_p = collect([](const Tally& t) { return t.ratio(t.busy_p, t.measured); });
    report.pi_r = collect([](const Tally& t) { return t.ratio(t.busy_r, t.measured); });
    report.relay_rate =
        collect([](const Tally& t) { return t.ratio(t.delivered_r, t.measured); });

    double mq_p = 0.0, mq_r = 0.0, mq_e = 0.0;
    std::uint64_t measured_total = 0;
    for (const Tally& t : tallies) {
        mq_p += t.sum_q_p;
        mq_r += t.sum_q_r;
        mq_e += t.sum_q_e;
        measured_total += t.measured;
    }
    if (measured_total > 0) {
        report.mean_q_p = mq_p / static_cast<double>(measured_total);
        report.mean_q_r = mq_r / static_cast<double>(measured_total);
        report.mean_q_e = mq_e / static_cast<double>(measured_total);
    }
    return report;
}

} // namespace ccrp
