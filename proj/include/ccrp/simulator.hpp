#pragma once

#include <cstdint>
#include <iosfwd>

#include "ccrp/channel.hpp"
#include "ccrp/rates.hpp"
#include "ccrp/rng.hpp"

namespace ccrp {

// Original protocol, or one of the decoupled systems it is sandwiched by.
// S1 keeps the PU busy with dummy packets and moves every SU decision to
// t=0 (resume pinned on); S2 drains one energy token per slot whether or
// not it is used; S3 never lets the energy queue gate a decision.
enum class SimVariant { Original, S1, S2, S3 };

enum class SuAction : std::uint8_t {
    AccessImmediate, // transmit from t = 0
    AccessDelayed,   // listen until tau, then transmit
    Receive,         // receive the primary transmission for the whole slot
    Idle
};

enum class TxQueue : std::uint8_t { None, Own, Relay };

struct NetworkState {
    std::uint64_t q_p = 0; // primary data queue
    std::uint64_t q_r = 0; // relaying queue
    std::uint64_t q_e = 0; // energy tokens
    std::uint64_t slot = 0;
    Xoshiro256 rng;
};

// Everything that happened in one slot. Channel draws are -1 when the
// corresponding link was never exercised.
struct SlotTrace {
    bool pu_active = false; // a primary transmission occupied the slot
    bool pu_dummy = false;  // S1 filler transmission (empty queue)
    SuAction su_action = SuAction::Idle;
    TxQueue queue_used = TxQueue::None;

    std::int8_t draw_pdp = -1; // p→d_p decode
    std::int8_t draw_ps = -1;  // p→s decode (full-receive slots only)
    std::int8_t draw_s = -1;   // s→d_s or s→d_p by queue_used

    bool primary_delivered = false; // left Q_p via direct decode
    bool primary_admitted = false;  // left Q_p into Q_r (or dummy admission in S1)
    bool primary_retained = false;  // stays for retransmission
    bool secondary_delivered = false;
    bool relay_delivered = false;
    bool energy_consumed = false;   // a token left with an SU transmission
    bool energy_drained = false;    // S2 only: unused token removed

    // The relay service process in the Loynes sense: this slot would have
    // carried a relay packet to d_p. Identical to relay_delivered when the
    // queue is busy; decided by a virtual selection + channel draw when it
    // is empty.
    bool relay_opportunity = false;

    // Decision-epoch snapshots (post-arrival, pre-disposition).
    bool q_p_busy = false, q_r_busy = false, q_e_empty = true;
    std::uint64_t q_p_after = 0, q_r_after = 0, q_e_after = 0;
};

// Advance one slot: (1) Bernoulli arrivals, (2) PU transmits iff busy,
// (3) SU decision tree, (4) queue selection, (5) channel draws,
// (6) dispositions. Total function of state and randomness.
SlotTrace step(NetworkState& state, const ChannelTable& table, const PolicyParams& pol,
               double lambda_p, double lambda_e, SimVariant variant = SimVariant::Original);

struct SimOptions {
    std::uint64_t replicas = 20;
    std::uint64_t slots = 100000;
    std::uint64_t seed = 1;
    double warmup_fraction = 0.1;      // leading slots excluded from rate estimates
    SimVariant variant = SimVariant::Original;
    std::uint64_t blowup_threshold = 100000; // divergence detector for q_p / q_r
    std::ostream* trace_sink = nullptr;      // line-per-slot records, replica 0 only

    void validate() const;
};

struct FieldEstimate {
    double mean = 0.0;
    double ci = 0.0; // 1.96 * sd / sqrt(replicas), 0 when replicas == 1
};

// Exact integer bookkeeping over the full horizon of every replica.
struct SimCounters {
    std::uint64_t arrivals_p = 0, arrivals_e = 0;
    std::uint64_t delivered_p_direct = 0;
    std::uint64_t admitted_real = 0, admitted_dummy = 0;
    std::uint64_t relay_delivered = 0;
    std::uint64_t secondary_delivered = 0;
    std::uint64_t energy_consumed = 0, energy_drained = 0;
    std::uint64_t final_q_p = 0, final_q_r = 0, final_q_e = 0;
};

struct SimReport {
    // Post-warmup estimates. Service rates follow the service-process
    // semantics of the stability analysis: mu_p and mu_e condition on the
    // served queue being available (every slot under S1's dummy backlog),
    // and mu_r counts relay service opportunities over all slots, so the
    // estimates converge to the decoupled closed forms rather than to
    // occupancy-weighted variants.
    FieldEstimate mu_s;          // own-data deliveries per slot
    FieldEstimate mu_p;          // primary service events per busy slot
    FieldEstimate mu_r;          // relay service opportunities per slot
    FieldEstimate mu_e;          // tokens spent per slot with energy available
    FieldEstimate lambda_r;      // admissions per slot
    FieldEstimate nu0;           // fraction of slots with the energy queue empty
    FieldEstimate pi_p, pi_r;    // busy fractions at the decision epoch
    FieldEstimate relay_rate;    // relayed deliveries per slot (kept out of mu_s)

    double mean_q_p = 0.0, mean_q_r = 0.0, mean_q_e = 0.0;
    bool unstable_p = false, unstable_r = false; // empirical divergence

    std::uint64_t replicas = 0, slots = 0, warmup_slots = 0;
    SimCounters totals;
};

SimReport run(const ChannelTable& table, const PolicyParams& pol, double lambda_p,
              double lambda_e, const SimOptions& opts);

inline SimReport run_dominated(SimVariant variant, const ChannelTable& table,
                               const PolicyParams& pol, double lambda_p, double lambda_e,
                               SimOptions opts) {
    opts.variant = variant;
    return run(table, pol, lambda_p, lambda_e, opts);
}

} // namespace ccrp
