#pragma once

#include "ccrp/channel.hpp"

namespace ccrp {

// The five tunable decision probabilities of the protocol.
struct PolicyParams {
    double receive_prob = 0.0;          // f: receive instead of accessing at t=0 (energy available)
    double resume_prob = 0.0;           // omega: keep receiving at t=tau when the PU is busy
    double depleted_receive_prob = 0.0; // alpha: receive when the energy queue is empty
    double admit_prob = 0.0;            // beta: admit a decoded-but-undelivered primary packet
    double relay_select_prob = 0.0;     // gamma: serve the relaying queue when accessing

    void validate() const; // throws ConfigError if any leaves [0,1]
};

// Mean rates and occupancies of one evaluated system. Service rates are
// conditional on the served queue being nonempty; relay_arrival is the
// unconditional per-slot admission probability.
struct RateVector {
    double primary_service = 0.0;   // mu_p
    double secondary_service = 0.0; // mu_s, the objective throughput
    double relay_service = 0.0;     // mu_r
    double energy_service = 0.0;    // mu_e
    double relay_arrival = 0.0;     // lambda_r
    double primary_busy = 0.0;      // pi_p = Pr{primary queue nonempty}
    double relay_busy = 0.0;        // pi_r
    double energy_empty = 0.0;      // nu_0
    bool primary_stable = true;     // lambda_p <= mu_p
    bool relay_stable = true;       // lambda_r <= mu_r

    // Diagnostics for parameters a system variant cannot use.
    enum Flag : unsigned { kResumeIgnored = 1u, kDepletedReceiveIgnored = 2u };
    unsigned flags = 0;
};

// First approximated system: backlogged PU (dummy packets keep the channel
// busy), all SU decisions at t=0, resume_prob pinned to 1. Inner bound.
RateVector rates_s1(const ChannelTable& table, double lambda_e, double lambda_p,
                    const PolicyParams& pol);

// Second approximated system: one energy token drained per slot, so the
// energy queue is empty with probability 1 - lambda_e. Inner bound.
// Single forward pass: mu_p -> pi_p -> (mu_r, lambda_r) -> pi_r -> mu_s.
RateVector rates_s2(const ChannelTable& table, double lambda_e, double lambda_p,
                    const PolicyParams& pol);

// Third approximated system: backlogged energy queue; depleted_receive_prob
// is irrelevant. Outer bound.
RateVector rates_s3(const ChannelTable& table, double lambda_p, const PolicyParams& pol);

// Conventional sense-then-act baseline: receive_prob = 1, resume_prob = 0,
// depleted_receive_prob = 1, admit_prob = 1; only relay selection is free.
enum class ConventionalBound { Inner, Outer }; // Inner via S2 at lambda_e, Outer via S3
PolicyParams conventional_policy(double relay_select_prob);
RateVector rates_conventional(const ChannelTable& table, double lambda_e, double lambda_p,
                              double relay_select_prob, ConventionalBound bound);

} // namespace ccrp
