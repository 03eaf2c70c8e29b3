// Test-only oracles, independent of the library's closed-form paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ccrp/channel.hpp"
#include "ccrp/rates.hpp"
#include "ccrp/rng.hpp"

namespace oracles {

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Monte Carlo estimate of Pr{ gs_tx*E1 / (gs_int*E2 + 1) >= 2^rate - 1 } with
// E1, E2 independent unit exponentials: the SINR-threshold decoding event on
// Rayleigh block fading. gs_int = 0 recovers the solo link.
inline McEstimate mc_success_prob(double gs_tx, double gs_int, double rate,
                                  std::uint64_t draws, std::uint64_t seed) {
    ccrp::Xoshiro256 rng(seed);
    const double threshold = std::exp2(rate) - 1.0;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const double fade_tx = -std::log(1.0 - rng.next_double());
        double interference = 0.0;
        if (gs_int > 0.0) interference = gs_int * -std::log(1.0 - rng.next_double());
        if (gs_tx * fade_tx >= threshold * (interference + 1.0)) ++hits;
    }
    McEstimate est;
    est.mean = static_cast<double>(hits) / static_cast<double>(draws);
    est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(draws));
    return est;
}

// Stationary distribution of the truncated energy-queue chain, solved
// numerically from the global balance equations by forward substitution
// and a final normalisation. Transitions: from 0 up with probability lam;
// from k >= 1 up lam*(1-mu), down mu*(1-lam), stay otherwise. No geometric
// closed form is assumed anywhere; the equations are solved row by row.
inline std::vector<double> chain_stationary_solve(double lam, double mu, int states) {
    if (states < 2) throw std::invalid_argument("need at least two states");
    const int n = states;
    const double up0 = lam;
    const double up = lam * (1.0 - mu);
    const double down = mu * (1.0 - lam);
    if (down <= 0.0) throw std::invalid_argument("chain needs a downward rate");

    // Unnormalised solution with pi[0] = 1. Row 0 of (P^T - I) pi = 0 gives
    // pi[1]; row k gives pi[k+1] in terms of the two below it.
    std::vector<double> pi(n, 0.0);
    pi[0] = 1.0;
    pi[1] = up0 * pi[0] / down;
    for (int k = 1; k + 1 < n; ++k) {
        const double inflow_below = (k == 1 ? up0 : up) * pi[k - 1];
        pi[k + 1] = ((up + down) * pi[k] - inflow_below) / down;
        if (pi[k + 1] < 0.0) pi[k + 1] = 0.0; // roundoff in the far tail
    }
    double total = 0.0;
    for (double v : pi) total += v;
    for (double& v : pi) v /= total;
    return pi;
}

// Slot-by-slot simulation of the same chain; returns the fraction of slots
// the queue was nonempty at the service epoch.
inline double chain_busy_fraction(double lam, double mu, std::uint64_t slots,
                                  std::uint64_t seed) {
    ccrp::Xoshiro256 rng(seed);
    std::uint64_t q = 0, busy = 0;
    for (std::uint64_t s = 0; s < slots; ++s) {
        if (q > 0) {
            ++busy;
            if (rng.bernoulli(mu)) --q;
        }
        if (rng.bernoulli(lam)) ++q;
    }
    return static_cast<double>(busy) / static_cast<double>(slots);
}

// Random but well-formed channel tables for property scans. Solo
// probabilities are kept away from 0 so conditional estimators stay
// measurable.
inline ccrp::ChannelTable random_table(ccrp::Xoshiro256& rng) {
    auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };
    ccrp::DirectProbabilities p;
    p.solo_pdp = u(0.0, 0.95);
    p.solo_ps = u(0.3, 1.0);
    p.solo_sds = u(0.3, 1.0);
    p.solo_sdp = u(0.3, 1.0);
    p.delay_sds = u(0.3, 1.0);
    p.delay_sdp = u(0.3, 1.0);
    p.mpr_pdp_su0 = u(0.05, 1.0);
    p.mpr_pdp_su1 = u(0.05, 1.0);
    p.mpr_sds_i0 = u(0.05, 1.0);
    p.mpr_sds_i1 = u(0.05, 1.0);
    p.mpr_sdp_i0 = u(0.05, 1.0);
    p.mpr_sdp_i1 = u(0.05, 1.0);
    return ccrp::build_table(p);
}

inline ccrp::PolicyParams random_policy(ccrp::Xoshiro256& rng) {
    ccrp::PolicyParams pol;
    pol.receive_prob = rng.next_double();
    pol.resume_prob = rng.next_double();
    pol.depleted_receive_prob = rng.next_double();
    pol.admit_prob = rng.next_double();
    pol.relay_select_prob = rng.next_double();
    return pol;
}

} // namespace oracles
