#pragma once

#include <vector>

namespace ccrp {

// A decoupled discrete-time queue: Bernoulli arrivals at `arrival_rate`,
// Bernoulli service opportunities at `service_rate`, both per slot.
struct BernoulliQueueSpec {
    double arrival_rate = 0.0;
    double service_rate = 0.0;

    void validate() const; // throws ConfigError if either leaves [0,1]
};

// Stationary probability that the queue is empty: max(0, 1 - lambda/mu).
// A queue with arrival >= service saturates and is never empty; a dead
// queue (mu = 0, lambda = 0) is always empty.
double energy_empty_prob(const BernoulliQueueSpec& spec);

// Stationary distribution [nu_0 .. nu_max_state] of the stable chain.
// Geometric beyond state 1 for mu < 1; for mu = 1 only states 0 and 1 carry
// mass. Throws for an unstable spec (lambda >= mu): callers must use the
// energy_empty_prob saturation rule instead.
std::vector<double> energy_state_probs(const BernoulliQueueSpec& spec, int max_state);

struct Occupancy {
    double prob = 0.0;   // Pr{queue nonempty}, clamped to 1 when unstable
    bool stable = true;  // lambda <= mu
};

// Pr{queue nonempty} = min(1, lambda/mu). The clamp doubles as the
// stability-violation signal consumed by the optimizer.
Occupancy occupancy(double arrival, double service);

// Loynes-style stability predicate, boundary included.
inline bool is_stable(double arrival, double service) { return service >= arrival; }

} // namespace ccrp
