#pragma once

#include "ccrp/rates.hpp"

namespace ccrp {

// Grid-search resolution. `points` samples per free axis on [0,1], endpoints
// included. `exhaustive_gamma` switches the relay-selection probability from
// its closed-form stability floor to a raw grid axis: slower, used to
// validate the elimination.
struct GridSpec {
    int points = 41;
    bool exhaustive_gamma = false;

    double value(int k) const { return static_cast<double>(k) / (points - 1); }
    void validate() const; // points >= 2
    GridSpec refined() const { return {2 * points - 1, exhaustive_gamma}; }
};

struct OptimizationResult {
    PolicyParams best_policy{};
    RateVector best_rates{};
    bool feasible = false;
    GridSpec grid{};
    double objective = 0.0;        // mu_s at the best feasible point
    double worst_violation = 0.0;  // min over the grid of max(lambda_r - mu_r, lambda_p - mu_p)
};

// Stability floors used by the S1 search: the smallest depleted-receive
// probability keeping the primary queue stable at fixed (f, beta), and the
// smallest relay-selection probability keeping the relaying queue stable.
// Both are the unclamped closed-form values (may leave [0,1]).
double s1_depleted_receive_floor(const ChannelTable& table, double lambda_e, double lambda_p,
                                 double receive_prob, double admit_prob);
double s1_relay_select_floor(const ChannelTable& table, double lambda_e, double receive_prob,
                             double depleted_receive_prob, double admit_prob);

// max mu_s subject to lambda_r <= mu_r and lambda_p <= mu_p. Ties broken by
// the lexicographically smallest (beta, f, alpha, omega, gamma).
OptimizationResult optimize_s1(const ChannelTable& table, double lambda_e, double lambda_p,
                               const GridSpec& grid = {});
OptimizationResult optimize_s2(const ChannelTable& table, double lambda_e, double lambda_p,
                               const GridSpec& grid = {});
OptimizationResult optimize_s3(const ChannelTable& table, double lambda_p,
                               const GridSpec& grid = {});

// Conventional baseline: four parameters pinned, only relay selection free.
OptimizationResult optimize_conventional(const ChannelTable& table, double lambda_e,
                                         double lambda_p, ConventionalBound bound,
                                         const GridSpec& grid = {});

} // namespace ccrp
