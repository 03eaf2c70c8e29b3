#include "ccrp/queue_analysis.hpp"

#include <cmath>
#include <string>

#include "ccrp/errors.hpp"

namespace ccrp {

void BernoulliQueueSpec::validate() const {
    if (!(std::isfinite(arrival_rate) && arrival_rate >= 0.0 && arrival_rate <= 1.0))
        throw ConfigError("arrival rate " + std::to_string(arrival_rate) + " outside [0,1]");
    if (!(std::isfinite(service_rate) && service_rate >= 0.0 && service_rate <= 1.0))
        throw ConfigError("service rate " + std::to_string(service_rate) + " outside [0,1]");
}

double energy_empty_prob(const BernoulliQueueSpec& spec) {
    spec.validate();
    if (spec.service_rate <= 0.0) return spec.arrival_rate > 0.0 ? 0.0 : 1.0;
    if (spec.arrival_rate >= spec.service_rate) return 0.0; // saturated
    return 1.0 - spec.arrival_rate / spec.service_rate;
}

std::vector<double> energy_state_probs(const BernoulliQueueSpec& spec, int max_state) {
    spec.validate();
    if (max_state < 0) throw ConfigError("max_state must be >= 0");
    const double lam = spec.arrival_rate;
    const double mu = spec.service_rate;
    if (lam >= mu)
        throw ConfigError(
            "queue unstable (arrival >= service): the geometric stationary form does not "
            "exist; use energy_empty_prob, which applies the saturation rule");

    std::vector<double> probs(static_cast<std::size_t>(max_state) + 1, 0.0);
    const double empty = 1.0 - lam / mu;
    probs[0] = empty;
    if (mu >= 1.0) {
        // Two-state chain: a stored packet always leaves next slot.
        if (max_state >= 1) probs[1] = lam;
        return probs;
    }
    const double mu_bar = 1.0 - mu;
    const double ratio = lam * mu_bar / ((1.0 - lam) * mu);
    double geometric = ratio; // ratio^k
    for (int k = 1; k <= max_state; ++k) {
        probs[static_cast<std::size_t>(k)] = empty * geometric / mu_bar;
        geometric *= ratio;
    }
    return probs;
}

Occupancy occupancy(double arrival, double service) {
    if (arrival <= 0.0) return {0.0, true};
    if (service <= 0.0) return {1.0, false};
    if (arrival >= service) return {1.0, arrival <= service};
    return {arrival / service, true};
}

} // namespace ccrp
