#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ccrp/optimizer.hpp"
#include "ccrp/simulator.hpp"
#include "oracles.hpp"

using namespace ccrp;

namespace {

ChannelTable uniform_table(double solo, double mpr, double delay) {
    DirectProbabilities p;
    p.solo_pdp = solo;
    p.solo_ps = solo;
    p.solo_sds = solo;
    p.solo_sdp = solo;
    p.delay_sds = delay;
    p.delay_sdp = delay;
    p.mpr_pdp_su0 = p.mpr_pdp_su1 = mpr;
    p.mpr_sds_i0 = p.mpr_sds_i1 = mpr;
    p.mpr_sdp_i0 = p.mpr_sdp_i1 = mpr;
    return build_table(p);
}

bool close_enough(double analytic, const FieldEstimate& e, double floor = 1e-9) {
    return std::fabs(analytic - e.mean) <= 3.0 * e.ci + floor;
}

} // namespace

TEST_CASE("same seed, same report") {
    const ChannelTable t = uniform_table(0.8, 0.4, 0.7);
    const PolicyParams pol{0.5, 0.6, 0.3, 0.7, 0.4};
    SimOptions opts;
    opts.replicas = 4;
    opts.slots = 20000;
    opts.seed = 99;
    const SimReport a = run(t, pol, 0.2, 0.6, opts);
    const SimReport b = run(t, pol, 0.2, 0.6, opts);
    CHECK(a.mu_s.mean == b.mu_s.mean);
    CHECK(a.mu_p.mean == b.mu_p.mean);
    CHECK(a.pi_r.mean == b.pi_r.mean);
    CHECK(a.totals.arrivals_p == b.totals.arrivals_p);
    CHECK(a.totals.energy_consumed == b.totals.energy_consumed);

    opts.seed = 100;
    const SimReport c = run(t, pol, 0.2, 0.6, opts);
    CHECK(a.totals.arrivals_p != c.totals.arrivals_p);
}

TEST_CASE("a depleted SU that never listens idles") {
    const ChannelTable t = uniform_table(0.9, 0.5, 0.8);
    PolicyParams pol{0.5, 0.5, 0.0, 1.0, 0.5}; // alpha = 0
    NetworkState st;
    st.rng = Xoshiro256(7);
    for (int s = 0; s < 2000; ++s) {
        const std::uint64_t q_r = st.q_r;
        const SlotTrace tr = step(st, t, pol, 0.5, 0.0); // no energy ever arrives
        CHECK(st.q_e == 0);
        CHECK(tr.su_action == SuAction::Idle);
        CHECK_FALSE(tr.secondary_delivered);
        CHECK_FALSE(tr.energy_consumed);
        CHECK(st.q_r == q_r); // no admissions without reception
    }
}

TEST_CASE("perfect channels: direct decode preempts relaying") {
    const ChannelTable t = uniform_table(1.0, 1.0, 1.0);
    const PolicyParams pol{1.0, 1.0, 1.0, 1.0, 0.5};
    SimOptions opts;
    opts.replicas = 2;
    opts.slots = 5000;
    opts.seed = 5;
    const SimReport r = run(t, pol, 1.0, 1.0, opts);
    CHECK(r.totals.admitted_real == 0);
    CHECK(r.totals.admitted_dummy == 0);
    CHECK(r.totals.delivered_p_direct > 0);
    CHECK(r.lambda_r.mean == 0.0);
}

TEST_CASE("energy usage under a saturated primary follows 1 - f*omega") {
    const ChannelTable t = uniform_table(0.7, 0.4, 0.8);
    const PolicyParams pol{0.6, 0.7, 0.5, 0.5, 0.5};
    SimOptions opts;
    opts.replicas = 12;
    opts.slots = 50000;
    opts.seed = 21;
    const SimReport r = run(t, pol, 1.0, 0.8, opts);
    CHECK(close_enough(1.0 - 0.6 * 0.7, r.mu_e, 1e-3));
}

TEST_CASE("a lone SU with full energy delivers at the solo rate") {
    const ChannelTable t = uniform_table(0.7, 0.4, 0.8);
    const PolicyParams pol{0.0, 0.5, 0.0, 0.5, 0.5}; // f = 0: always access at t=0
    SimOptions opts;
    opts.replicas = 12;
    opts.slots = 50000;
    opts.seed = 22;
    const SimReport r = run(t, pol, 0.0, 1.0, opts);
    CHECK(close_enough(0.7, r.mu_s, 1e-3));
    CHECK(r.totals.admitted_real == 0);
    CHECK(r.pi_r.mean == 0.0);
}

TEST_CASE("integer flow conservation holds exactly") {
    Xoshiro256 rng(55);
    for (int trial = 0; trial < 6; ++trial) {
        const ChannelTable t = oracles::random_table(rng);
        const PolicyParams pol = oracles::random_policy(rng);
        const double lambda_p = rng.next_double();
        const double lambda_e = rng.next_double();
        SimOptions opts;
        opts.replicas = 3;
        opts.slots = 20000;
        opts.seed = 1000 + static_cast<std::uint64_t>(trial);
        for (SimVariant v :
             {SimVariant::Original, SimVariant::S1, SimVariant::S2, SimVariant::S3}) {
            opts.variant = v;
            const SimReport r = run(t, pol, lambda_p, lambda_e, opts);
            const SimCounters& c = r.totals;
            CHECK(c.arrivals_p == c.delivered_p_direct + c.admitted_real + c.final_q_p);
            CHECK(c.admitted_real + c.admitted_dummy == c.relay_delivered + c.final_q_r);
            if (v != SimVariant::S3)
                CHECK(c.arrivals_e == c.energy_consumed + c.energy_drained + c.final_q_e);
            if (v != SimVariant::S2) CHECK(c.energy_drained == 0);
            if (v != SimVariant::S1) CHECK(c.admitted_dummy == 0);
        }
    }
}

TEST_CASE("slot traces honour causality and admission preconditions") {
    const ChannelTable t = uniform_table(0.6, 0.5, 0.7);
    const PolicyParams pol{0.55, 0.6, 0.45, 0.8, 0.5};
    NetworkState st;
    st.rng = Xoshiro256(77);
    std::uint64_t cumulative_tx = 0, cumulative_harvest = 0;
    for (int s = 0; s < 50000; ++s) {
        const std::uint64_t q_e_before = st.q_e;
        const std::uint64_t q_r_before = st.q_r;
        const SlotTrace tr = step(st, t, pol, 0.35, 0.45);
        cumulative_harvest += st.q_e + (tr.energy_consumed ? 1 : 0) - q_e_before;
        cumulative_tx += tr.energy_consumed ? 1 : 0;
        CHECK(cumulative_tx <= cumulative_harvest);

        if (tr.primary_admitted) {
            CHECK(tr.su_action == SuAction::Receive);
            CHECK(tr.pu_active);
            CHECK(tr.draw_pdp == 0);
            CHECK(tr.draw_ps == 1);
        }
        const std::uint64_t delta =
            st.q_r > q_r_before ? st.q_r - q_r_before : q_r_before - st.q_r;
        CHECK(delta <= 1);
        // a slot never both admits and serves the relay queue
        CHECK_FALSE((tr.primary_admitted && tr.relay_delivered));
    }
}

TEST_CASE("dominated variants pin their defining quantities") {
    const ChannelTable t = uniform_table(0.7, 0.4, 0.8);
    const PolicyParams pol{0.45, 0.6, 0.35, 0.7, 0.4};
    SimOptions opts;
    opts.replicas = 10;
    opts.slots = 40000;
    opts.seed = 31;

    SUBCASE("S1: energy service is 1 - f and the channel is always busy") {
        const SimReport r = run_dominated(SimVariant::S1, t, pol, 0.15, 0.3, opts);
        CHECK(close_enough(1.0 - pol.receive_prob, r.mu_e, 1e-3));
        CHECK(r.pi_p.mean == 1.0);
        CHECK(r.pi_p.ci == 0.0);
    }

    SUBCASE("S2: the empty-energy fraction is 1 - lambda_e") {
        const SimReport r = run_dominated(SimVariant::S2, t, pol, 0.15, 0.6, opts);
        CHECK(close_enough(0.4, r.nu0, 1e-3));
        CHECK(r.mu_e.mean == 1.0); // one token leaves every available slot
    }

    SUBCASE("S3: energy never gates an action") {
        const SimReport r = run_dominated(SimVariant::S3, t, pol, 0.15, 0.0, opts);
        CHECK(r.nu0.mean == 0.0);
        CHECK(r.mu_s.mean > 0.0); // transmits despite zero harvesting
    }
}

TEST_CASE("dominated runs reproduce the closed-form rate vectors") {
    // One well-conditioned tuple per variant; the acceptance suite scans 20.
    const ChannelTable t = uniform_table(0.75, 0.45, 0.8);
    SimOptions opts;
    opts.replicas = 10;
    opts.slots = 60000;
    opts.seed = 91;

    SUBCASE("S1") {
        const PolicyParams pol{0.3, 1.0, 0.4, 0.3, 0.4};
        const double lambda_e = 0.35, lambda_p = 0.1;
        const RateVector want = rates_s1(t, lambda_e, lambda_p, pol);
        REQUIRE(want.relay_stable);
        const SimReport got = run_dominated(SimVariant::S1, t, pol, lambda_p, lambda_e, opts);
        CHECK(close_enough(want.primary_service, got.mu_p, 1e-6));
        CHECK(close_enough(want.secondary_service, got.mu_s, 1e-6));
        CHECK(close_enough(want.relay_service, got.mu_r, 1e-6));
        CHECK(close_enough(want.relay_arrival, got.lambda_r, 1e-6));
        CHECK(close_enough(want.energy_service, got.mu_e, 1e-6));
        CHECK(close_enough(want.energy_empty, got.nu0, 1e-6));
        CHECK(close_enough(want.relay_busy, got.pi_r, 1e-6));
    }

    SUBCASE("S2") {
        const PolicyParams pol{0.5, 0.55, 0.4, 0.7, 0.7};
        const double lambda_e = 0.7, lambda_p = 0.15;
        const RateVector want = rates_s2(t, lambda_e, lambda_p, pol);
        REQUIRE(want.primary_stable);
        REQUIRE(want.relay_stable);
        const SimReport got = run_dominated(SimVariant::S2, t, pol, lambda_p, lambda_e, opts);
        CHECK(close_enough(want.primary_service, got.mu_p, 1e-6));
        CHECK(close_enough(want.secondary_service, got.mu_s, 1e-6));
        CHECK(close_enough(want.relay_service, got.mu_r, 1e-6));
        CHECK(close_enough(want.relay_arrival, got.lambda_r, 1e-6));
        CHECK(close_enough(want.primary_busy, got.pi_p, 1e-6));
        CHECK(close_enough(want.relay_busy, got.pi_r, 1e-6));
        CHECK(close_enough(want.energy_empty, got.nu0, 1e-6));
    }

    SUBCASE("S3") {
        const PolicyParams pol{0.5, 0.55, 0.0, 0.7, 0.7};
        const double lambda_p = 0.2;
        const RateVector want = rates_s3(t, lambda_p, pol);
        REQUIRE(want.primary_stable);
        REQUIRE(want.relay_stable);
        const SimReport got = run_dominated(SimVariant::S3, t, pol, lambda_p, 0.5, opts);
        CHECK(close_enough(want.primary_service, got.mu_p, 1e-6));
        CHECK(close_enough(want.secondary_service, got.mu_s, 1e-6));
        CHECK(close_enough(want.relay_service, got.mu_r, 1e-6));
        CHECK(close_enough(want.relay_arrival, got.lambda_r, 1e-6));
        CHECK(close_enough(want.primary_busy, got.pi_p, 1e-6));
        CHECK(close_enough(want.energy_service, got.mu_e, 1e-6));
    }
}

TEST_CASE("per-slot trace emission") {
    const ChannelTable t = uniform_table(0.7, 0.4, 0.8);
    const PolicyParams pol{0.5, 0.5, 0.5, 0.5, 0.5};
    SimOptions opts;
    opts.replicas = 2;
    opts.slots = 100;
    opts.seed = 3;
    std::ostringstream sink;
    opts.trace_sink = &sink;
    run(t, pol, 0.3, 0.5, opts);
    const std::string text = sink.str();
    std::size_t lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == 100); // replica 0 only
    CHECK(text.find("slot=0 ") == 0);
    CHECK(text.find("act=") != std::string::npos);
}

TEST_CASE("original system sits between the inner and outer bound values") {
    // Relay-only family of the lambda_p sweeps, outer-bound-optimal policy.
    DirectProbabilities p;
    p.solo_pdp = 0.0;
    p.solo_ps = 0.8;
    p.solo_sds = 0.7;
    p.solo_sdp = 0.8;
    p.delay_sds = p.delay_sdp = 0.7;
    p.mpr_sds_i0 = p.mpr_sdp_i0 = 0.3;
    p.mpr_sds_i1 = p.mpr_sdp_i1 = 0.2;
    const ChannelTable t = build_table(p);
    const double lambda_e = 0.9, lambda_p = 0.15;

    const OptimizationResult outer = optimize_s3(t, lambda_p, {21, false});
    REQUIRE(outer.feasible);
    const PolicyParams pol = outer.best_policy;
    const double inner = std::max(rates_s1(t, lambda_e, lambda_p, pol).secondary_service,
                                  rates_s2(t, lambda_e, lambda_p, pol).secondary_service);

    SimOptions opts;
    opts.replicas = 10;
    opts.slots = 50000;
    opts.seed = 61;
    const SimReport r = run(t, pol, lambda_p, lambda_e, opts);
    CHECK(r.mu_s.mean >= inner - 3.0 * r.mu_s.ci);
    CHECK(r.mu_s.mean <= outer.objective + 3.0 * r.mu_s.ci);
}

TEST_CASE("empirical instability is reported, not thrown") {
    const ChannelTable t = uniform_table(0.3, 0.2, 0.8);
    // Overloaded primary queue: lambda_p far above any service rate.
    const PolicyParams pol{0.0, 0.0, 0.0, 0.0, 0.0};
    SimOptions opts;
    opts.replicas = 2;
    opts.slots = 30000;
    opts.seed = 8;
    opts.blowup_threshold = 5000;
    const SimReport r = run(t, pol, 0.9, 0.2, opts);
    CHECK(r.unstable_p);
    CHECK_FALSE(r.unstable_r);
}
