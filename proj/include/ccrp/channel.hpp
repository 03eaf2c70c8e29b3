#pragma once

#include <optional>
#include <string>

namespace ccrp {

// Directed links of the four-node network: primary transmitter p, secondary
// transmitter s, and their destinations d_p and d_s. The s→d_p link doubles
// as the relay-delivery path and as the interference path at d_p; the PU
// interferes at d_s over the extra p→d_s path.
enum class Link { PdP, Ps, SdS, SdP };

const char* link_name(Link link);

// Physical parameterisation of the network. All links are Rayleigh block
// fading (exponential power gains with the given means); receivers see AWGN.
// The PU always transmits over the full slot; the SU transmits either from
// t = 0 or from t = tau with power energy_per_packet / (T - i*tau).
struct PhysicalConfig {
    double packet_bits = 0.0;        // payload per data packet
    double slot_seconds = 0.0;       // slot length T
    double bandwidth_hz = 0.0;       // channel bandwidth W
    double decision_seconds = 0.0;   // tau, 0 <= tau < T
    double energy_per_packet_j = 0.0;
    double primary_power_w = 0.0;

    double noise_dp_w = 0.0;         // noise power at d_p
    double noise_s_w = 0.0;          // noise power at s
    double noise_ds_w = 0.0;         // noise power at d_s

    double sigma_pdp = 0.0;          // mean fading gain p→d_p
    double sigma_ps = 0.0;           // p→s
    double sigma_sds = 0.0;          // s→d_s
    double sigma_sdp = 0.0;          // s→d_p
    double sigma_pds = 0.0;          // p→d_s (PU interference at d_s)

    void validate() const;           // throws ConfigError

    // Spectral efficiency of the transmitter of `link` when it starts at
    // instant i (the PU only ever uses i = 0): B / (W * (T - i*tau)).
    double spectral_efficiency(Link link, int instant) const;

    // Mean received SNR times mean fading gain for the transmitter of
    // `link` starting at `instant`, and for the interferer of `link`
    // starting at `interferer_instant`.
    double tx_gamma_sigma(Link link, int instant) const;
    double interferer_gamma_sigma(Link link, int interferer_instant) const;
};

// Direct parameterisation: the success probabilities themselves, as printed
// in measurement campaigns or used by the fig2/fig3/fig5 families.
struct DirectProbabilities {
    double solo_pdp = 0.0;           // pbar.pd_p.0
    double solo_ps = 0.0;            // pbar.ps.0
    double solo_sds = 0.0;           // pbar.sd_s.0
    double solo_sdp = 0.0;           // pbar.sd_p.0
    double delay_sds = 1.0;          // dhat.sd_s
    double delay_sdp = 1.0;          // dhat.sd_p
    std::optional<double> solo_sds1; // pbar.sd_s.1, optional; must equal dhat*pbar0
    std::optional<double> solo_sdp1; // pbar.sd_p.1
    double mpr_pdp_su0 = 1.0;        // delta.pd_p.00
    double mpr_pdp_su1 = 1.0;        // delta.pd_p.01
    double mpr_sds_i0 = 1.0;         // delta.sd_s.00
    double mpr_sds_i1 = 1.0;         // delta.sd_s.10
    double mpr_sdp_i0 = 1.0;         // delta.sd_p.00
    double mpr_sdp_i1 = 1.0;         // delta.sd_p.10
};

// Every per-slot packet-success probability the protocol can see. Immutable
// after construction; shared read-only by the rate equations, the optimizer
// and simulation workers.
struct ChannelTable {
    // Solo (no concurrent transmission) success probabilities. The primary
    // links have a single start instant; secondary links are indexed by the
    // access instant i ∈ {0, 1}.
    double solo_pdp = 0.0;
    double solo_ps = 0.0;
    double solo_sds[2] = {0.0, 0.0};
    double solo_sdp[2] = {0.0, 0.0};

    // Delayed-access ratios solo_x[1] / solo_x[0].
    double delay_sds = 1.0;
    double delay_sdp = 1.0;

    // Multipacket-reception reduction factors under a concurrent
    // transmission. For the p→d_p link the index is the SU start instant n;
    // for the secondary links it is the SU's own start instant i (the PU
    // always interferes from t = 0). p→s never sees interference: the SU
    // only listens when it is not transmitting.
    double mpr_pdp[2] = {1.0, 1.0};
    double mpr_sds[2] = {1.0, 1.0};
    double mpr_sdp[2] = {1.0, 1.0};

    double solo(Link link, int instant) const;
    double mpr(Link link, int index) const;

    void validate(double tol = 1e-12) const; // throws ConfigError
};

// Outage closed forms ------------------------------------------------------

// Probability that a packet sent alone on `link` starting at `instant`
// decodes: exp(-(2^R - 1) / (gamma*sigma)). Rejects instant=1 for the
// primary transmitter.
double solo_success(const PhysicalConfig& cfg, Link link, int instant);

// Reduction of the above under a concurrent transmission whose sender
// starts at `interferer_instant`: 1 / (1 + (2^R - 1) * gs_int / gs_tx).
double interference_reduction(const PhysicalConfig& cfg, Link link, int instant,
                              int interferer_instant);

// Ratio of the p→d_p reduction for an SU interferer starting at t = tau to
// one starting at t = 0; approaches 1 - tau/T when the interference term
// dominates.
double rho_ratio(const PhysicalConfig& cfg);

ChannelTable build_table(const PhysicalConfig& cfg);
ChannelTable build_table(const DirectProbabilities& probs);

} // namespace ccrp
