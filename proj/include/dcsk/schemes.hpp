// schemes.hpp - End-to-end two-way relay protocols over DCSK: the
// superposed physical-layer scheme (scheme 1), the time- and
// frequency-multiplexed schemes (2 and 3, identical sample processing), and
// the amplify-and-forward baseline.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dcsk/analysis.hpp"
#include "dcsk/channel.hpp"
#include "dcsk/modem.hpp"

namespace dcsk {

// --- Mapping algebra (relay and user sides) ---------------------------------

// Network-coded bit: bipolar XOR of the two user bits.
inline int map_network(int s_a, int s_b) noexcept { return s_a * s_b; }

// Relay mapping of the ternary superposition symbol: +/-2 -> +1, 0 -> -1.
inline int map_ternary(int sym) {
    if (sym == 2 || sym == -2) return +1;
    if (sym == 0) return -1;
    throw std::invalid_argument("map_ternary: symbol must be in {+2, 0, -2}");
}

// User-side demap |s_decoded + own_bit| - 1; algebraically the product, which
// strips the user's own bit from the network-coded one.
inline int demap_at_user(int s_decoded, int own_bit) noexcept {
    return std::abs(s_decoded + own_bit) - 1;
}

// --- Scenario ----------------------------------------------------------------

enum class RelayDetector {
    channel_aware,    // min-distance over the four superposition hypotheses
    fixed_threshold,  // ternary against theta = relay_threshold_scale * 2*beta
};

enum class ErrorMetric { end_to_end, relay_network_bit };

struct Scenario {
    SchemeId scheme = SchemeId::time_mux2;
    std::size_t beta = 25;
    TwoRayLink hop1_a;  // user A -> relay, phase 1
    TwoRayLink hop1_b;  // user B -> relay, phase 1
    TwoRayLink hop2_b;  // relay -> user B, phase 2
    double ebn0_db = 0.0;

    // Scheme-1 diagnostics and detector knobs.
    bool genie_remove_strong_isi = false;
    bool coherent_superposition = false;  // pin both users' carrier phases to zero
    RelayDetector relay_detector = RelayDetector::channel_aware;
    double relay_threshold_scale = 1.0;  // fixed_threshold mode: theta = scale * E_b
    double anc_threshold_scale = 1.0;    // ANC user detector: theta = scale * G^2 * E_b

    ErrorMetric metric = ErrorMetric::end_to_end;

    double eb() const noexcept { return 2.0 * static_cast<double>(beta); }
    double n0() const noexcept { return eb() / db_to_linear(ebn0_db); }

    void validate() const {
        if (beta < 8) throw std::invalid_argument("Scenario: beta must be >= 8");
        hop1_a.validate();
        hop1_b.validate();
        hop2_b.validate();
        for (const TwoRayLink* l : {&hop1_a, &hop1_b, &hop2_b}) {
            if (2 * l->delay >= beta)
                throw std::invalid_argument("Scenario: path delay must be < beta/2");
        }
        if (!(relay_threshold_scale > 0.0) || !(anc_threshold_scale > 0.0))
            throw std::invalid_argument("Scenario: threshold scales must be > 0");
        if (metric == ErrorMetric::relay_network_bit &&
            (scheme == SchemeId::anc))
            throw std::invalid_argument("Scenario: relay metric is undefined for the ANC scheme");
        if (genie_remove_strong_isi && scheme != SchemeId::pnc1)
            throw std::invalid_argument("Scenario: genie ISI removal applies to scheme 1 only");
    }
};

struct FrameOutcome {
    int sent_a = 0;
    int sent_b = 0;
    int recovered_a_at_b = 0;
    int relay_bit = 0;  // mapped network-coded bit at the relay (0 where undefined)
};

// --- Slot / complexity accounting --------------------------------------------

struct SlotPlan {
    unsigned time_slots;
    double t_n;        // end-to-end exchange time
    double bandwidth;  // in units of W_s = 1/T_c
};

inline SlotPlan slot_and_bandwidth(SchemeId scheme, std::size_t beta, double t_c = 1.0) {
    const double ws = 1.0 / t_c;
    const double b = static_cast<double>(beta);
    switch (scheme) {
        case SchemeId::pnc1: return {2, 4.0 * b * t_c, ws};
        case SchemeId::time_mux2: return {3, 6.0 * b * t_c, ws};
        case SchemeId::freq_mux3: return {2, 4.0 * b * t_c, 2.0 * ws};
        case SchemeId::anc: return {2, 4.0 * b * t_c, ws};
    }
    throw std::invalid_argument("slot_and_bandwidth: unknown scheme");
}

struct RelayOpCounts {
    std::uint64_t decode;
    std::uint64_t map;
    std::uint64_t modulate;
};

inline RelayOpCounts relay_op_counts(SchemeId scheme, std::uint64_t packet_bits) {
    switch (scheme) {
        case SchemeId::pnc1: return {packet_bits, packet_bits, packet_bits};
        case SchemeId::time_mux2:
        case SchemeId::freq_mux3: return {2 * packet_bits, packet_bits, packet_bits};
        case SchemeId::anc: return {0, 0, 0};
    }
    throw std::invalid_argument("relay_op_counts: unknown scheme");
}

// --- Frame-level protocol runner ----------------------------------------------

// Owns the chaotic streams, per-hop channels and scratch buffers for one
// worker. A runner is a deterministic function of (scenario, seed).
class SchemeRunner {
  public:
    SchemeRunner(const Scenario& scenario, std::uint64_t seed)
        : sc_(scenario),
          rng_(seed),
          user_stream_(ChaosStream::seeded(rng_)),
          stream_b_(ChaosStream::seeded(rng_)),
          relay_stream_(ChaosStream::seeded(rng_)),
          ch_a_(scenario.hop1_a),
          ch_b_(scenario.hop1_b),
          ch_2_(scenario.hop2_b),
          ch_ca_(scenario.hop1_a),
          ch_cb_(scenario.hop1_b),
          ch_c2_(scenario.hop2_b) {
        sc_.validate();
        n0_ = sc_.n0();
        eb_ = sc_.eb();
    }

    const Scenario& scenario() const noexcept { return sc_; }

    FrameOutcome run_frame() {
        switch (sc_.scheme) {
            case SchemeId::pnc1: return run_pnc_frame();
            case SchemeId::time_mux2:
            case SchemeId::freq_mux3: return run_mux_frame();
            case SchemeId::anc: return run_anc_frame();
        }
        throw std::invalid_argument("run_frame: unknown scheme");
    }

    // Scheme 1: simultaneous transmission on a shared reference, ternary
    // relay decision, network mapping, DCSK rebroadcast.
    FrameOutcome run_pnc_frame() {
        if (sc_.scheme != SchemeId::pnc1)
            throw std::invalid_argument("run_pnc_frame: scenario scheme mismatch");
        FrameOutcome out = superposed_phase1();
        double d = correlate_complex(rx_c_);

        if (sc_.genie_remove_strong_isi) d -= strong_isi_term(out);

        int relay_bit;
        if (sc_.relay_detector == RelayDetector::fixed_threshold) {
            relay_bit = map_ternary(detect_ternary(d, sc_.relay_threshold_scale * eb_));
        } else {
            relay_bit = channel_aware_relay_bit(d);
        }
        out.relay_bit = relay_bit;

        broadcast_and_detect(relay_bit, out);
        return out;
    }

    // Schemes 2 and 3: interference-free separate receptions (sequential
    // slots vs orthogonal subchannels -- identical sample processing), binary
    // relay decisions, network mapping, rebroadcast.
    FrameOutcome run_mux_frame() {
        if (sc_.scheme != SchemeId::time_mux2 && sc_.scheme != SchemeId::freq_mux3)
            throw std::invalid_argument("run_mux_frame: scenario scheme mismatch");
        FrameOutcome out;
        out.sent_a = rng_.bipolar();
        out.sent_b = rng_.bipolar();

        frame_from_reference(out.sent_a, take_reference(user_stream_), frame_a_);
        real_a_ = ch_a_.draw(rng_);
        ch_a_.transmit_into(frame_a_.chips, real_a_, n0_, rng_, rx_a_);
        const int hat_a = detect_binary(correlate(rx_a_));

        frame_from_reference(out.sent_b, take_reference(stream_b_), frame_b_);
        real_b_ = ch_b_.draw(rng_);
        ch_b_.transmit_into(frame_b_.chips, real_b_, n0_, rng_, rx_b_);
        const int hat_b = detect_binary(correlate(rx_b_));

        out.relay_bit = map_network(hat_a, hat_b);
        broadcast_and_detect(out.relay_bit, out);
        return out;
    }

    // Baseline: the relay scales the received superposition to the common
    // transmit power and forwards it undecoded; the user thresholds the
    // correlator magnitude to recover the network-coded bit.
    FrameOutcome run_anc_frame() {
        if (sc_.scheme != SchemeId::anc)
            throw std::invalid_argument("run_anc_frame: scenario scheme mismatch");
        FrameOutcome out = superposed_phase1();

        for (const auto& v : rx_c_) anc_power_sum_ += std::norm(v);
        anc_chip_count_ += static_cast<double>(rx_c_.size());
        const double mean_power = anc_power_sum_ / anc_chip_count_;
        const double gain = 1.0 / std::sqrt(mean_power);  // unit per-chip transmit power

        broadcast_c_.resize(rx_c_.size());
        for (std::size_t k = 0; k < rx_c_.size(); ++k) broadcast_c_[k] = gain * rx_c_[k];

        creal_2_ = draw_complex_realization(sc_.hop2_b, rng_, sc_.coherent_superposition);
        ch_c2_.transmit_into(std::span<const std::complex<double>>(broadcast_c_), creal_2_, n0_,
                             rng_, rx_c2_);
        const double d2 = correlate_complex(rx_c2_);
        const double theta = sc_.anc_threshold_scale * gain * gain * eb_;
        const int s_decoded = (std::abs(d2) > theta) ? +1 : -1;
        out.recovered_a_at_b = demap_at_user(s_decoded, out.sent_b);
        return out;
    }

  private:
    std::span<const double> take_reference(ChaosStream& stream) {
        ref_.clear();
        stream.take_into(sc_.beta, ref_);
        return ref_;
    }

    // Phase 1 common to the superposed schemes: both users spread their bits
    // on one shared reference; the signals add in the air at one antenna with
    // a single noise process. The users are not carrier-phase locked, so each
    // path gain is complex with a uniform phase (the x_k^2 cross-user product
    // then carries a zero-mean Re(h_A conj(h_B)) factor -- the strong
    // interference this scheme suffers from).
    FrameOutcome superposed_phase1() {
        FrameOutcome out;
        out.sent_a = rng_.bipolar();
        out.sent_b = rng_.bipolar();

        const auto reference = take_reference(user_stream_);
        frame_from_reference(out.sent_a, reference, frame_a_);
        frame_from_reference(out.sent_b, reference, frame_b_);

        creal_a_ = draw_complex_realization(sc_.hop1_a, rng_, sc_.coherent_superposition);
        creal_b_ = draw_complex_realization(sc_.hop1_b, rng_, sc_.coherent_superposition);

        if (sc_.genie_remove_strong_isi) capture_delayed_reference_product();

        ch_ca_.transmit_into(std::span<const double>(frame_a_.chips), creal_a_, n0_, rng_,
                             rx_ca_);  // noise rides here
        ch_cb_.transmit_into(std::span<const double>(frame_b_.chips), creal_b_, 0.0, rng_, rx_cb_);

        rx_c_.resize(rx_ca_.size());
        for (std::size_t k = 0; k < rx_c_.size(); ++k) rx_c_[k] = rx_ca_[k] + rx_cb_[k];
        return out;
    }

    // Sum over the reference half of the two users' delayed reference
    // sequences (delay lines included), needed by the genie subtraction.
    void capture_delayed_reference_product() {
        const auto& ha = ch_ca_.history();
        const auto& hb = ch_cb_.history();
        const std::size_t ta = sc_.hop1_a.delay;
        const std::size_t tb = sc_.hop1_b.delay;
        genie_ref_sq_ = 0.0;
        genie_delayed_prod_ = 0.0;
        for (std::size_t k = 0; k < sc_.beta; ++k) {
            genie_ref_sq_ += ref_[k] * ref_[k];
            const double da = (k < ta) ? ha[k].real() : ref_[k - ta];  // user legs carry real chips
            const double db = (k < tb) ? hb[k].real() : ref_[k - tb];
            genie_delayed_prod_ += da * db;
        }
    }

    // The cross-user interference the ablation removes:
    //   (s_A + s_B) * (Re(h11A conj(h11B)) sum x^2 + Re(h12A conj(h12B)) sum xA' xB')
    double strong_isi_term(const FrameOutcome& out) const {
        const double s_sum = static_cast<double>(out.sent_a + out.sent_b);
        return s_sum * ((creal_a_.h1 * std::conj(creal_b_.h1)).real() * genie_ref_sq_ +
                        (creal_a_.h2 * std::conj(creal_b_.h2)).real() * genie_delayed_prod_);
    }

    // Min-distance decision over the four superposition hypotheses
    // (s_a, s_b), using the drawn path energies and the average chip energy;
    // hypotheses map to the network-coded bit s_a * s_b.
    int channel_aware_relay_bit(double d) const {
        const double b = static_cast<double>(sc_.beta);
        const auto usable = [&](const ComplexLinkRealization& r, std::size_t tau) {
            const double frac = (b - static_cast<double>(tau)) / b;
            return std::norm(r.h1) + std::norm(r.h2) * frac;
        };
        const double ea = usable(creal_a_, sc_.hop1_a.delay) * b;
        const double eb = usable(creal_b_, sc_.hop1_b.delay) * b;
        int best_bit = +1;
        double best_dist = std::abs(d - (ea + eb));  // hypothesis (+1, +1)
        const std::array<std::array<int, 2>, 3> rest = {{{+1, -1}, {-1, +1}, {-1, -1}}};
        for (const auto& h : rest) {
            const double mu = h[0] * ea + h[1] * eb;
            const double dist = std::abs(d - mu);
            if (dist < best_dist) {
                best_dist = dist;
                best_bit = h[0] * h[1];
            }
        }
        return best_bit;
    }

    // Phase 2: relay spreads the mapped bit on a fresh reference and
    // broadcasts; user B despreads and strips its own bit.
    void broadcast_and_detect(int relay_bit, FrameOutcome& out) {
        frame_from_reference(relay_bit, take_reference(relay_stream_), frame_r_);
        real_2_ = ch_2_.draw(rng_);
        ch_2_.transmit_into(frame_r_.chips, real_2_, n0_, rng_, rx_2_);
        const int s_decoded = detect_binary(correlate(rx_2_));
        out.recovered_a_at_b = demap_at_user(s_decoded, out.sent_b);
    }

    Scenario sc_;
    Rng rng_;
    ChaosStream user_stream_;   // shared reference in the superposed schemes
    ChaosStream stream_b_;      // user B's own stream in the multiplexed schemes
    ChaosStream relay_stream_;
    TwoRayChannel ch_a_, ch_b_, ch_2_;            // real model: multiplexed phase 1, broadcast
    ComplexTwoRayChannel ch_ca_, ch_cb_, ch_c2_;  // superposed phase 1, ANC forwarding
    double n0_ = 0.0;
    double eb_ = 0.0;

    LinkRealization real_a_, real_b_, real_2_;
    ComplexLinkRealization creal_a_, creal_b_, creal_2_;
    double genie_ref_sq_ = 0.0;
    double genie_delayed_prod_ = 0.0;
    double anc_power_sum_ = 0.0;
    double anc_chip_count_ = 0.0;

    std::vector<double> ref_;
    DcskFrame frame_a_, frame_b_, frame_r_;
    std::vector<double> rx_a_, rx_b_, rx_2_;
    std::vector<std::complex<double>> rx_ca_, rx_cb_, rx_c_, broadcast_c_, rx_c2_;
};

}  // namespace dcsk
