// modem.hpp - DCSK modulation and correlator detection.
//
// A frame carries one bit as 2*beta chips: beta reference chips followed by
// the same chips multiplied by the bit. Detection correlates the two halves;
// no channel knowledge is needed.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dcsk/chaos.hpp"

namespace dcsk {

// Correlator output; sign (binary) or magnitude level (ternary) carries the
// decision.
using DecisionStatistic = double;

struct DcskFrame {
    std::size_t beta = 0;
    std::vector<double> chips;  // length 2*beta: [reference | bit * reference]

    std::span<const double> reference() const { return {chips.data(), beta}; }
    std::span<const double> data_half() const { return {chips.data() + beta, beta}; }
};

// Build a frame from an explicit reference window.
inline void frame_from_reference(int bit, std::span<const double> reference, DcskFrame& out) {
    if (bit != 1 && bit != -1) throw std::invalid_argument("modulate: bit must be +1 or -1");
    const std::size_t beta = reference.size();
    if (beta == 0) throw std::invalid_argument("modulate: beta must be >= 1");
    out.beta = beta;
    out.chips.resize(2 * beta);
    const double s = static_cast<double>(bit);
    for (std::size_t k = 0; k < beta; ++k) {
        out.chips[k] = reference[k];
        out.chips[beta + k] = s * reference[k];
    }
}

inline DcskFrame frame_from_reference(int bit, std::span<const double> reference) {
    DcskFrame f;
    frame_from_reference(bit, reference, f);
    return f;
}

// Draw beta fresh chips from the stream as the reference and spread the bit.
inline DcskFrame modulate(int bit, ChaosStream& stream, std::size_t beta) {
    if (beta == 0) throw std::invalid_argument("modulate: beta must be >= 1");
    return frame_from_reference(bit, stream.take(beta));
}

// Sum over a half bit duration of received[k] * received[k + beta].
inline DecisionStatistic correlate(std::span<const double> received) {
    if (received.size() < 2 || received.size() % 2 != 0)
        throw std::invalid_argument("correlate: input length must be 2*beta");
    const std::size_t beta = received.size() / 2;
    double acc = 0.0;
    for (std::size_t k = 0; k < beta; ++k) acc += received[k] * received[k + beta];
    return acc;
}

// Sign detector; tie at exactly zero resolves to +1.
inline int detect_binary(DecisionStatistic d) noexcept { return d >= 0.0 ? +1 : -1; }

// Three-level detector for superposed receptions: {+2, 0, -2}.
inline int detect_ternary(DecisionStatistic d, double threshold) {
    if (!(threshold > 0.0)) throw std::domain_error("detect_ternary: threshold must be > 0");
    if (d > threshold) return +2;
    if (d < -threshold) return -2;
    return 0;
}

}  // namespace dcsk
