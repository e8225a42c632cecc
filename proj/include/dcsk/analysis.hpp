// analysis.hpp - Closed-form performance engine: instantaneous and
// fading-averaged link BER, end-to-end composition, the AWGN special cases,
// and the throughput / link spectral efficiency constants.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "dcsk/quadrature.hpp"
#include "dcsk/special_functions.hpp"

namespace dcsk {

enum class SchemeId { pnc1, time_mux2, freq_mux3, anc };

inline std::string to_string(SchemeId s) {
    switch (s) {
        case SchemeId::pnc1: return "pnc1";
        case SchemeId::time_mux2: return "time_mux2";
        case SchemeId::freq_mux3: return "freq_mux3";
        case SchemeId::anc: return "anc";
    }
    return "?";
}

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) noexcept { return 10.0 * std::log10(lin); }

// Average per-path SNRs of one hop: gamma_bar_i = (Eb/N0) * E[lambda_i^2].
struct SnrPoint {
    double gamma_bar_1 = 0.0;
    double gamma_bar_2 = 0.0;
    std::size_t beta = 0;

    void validate() const {
        if (gamma_bar_1 < 0.0 || gamma_bar_2 < 0.0 || (gamma_bar_1 == 0.0 && gamma_bar_2 == 0.0))
            throw std::domain_error("SnrPoint: needs at least one positive average SNR");
        if (beta == 0) throw std::domain_error("SnrPoint: beta must be >= 1");
    }
};

struct LinkBerTriple {
    double ber_1a = 0.0;  // user A -> relay, phase 1
    double ber_1b = 0.0;  // user B -> relay, phase 1
    double ber_2b = 0.0;  // relay -> user B, phase 2
};

// Conditional link BER at instantaneous SNR gamma:
//   0.5 * erfc( (4/gamma + 2*beta/gamma^2)^(-1/2) )
inline double instantaneous_ber(double gamma, std::size_t beta) {
    if (!(gamma > 0.0)) throw std::domain_error("instantaneous_ber: gamma must be > 0");
    const double inv_sq = 4.0 / gamma + 2.0 * static_cast<double>(beta) / (gamma * gamma);
    return 0.5 * erfc(1.0 / std::sqrt(inv_sq));
}

// Conditional link BER keeping the intra-symbol multipath cross-product
// variance (the term the standard chain neglects): path energies u, v and
// bit energy e_b = 2*beta enter explicitly.
inline double instantaneous_ber_full(double u, double v, double ebn0, std::size_t beta) {
    if (!(ebn0 > 0.0)) throw std::domain_error("instantaneous_ber_full: ebn0 must be > 0");
    const double g = (u + v) * ebn0;
    if (!(g > 0.0)) return 0.5;
    const double e_b = 2.0 * static_cast<double>(beta);
    const double isi = 16.0 * u * v / ((u + v) * (u + v) * e_b);
    const double inv_sq = isi + 4.0 / g + 2.0 * static_cast<double>(beta) / (g * g);
    return 0.5 * erfc(1.0 / std::sqrt(inv_sq));
}

// Density of the combined two-path SNR. Distinct average branch SNRs use the
// hypoexponential form; once they agree to better than 1e-9 relative it
// switches to the gamma-like identical-branch form to dodge cancellation.
inline double snr_pdf(double gamma, const SnrPoint& point) {
    point.validate();
    if (gamma < 0.0) return 0.0;
    const double g1 = point.gamma_bar_1;
    const double g2 = point.gamma_bar_2;
    const double hi = std::max(g1, g2);
    const double lo = std::min(g1, g2);
    if (lo == 0.0) return std::exp(-gamma / hi) / hi;  // single-path limit
    if ((hi - lo) / hi < 1e-9) {
        return gamma / (g1 * g1) * std::exp(-gamma / g1);
    }
    return (std::exp(-gamma / g1) - std::exp(-gamma / g2)) / (g1 - g2);
}

// Fading-averaged link BER: integral of the conditional BER against the SNR
// density, truncated where the exponential tail is negligible.
inline double average_ber(const SnrPoint& point) {
    point.validate();
    const double gmax = 50.0 * std::max(point.gamma_bar_1, point.gamma_bar_2);
    const auto integrand = [&point](double g) {
        if (g <= 0.0) return 0.5 * snr_pdf(0.0, point);
        return instantaneous_ber(g, point.beta) * snr_pdf(g, point);
    };
    return integrate(integrand, 0.0, gmax, 1e-9);
}

// Fading-averaged link BER from the fuller conditional form; 2-D quadrature
// over the exponential path-energy densities. mean_gain_i = E[lambda_i^2].
inline double average_ber_full(double ebn0, double mean_gain_1, double mean_gain_2,
                               std::size_t beta, bool include_isi_term = true) {
    if (!(ebn0 > 0.0)) throw std::domain_error("average_ber_full: ebn0 must be > 0");
    if (mean_gain_2 == 0.0 || mean_gain_1 == 0.0) {
        // Single active path: no cross product, fall back to the 1-D chain.
        return average_ber(SnrPoint{ebn0 * mean_gain_1, ebn0 * mean_gain_2, beta});
    }
    if (!include_isi_term) return average_ber(SnrPoint{ebn0 * mean_gain_1, ebn0 * mean_gain_2, beta});
    const double m1 = mean_gain_1;
    const double m2 = mean_gain_2;
    const auto outer = [&](double u) {
        const auto inner = [&](double v) {
            return instantaneous_ber_full(u, v, ebn0, beta) * std::exp(-v / m2) / m2;
        };
        return integrate(inner, 0.0, 50.0 * m2, 1e-7) * std::exp(-u / m1) / m1;
    };
    return integrate(outer, 0.0, 50.0 * m1, 1e-6);
}

// The AWGN substitution (lambda_1 = 1, lambda_2 = 0). ebn0 is linear.
inline double awgn_ber(double ebn0, std::size_t beta) {
    if (!(ebn0 > 0.0)) throw std::domain_error("awgn_ber: ebn0 must be > 0");
    return instantaneous_ber(ebn0, beta);
}

// Error probability of the relay's network-coded bit given the two phase-1
// link error rates.
inline double relay_ber(double ber_a, double ber_b) noexcept {
    return ber_a * (1.0 - ber_b) + ber_b * (1.0 - ber_a);
}

// Three-link composition; algebraically equal to relay_ber(relay_ber(a,b),c).
inline double end_to_end_ber(const LinkBerTriple& t) noexcept {
    const double a = t.ber_1a, b = t.ber_1b, c = t.ber_2b;
    return a + b + c - 2.0 * a * b - 2.0 * a * c - 2.0 * b * c + 4.0 * a * b * c;
}

// Low/high interference-zone special cases: links on the low-interference
// side degenerate to the AWGN expression, the rest stay fading-averaged.
enum class LowInterferenceZone { user_a, user_b, both };

inline double special_case_ber(LowInterferenceZone zone, double ebn0, std::size_t beta,
                               const SnrPoint& hop1_a, const SnrPoint& hop1_b,
                               const SnrPoint& hop2_b) {
    const double awgn = awgn_ber(ebn0, beta);
    LinkBerTriple t;
    switch (zone) {
        case LowInterferenceZone::user_a:
            t.ber_1a = awgn;
            t.ber_1b = average_ber(hop1_b);
            t.ber_2b = average_ber(hop2_b);
            break;
        case LowInterferenceZone::user_b:
            t.ber_1a = average_ber(hop1_a);
            t.ber_1b = awgn;
            t.ber_2b = awgn;
            break;
        case LowInterferenceZone::both:
            t.ber_1a = t.ber_1b = t.ber_2b = awgn;
            break;
    }
    return end_to_end_ber(t);
}

// Correct bits delivered per unit time, binary constellation.
inline double throughput(double ber, double t_n) {
    if (!(t_n > 0.0)) throw std::domain_error("throughput: t_n must be > 0");
    return (1.0 - ber) / t_n;
}

// Link spectral efficiency; defined for the multiplexed schemes only.
inline double spectral_efficiency(SchemeId scheme, double ber, std::size_t beta) {
    const double b = static_cast<double>(beta);
    switch (scheme) {
        case SchemeId::freq_mux3: return (1.0 - ber) / (8.0 * b);
        case SchemeId::time_mux2: return (1.0 - ber) / (6.0 * b);
        default:
            throw std::invalid_argument("spectral_efficiency: defined for the multiplexed schemes only");
    }
}

}  // namespace dcsk
