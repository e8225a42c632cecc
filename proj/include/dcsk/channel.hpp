// channel.hpp - Two-ray Rayleigh fading with integer chip delay and AWGN.
//
// Coefficients are redrawn per frame and held static across it. The delayed
// ray is fed from a persistent delay line, so the last tau chips of one frame
// leak into the next (the small inter-frame ISI a large spreading factor
// makes negligible, but physically present).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dcsk/rng.hpp"

namespace dcsk {

// Statistical description of one hop. avg_gain_* are the average path power
// gains E[lambda^2]; with fading=false the amplitudes are pinned at
// sqrt(avg_gain) (AWGN-style deterministic link).
struct TwoRayLink {
    double avg_gain_1 = 1.0;
    double avg_gain_2 = 0.0;
    std::size_t delay = 0;
    bool fading = true;

    void validate() const {
        if (avg_gain_1 < 0.0 || avg_gain_2 < 0.0)
            throw std::invalid_argument("TwoRayLink: average path gains must be >= 0");
        if (avg_gain_1 + avg_gain_2 <= 0.0)
            throw std::invalid_argument("TwoRayLink: at least one path gain must be > 0");
    }
};

// One frame's drawn amplitudes; constant over the frame.
struct LinkRealization {
    double lambda_1 = 0.0;
    double lambda_2 = 0.0;
    std::size_t delay = 0;
};

// Rayleigh density (lambda / sigma^2) exp(-lambda^2 / 2 sigma^2), zero for
// negative lambda.
inline double rayleigh_pdf(double lam, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("rayleigh_pdf: sigma must be > 0");
    if (lam < 0.0) return 0.0;
    const double s2 = sigma * sigma;
    return (lam / s2) * std::exp(-(lam * lam) / (2.0 * s2));
}

// lambda_i = sigma_i * sqrt(u^2 + v^2) with u, v standard normal and
// sigma_i = sqrt(avg_gain_i / 2), so E[lambda_i^2] = avg_gain_i.
inline LinkRealization draw_realization(const TwoRayLink& link, Rng& rng) {
    link.validate();
    LinkRealization r;
    r.delay = link.delay;
    if (!link.fading) {
        r.lambda_1 = std::sqrt(link.avg_gain_1);
        r.lambda_2 = std::sqrt(link.avg_gain_2);
        return r;
    }
    auto draw = [&rng](double avg_gain) {
        if (avg_gain == 0.0) return 0.0;
        const double sigma = std::sqrt(avg_gain / 2.0);
        const double u = rng.normal();
        const double v = rng.normal();
        return sigma * std::sqrt(u * u + v * v);
    };
    r.lambda_1 = draw(link.avg_gain_1);
    r.lambda_2 = draw(link.avg_gain_2);
    return r;
}

// Elementwise sum of two receptions arriving at one antenna. Exactly one of
// the summands may carry the (single) noise contribution.
inline std::vector<double> superpose(std::span<const double> rx_a, std::span<const double> rx_b) {
    if (rx_a.size() != rx_b.size())
        throw std::invalid_argument("superpose: length mismatch");
    std::vector<double> out(rx_a.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = rx_a[k] + rx_b[k];
    return out;
}

// One hop with persistent delay-line state. Movable between threads; one
// instance per worker.
class TwoRayChannel {
  public:
    explicit TwoRayChannel(TwoRayLink link) : link_(link), hist_(link.delay, 0.0) {
        link_.validate();
    }

    const TwoRayLink& link() const noexcept { return link_; }

    LinkRealization draw(Rng& rng) { return draw_realization(link_, rng); }

    // Last `delay` input chips from prior traffic, oldest first. These are
    // exactly the chips the delayed ray replays at the head of the next frame.
    const std::vector<double>& history() const noexcept { return hist_; }

    void reset_history() { hist_.assign(link_.delay, 0.0); }

    // out[k] = l1 * chips[k] + l2 * delayed[k - tau] + n[k],
    // n ~ Gaussian(0, n0/2). Advances the delay line.
    void transmit_into(std::span<const double> chips, const LinkRealization& realization,
                       double n0, Rng& rng, std::vector<double>& out) {
        const std::size_t n = chips.size();
        const std::size_t tau = realization.delay;
        if (tau != link_.delay)
            throw std::invalid_argument("transmit: realization delay does not match link");
        if (tau != 0 && tau >= n / 4)
            throw std::invalid_argument("transmit: delay must be < length/4");
        const double l1 = realization.lambda_1;
        const double l2 = realization.lambda_2;
        out.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double delayed = (k < tau) ? hist_[k] : chips[k - tau];
            out[k] = l1 * chips[k] + l2 * delayed;
        }
        if (n0 > 0.0) {
            const double sd = std::sqrt(n0 / 2.0);
            for (std::size_t k = 0; k < n; ++k) out[k] += sd * rng.normal();
        }
        if (tau > 0) {
            for (std::size_t k = 0; k < tau; ++k) hist_[k] = chips[n - tau + k];
        }
    }

    std::vector<double> transmit(std::span<const double> chips, const LinkRealization& realization,
                                 double n0, Rng& rng) {
        std::vector<double> out;
        transmit_into(chips, realization, n0, rng, out);
        return out;
    }

  private:
    TwoRayLink link_;
    std::vector<double> hist_;
};

// --- Complex-baseband variant -------------------------------------------------
//
// Users that superpose on the air are not carrier-phase locked, so each path
// arrives with a uniform random phase: gain h = lambda * e^{j phi}, |h|
// Rayleigh with E[|h|^2] = avg_gain exactly as in the real model. Single-user
// hops keep the real model (a lone DCSK link is phase-insensitive); only the
// superposed schemes use this variant.

struct ComplexLinkRealization {
    std::complex<double> h1{0.0, 0.0};
    std::complex<double> h2{0.0, 0.0};
    std::size_t delay = 0;
};

// h_i = sqrt(avg_gain_i / 2) * (u + j v), u, v standard normal.
// pin_phase forces phi = 0 (coherent superposition diagnostics); the modulus
// keeps the Rayleigh draw either way.
inline ComplexLinkRealization draw_complex_realization(const TwoRayLink& link, Rng& rng,
                                                       bool pin_phase = false) {
    link.validate();
    ComplexLinkRealization r;
    r.delay = link.delay;
    auto draw = [&](double avg_gain) -> std::complex<double> {
        if (avg_gain == 0.0) return {0.0, 0.0};
        if (!link.fading) return {std::sqrt(avg_gain), 0.0};
        const double sigma = std::sqrt(avg_gain / 2.0);
        const double u = sigma * rng.normal();
        const double v = sigma * rng.normal();
        if (pin_phase) return {std::hypot(u, v), 0.0};
        return {u, v};
    };
    r.h1 = draw(link.avg_gain_1);
    r.h2 = draw(link.avg_gain_2);
    return r;
}

class ComplexTwoRayChannel {
  public:
    explicit ComplexTwoRayChannel(TwoRayLink link) : link_(link), hist_(link.delay, {0.0, 0.0}) {
        link_.validate();
    }

    const TwoRayLink& link() const noexcept { return link_; }

    const std::vector<std::complex<double>>& history() const noexcept { return hist_; }

    void reset_history() { hist_.assign(link_.delay, {0.0, 0.0}); }

    // Complex AWGN has variance n0/2 per quadrature. Input may be the real
    // chip stream of a user or an already-complex forwarded signal.
    template <typename Sample>
    void transmit_into(std::span<const Sample> chips, const ComplexLinkRealization& realization,
                       double n0, Rng& rng, std::vector<std::complex<double>>& out) {
        const std::size_t n = chips.size();
        const std::size_t tau = realization.delay;
        if (tau != link_.delay)
            throw std::invalid_argument("transmit: realization delay does not match link");
        if (tau != 0 && tau >= n / 4)
            throw std::invalid_argument("transmit: delay must be < length/4");
        out.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::complex<double> delayed =
                (k < tau) ? hist_[k] : std::complex<double>(chips[k - tau]);
            out[k] = realization.h1 * std::complex<double>(chips[k]) + realization.h2 * delayed;
        }
        if (n0 > 0.0) {
            const double sd = std::sqrt(n0 / 2.0);
            for (std::size_t k = 0; k < n; ++k)
                out[k] += std::complex<double>(sd * rng.normal(), sd * rng.normal());
        }
        if (tau > 0) {
            for (std::size_t k = 0; k < tau; ++k) hist_[k] = std::complex<double>(chips[n - tau + k]);
        }
    }

  private:
    TwoRayLink link_;
    std::vector<std::complex<double>> hist_;
};

// Correlator on a complex reception: Re sum r_k * conj(r_{k+beta}).
inline double correlate_complex(std::span<const std::complex<double>> received) {
    if (received.size() < 2 || received.size() % 2 != 0)
        throw std::invalid_argument("correlate: input length must be 2*beta");
    const std::size_t beta = received.size() / 2;
    double acc = 0.0;
    for (std::size_t k = 0; k < beta; ++k)
        acc += (received[k] * std::conj(received[k + beta])).real();
    return acc;
}

}  // namespace dcsk
