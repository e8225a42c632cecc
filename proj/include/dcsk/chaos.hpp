// chaos.hpp - Second-order Chebyshev chaotic sequence generator.
//
// The raw map x' = 1 - 2x^2 on (-1, 1) has the arcsine invariant density with
// zero mean and second moment 1/2; emitted samples are scaled by sqrt(2) so
// the spreading chips have unit variance.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dcsk/rng.hpp"

namespace dcsk {

class ChaosStream {
  public:
    // Unit-variance normalization of the raw map output.
    static constexpr double kScale = std::numbers::sqrt2;

    // One application of the Chebyshev map. Total on [-1, 1].
    static constexpr double step(double state) noexcept { return 1.0 - 2.0 * state * state; }

    // States whose orbits collapse onto fixed points: 0.5 is fixed, -1 is
    // fixed, and 0, 1, -0.5 reach them in at most two steps.
    static constexpr bool is_degenerate(double state) noexcept {
        return state == 0.0 || state == 0.5 || state == -0.5 || state == 1.0 || state == -1.0;
    }

    explicit ChaosStream(double raw_state) : state_(raw_state) {
        if (!(raw_state > -1.0 && raw_state < 1.0) || is_degenerate(raw_state))
            throw std::invalid_argument("ChaosStream: degenerate or out-of-range seed state");
    }

    // Draw a valid initial state uniformly on (-1, 1), rejecting the
    // measure-zero degenerate set.
    static ChaosStream seeded(Rng& rng) {
        double s;
        do {
            s = rng.uniform_open();
        } while (s <= -1.0 || is_degenerate(s));
        return ChaosStream(s);
    }

    // Advance one step and return the normalized sample.
    double next() noexcept {
        state_ = step(state_);
        return kScale * state_;
    }

    // Advance n steps, appending normalized samples to out.
    void take_into(std::size_t n, std::vector<double>& out) {
        out.reserve(out.size() + n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(next());
    }

    std::vector<double> take(std::size_t n) {
        std::vector<double> out;
        take_into(n, out);
        return out;
    }

    double raw_state() const noexcept { return state_; }

  private:
    double state_;
};

}  // namespace dcsk
