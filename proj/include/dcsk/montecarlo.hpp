// montecarlo.hpp - Reproducible BER sweep harness.
//
// Frames are simulated in fixed blocks of 2048; block b of grid point p runs
// on seed derive_seed(master, p, b). Blocks merge in index order and the
// stopping rule is evaluated on the cumulative counts, so the result is
// bit-identical for any worker count -- workers that ran past the stopping
// block just have their blocks discarded.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "dcsk/analysis.hpp"
#include "dcsk/schemes.hpp"

namespace dcsk {

struct StoppingRule {
    std::uint64_t min_errors = 100;
    std::uint64_t max_bits = 10'000'000;

    void validate() const {
        if (min_errors < 1) throw std::invalid_argument("StoppingRule: min_errors must be >= 1");
        if (max_bits < min_errors)
            throw std::invalid_argument("StoppingRule: max_bits must be >= min_errors");
    }
};

inline double ci95_halfwidth(std::uint64_t errors, std::uint64_t bits) noexcept {
    if (bits == 0) return 0.0;
    const double p = static_cast<double>(errors) / static_cast<double>(bits);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

// One grid point's estimate. `flagged` marks an under-sampled point: the bit
// budget ran out before min_errors accumulated (errors may be zero), so the
// value is an upper-bound-style estimate rather than a converged one.
struct BerEstimate {
    double ebn0_db = 0.0;
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    double ber = 0.0;
    double ci95 = 0.0;
    bool flagged = false;
};

namespace detail {

inline constexpr std::uint64_t kBlockFrames = 2048;

// Deterministic ordered-merge stopping loop, generic over the trial source.
// make_source(seed) must return a callable; each call simulates one trial and
// reports whether it was an error.
template <typename SourceFactory>
BerEstimate run_stopping_loop(double ebn0_db, const StoppingRule& rule,
                              std::uint64_t master_seed, std::uint64_t point_index,
                              unsigned workers, const SourceFactory& make_source) {
    rule.validate();
    const std::uint64_t n_blocks = (rule.max_bits + kBlockFrames - 1) / kBlockFrames;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));

    struct BlockCounts {
        std::uint64_t errors, bits;
    };
    std::atomic<std::uint64_t> next_block{0};
    std::atomic<std::uint64_t> stop_block{n_blocks};
    std::mutex merge_mutex;
    std::map<std::uint64_t, BlockCounts> pending;
    std::uint64_t frontier = 0;
    std::uint64_t cum_errors = 0, cum_bits = 0;
    std::uint64_t final_errors = 0, final_bits = 0;
    bool fired = false;

    auto worker_fn = [&]() {
        while (true) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= stop_block.load()) break;
            const std::uint64_t start = b * kBlockFrames;
            const std::uint64_t frames = std::min<std::uint64_t>(kBlockFrames, rule.max_bits - start);
            auto source = make_source(derive_seed(master_seed, point_index, b));
            BlockCounts counts{0, frames};
            for (std::uint64_t i = 0; i < frames; ++i) {
                if (source()) ++counts.errors;
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            pending.emplace(b, counts);
            for (auto it = pending.find(frontier); it != pending.end() && !fired;
                 it = pending.find(frontier)) {
                cum_errors += it->second.errors;
                cum_bits += it->second.bits;
                pending.erase(it);
                ++frontier;
                if (cum_errors >= rule.min_errors || cum_bits >= rule.max_bits) {
                    fired = true;
                    final_errors = cum_errors;
                    final_bits = cum_bits;
                    stop_block.store(frontier);
                }
            }
        }
    };

    if (workers <= 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
        for (auto& t : pool) t.join();
    }
    if (!fired) {
        final_errors = cum_errors;
        final_bits = cum_bits;
    }

    BerEstimate est;
    est.ebn0_db = ebn0_db;
    est.errors = final_errors;
    est.bits = final_bits;
    est.ber = final_bits ? static_cast<double>(final_errors) / static_cast<double>(final_bits) : 0.0;
    est.ci95 = ci95_halfwidth(final_errors, final_bits);
    est.flagged = final_errors < rule.min_errors;
    return est;
}

}  // namespace detail

// Simulate frames at one Eb/N0 until the stopping rule fires, counting errors
// of the recovered end-to-end bit (or of the relay's network-coded bit when
// the scenario selects that metric).
inline BerEstimate estimate_point(const Scenario& scenario, double ebn0_db,
                                  const StoppingRule& rule, std::uint64_t master_seed,
                                  unsigned workers = 0, std::uint64_t point_index = 0) {
    Scenario point = scenario;
    point.ebn0_db = ebn0_db;
    point.validate();
    const auto make_source = [point](std::uint64_t seed) {
        return [runner = SchemeRunner(point, seed), metric = point.metric]() mutable {
            const FrameOutcome f = runner.run_frame();
            if (metric == ErrorMetric::relay_network_bit)
                return f.relay_bit != map_network(f.sent_a, f.sent_b);
            return f.recovered_a_at_b != f.sent_a;
        };
    };
    return detail::run_stopping_loop(ebn0_db, rule, master_seed, point_index, workers, make_source);
}

// --- Sweeps -------------------------------------------------------------------

struct MetricPoint {
    BerEstimate estimate;
    std::optional<double> ber_analytic;                   // multiplexed schemes only
    double throughput_sim = 0.0;                          // from simulated BER and T_n
    std::optional<double> throughput_analytic;
    std::optional<double> spectral_efficiency_sim;        // multiplexed schemes only
    std::optional<double> spectral_efficiency_analytic;
};

struct MetricSeries {
    SchemeId scheme = SchemeId::time_mux2;
    std::size_t beta = 0;
    std::vector<MetricPoint> points;
};

// Fading-averaged analytic BER of one hop; non-fading links collapse to the
// AWGN-style conditional expression at the deterministic gain.
inline double link_analytic_ber(const TwoRayLink& link, double ebn0, std::size_t beta,
                                bool include_isi_term = false) {
    link.validate();
    if (!link.fading) {
        if (include_isi_term)
            return instantaneous_ber_full(link.avg_gain_1, link.avg_gain_2, ebn0, beta);
        return instantaneous_ber(ebn0 * (link.avg_gain_1 + link.avg_gain_2), beta);
    }
    if (include_isi_term)
        return average_ber_full(ebn0, link.avg_gain_1, link.avg_gain_2, beta, true);
    return average_ber(SnrPoint{ebn0 * link.avg_gain_1, ebn0 * link.avg_gain_2, beta});
}

inline double scenario_analytic_ber(const Scenario& sc, double ebn0_db,
                                    bool include_isi_term = false) {
    const double ebn0 = db_to_linear(ebn0_db);
    LinkBerTriple t;
    t.ber_1a = link_analytic_ber(sc.hop1_a, ebn0, sc.beta, include_isi_term);
    t.ber_1b = link_analytic_ber(sc.hop1_b, ebn0, sc.beta, include_isi_term);
    t.ber_2b = link_analytic_ber(sc.hop2_b, ebn0, sc.beta, include_isi_term);
    return end_to_end_ber(t);
}

// One BerEstimate per grid point plus co-computed analytics where defined.
inline MetricSeries sweep(const Scenario& scenario, const std::vector<double>& ebn0_grid_db,
                          const StoppingRule& rule, std::uint64_t master_seed,
                          unsigned workers = 0, bool include_isi_term = false) {
    if (ebn0_grid_db.empty()) throw std::invalid_argument("sweep: grid must be non-empty");
    for (std::size_t i = 1; i < ebn0_grid_db.size(); ++i) {
        if (!(ebn0_grid_db[i] > ebn0_grid_db[i - 1]))
            throw std::invalid_argument("sweep: grid must be strictly ascending");
    }
    const bool multiplexed =
        scenario.scheme == SchemeId::time_mux2 || scenario.scheme == SchemeId::freq_mux3;
    const double t_n = slot_and_bandwidth(scenario.scheme, scenario.beta).t_n;

    MetricSeries series;
    series.scheme = scenario.scheme;
    series.beta = scenario.beta;
    series.points.reserve(ebn0_grid_db.size());
    for (std::size_t i = 0; i < ebn0_grid_db.size(); ++i) {
        MetricPoint p;
        p.estimate = estimate_point(scenario, ebn0_grid_db[i], rule, master_seed, workers, i);
        p.throughput_sim = throughput(p.estimate.ber, t_n);
        if (multiplexed) {
            const double analytic = scenario_analytic_ber(scenario, ebn0_grid_db[i], include_isi_term);
            p.ber_analytic = analytic;
            p.throughput_analytic = throughput(analytic, t_n);
            p.spectral_efficiency_sim = spectral_efficiency(scenario.scheme, p.estimate.ber, scenario.beta);
            p.spectral_efficiency_analytic = spectral_efficiency(scenario.scheme, analytic, scenario.beta);
        }
        series.points.push_back(std::move(p));
    }
    return series;
}

}  // namespace dcsk
