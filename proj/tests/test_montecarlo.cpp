#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dcsk/montecarlo.hpp"

using namespace dcsk;

namespace {

Scenario table_beta25(SchemeId scheme) {
    Scenario sc;
    sc.scheme = scheme;
    sc.beta = 25;
    sc.hop1_a = {0.7, 0.89, 3, true};
    sc.hop1_b = {0.82, 0.4, 8, true};
    sc.hop2_b = {0.83, 0.35, 5, true};
    return sc;
}

Scenario light_scenario() {
    Scenario sc;
    sc.scheme = SchemeId::time_mux2;
    sc.beta = 16;
    sc.hop1_a = {0.8, 0.3, 1, true};
    sc.hop1_b = {0.7, 0.4, 2, true};
    sc.hop2_b = {0.9, 0.2, 1, true};
    return sc;
}

}  // namespace

TEST_CASE("estimates are independent of the worker count", "[montecarlo]") {
    const Scenario sc = light_scenario();
    const StoppingRule rule{200, 100'000};
    const auto a = estimate_point(sc, 10.0, rule, 777, 1, 3);
    const auto b = estimate_point(sc, 10.0, rule, 777, 4, 3);
    CHECK(a.errors == b.errors);
    CHECK(a.bits == b.bits);
    CHECK(a.ber == b.ber);
    CHECK(a.ci95 == b.ci95);
    CHECK(a.flagged == b.flagged);

    const std::vector<double> grid{0.0, 5.0, 10.0};
    const auto s1 = sweep(sc, grid, rule, 777, 1);
    const auto s4 = sweep(sc, grid, rule, 777, 4);
    REQUIRE(s1.points.size() == s4.points.size());
    for (std::size_t i = 0; i < s1.points.size(); ++i) {
        CHECK(s1.points[i].estimate.errors == s4.points[i].estimate.errors);
        CHECK(s1.points[i].estimate.bits == s4.points[i].estimate.bits);
        CHECK(s1.points[i].throughput_sim == s4.points[i].throughput_sim);
    }
}

TEST_CASE("noiseless scenario reports zero errors and flags itself", "[montecarlo]") {
    Scenario sc = light_scenario();
    sc.hop1_a = sc.hop1_b = sc.hop2_b = {1.0, 0.0, 0, false};
    const StoppingRule rule{100, 4096};
    const auto est = estimate_point(sc, 300.0, rule, 5, 2, 0);
    CHECK(est.errors == 0);
    CHECK(est.ber == 0.0);
    CHECK(est.bits == 4096);
    CHECK(est.flagged);
}

TEST_CASE("bit budget is honored exactly", "[montecarlo]") {
    const Scenario sc = light_scenario();
    const StoppingRule rule{1000, 1000};  // cap fires first, mid-block
    const auto est = estimate_point(sc, 0.0, rule, 9, 2, 0);
    CHECK(est.bits == 1000);
    CHECK(est.flagged);
}

TEST_CASE("schemes 2 and 3 produce identical estimates under a shared seed", "[montecarlo]") {
    Scenario s2 = table_beta25(SchemeId::time_mux2);
    Scenario s3 = table_beta25(SchemeId::freq_mux3);
    const StoppingRule rule{100, 50'000};
    const auto a = estimate_point(s2, 12.0, rule, 2024, 2, 0);
    const auto b = estimate_point(s3, 12.0, rule, 2024, 2, 0);
    CHECK(a.errors == b.errors);
    CHECK(a.bits == b.bits);
    CHECK(a.ber == b.ber);
}

TEST_CASE("simulated ber is monotone in ebn0 within confidence widths", "[montecarlo]") {
    const Scenario sc = light_scenario();
    const StoppingRule rule{100, 50'000};
    const auto series = sweep(sc, {0.0, 5.0, 10.0, 15.0, 20.0}, rule, 31, 2);
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        const auto& prev = series.points[i - 1].estimate;
        const auto& cur = series.points[i].estimate;
        CHECK(cur.ber <= prev.ber + prev.ci95 + cur.ci95);
    }
}

TEST_CASE("confidence intervals cover a known coin", "[montecarlo]") {
    const double p = 0.01;
    const StoppingRule rule{100, 10'000'000};
    int covered = 0;
    constexpr int reps = 500;
    for (int rep = 0; rep < reps; ++rep) {
        const auto make_source = [p](std::uint64_t seed) {
            return [rng = Rng(seed), p]() mutable { return rng.uniform01() < p; };
        };
        const auto est =
            detail::run_stopping_loop(0.0, rule, 1000 + rep, 0, 1, make_source);
        if (std::abs(est.ber - p) <= est.ci95) ++covered;
    }
    CHECK(covered >= static_cast<int>(0.93 * reps));
}

TEST_CASE("seed derivation chain is frozen", "[montecarlo]") {
    // artifacts promise reproducibility across versions; these values pin the
    // documented splitmix64 chain
    CHECK(derive_seed(42, 0, 0) == 0x6310bf04d8207f46ull);
    CHECK(derive_seed(42, 3, 17) == 0x9e5fc771d786b599ull);
    CHECK(derive_seed(0xDEADBEEF, 5, 2) == 0x7a44ce40178759feull);
    CHECK(derive_seed(42, 0, 0) != derive_seed(42, 0, 1));
    CHECK(derive_seed(42, 0, 1) != derive_seed(42, 1, 0));
}

TEST_CASE("ci95 halfwidth formula", "[montecarlo]") {
    const double hw = ci95_halfwidth(100, 10'000);
    CHECK(hw == Catch::Approx(1.96 * std::sqrt(0.01 * 0.99 / 10'000.0)).epsilon(1e-12));
    CHECK(ci95_halfwidth(0, 0) == 0.0);
}

TEST_CASE("one table point agrees with the analytical chain", "[montecarlo]") {
    const Scenario sc = table_beta25(SchemeId::time_mux2);
    const StoppingRule rule{100, 2'000'000};
    const auto est = estimate_point(sc, 15.0, rule, 42, 2, 0);
    const double ana = scenario_analytic_ber(sc, 15.0);
    CHECK(std::abs(est.ber - ana) <= 3.0 * est.ci95);
}

TEST_CASE("interference-zone special case matches its simulated scenario", "[montecarlo]") {
    // user B low interference: its links are unit-gain AWGN; user A fades
    Scenario sc = table_beta25(SchemeId::time_mux2);
    sc.hop1_b = {1.0, 0.0, 0, false};
    sc.hop2_b = {1.0, 0.0, 0, false};
    const StoppingRule rule{100, 2'000'000};
    const auto est = estimate_point(sc, 15.0, rule, 11, 2, 0);

    const double ebn0 = db_to_linear(15.0);
    const double ana = special_case_ber(LowInterferenceZone::user_b, ebn0, sc.beta,
                                        SnrPoint{ebn0 * 0.7, ebn0 * 0.89, sc.beta},
                                        SnrPoint{1.0, 1.0, sc.beta}, SnrPoint{1.0, 1.0, sc.beta});
    CHECK(std::abs(est.ber - ana) <= 3.0 * est.ci95);
}

TEST_CASE("sweep input validation", "[montecarlo]") {
    const Scenario sc = light_scenario();
    const StoppingRule rule{100, 10'000};
    CHECK_THROWS_AS(sweep(sc, {}, rule, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep(sc, {5.0, 5.0}, rule, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep(sc, {10.0, 5.0}, rule, 1, 1), std::invalid_argument);
    StoppingRule bad{0, 10};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    StoppingRule bad2{100, 50};
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("multiplexed sweeps carry analytics and efficiency columns", "[montecarlo]") {
    const Scenario sc = light_scenario();
    const StoppingRule rule{50, 20'000};
    const auto series = sweep(sc, {5.0, 10.0}, rule, 7, 2);
    for (const auto& p : series.points) {
        REQUIRE(p.ber_analytic.has_value());
        REQUIRE(p.throughput_analytic.has_value());
        REQUIRE(p.spectral_efficiency_sim.has_value());
    }
    Scenario pnc = table_beta25(SchemeId::pnc1);
    const auto ps = sweep(pnc, {5.0}, rule, 7, 2);
    CHECK(!ps.points[0].ber_analytic.has_value());
    CHECK(!ps.points[0].spectral_efficiency_sim.has_value());
    CHECK(ps.points[0].throughput_sim > 0.0);
}
