#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dcsk/chaos.hpp"

using namespace dcsk;

TEST_CASE("chebyshev map fixed points and direct evaluation", "[chaos]") {
    CHECK(ChaosStream::step(0.5) == 0.5);
    CHECK(ChaosStream::step(-1.0) == -1.0);
    CHECK(ChaosStream::step(0.3) == Catch::Approx(0.82).margin(1e-15));
}

TEST_CASE("degenerate seeds are rejected", "[chaos]") {
    for (double bad : {0.0, 0.5, -0.5, 1.0, -1.0, 1.5, -2.0}) {
        CHECK_THROWS_AS(ChaosStream(bad), std::invalid_argument);
    }
    CHECK_NOTHROW(ChaosStream(0.3));
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        ChaosStream s = ChaosStream::seeded(rng);
        CHECK(!ChaosStream::is_degenerate(s.raw_state()));
    }
}

TEST_CASE("take returns scaled iterates and advances state", "[chaos]") {
    ChaosStream s(0.3);
    const auto out = s.take(2);
    const double x1 = ChaosStream::step(0.3);  // 0.82
    const double x2 = ChaosStream::step(x1);
    CHECK(x1 == Catch::Approx(0.82).margin(1e-14));
    CHECK(out[0] == ChaosStream::kScale * x1);
    CHECK(out[1] == ChaosStream::kScale * x2);

    // two consecutive windows == one double window from a twin stream
    ChaosStream a(0.3), b(0.3);
    auto w1 = a.take(16);
    auto w2 = a.take(16);
    auto w = b.take(32);
    w1.insert(w1.end(), w2.begin(), w2.end());
    CHECK(w1 == w);
}

TEST_CASE("identical seeds give bit-identical sequences", "[chaos]") {
    Rng r1(99), r2(99);
    ChaosStream a = ChaosStream::seeded(r1);
    ChaosStream b = ChaosStream::seeded(r2);
    CHECK(a.take(1000) == b.take(1000));
}

TEST_CASE("long-run statistics of the normalized stream", "[chaos]") {
    constexpr std::size_t n = 1'000'000;
    Rng rng(2024);
    ChaosStream s = ChaosStream::seeded(rng);
    std::vector<double> x;
    x.reserve(n);
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = s.next();
        REQUIRE(std::abs(s.raw_state()) <= 1.0);  // no numeric escape
        CHECK(std::abs(v) <= ChaosStream::kScale);
        x.push_back(v);
        mean += v;
        second += v * v;
    }
    mean /= n;
    second /= n;
    CHECK(mean > -0.01);
    CHECK(mean < 0.01);
    CHECK(second > 0.99);
    CHECK(second < 1.01);

    // sample autocorrelation at lags 1..20 supports the vanishing cross-term
    // assumption
    for (std::size_t lag = 1; lag <= 20; ++lag) {
        double acc = 0.0;
        for (std::size_t k = 0; k + lag < n; ++k) acc += x[k] * x[k + lag];
        const double rho = (acc / (n - lag)) / second;
        INFO("lag " << lag);
        CHECK(std::abs(rho) < 0.01);
    }
}

TEST_CASE("sum of squares of a frame's worth of chips approximates 2*beta", "[chaos]") {
    constexpr std::size_t beta = 1000;
    Rng rng(5);
    ChaosStream s = ChaosStream::seeded(rng);
    double e = 0.0;
    for (std::size_t i = 0; i < 2 * beta; ++i) {
        const double v = s.next();
        e += v * v;
    }
    CHECK(e > 2.0 * beta * 0.9);
    CHECK(e < 2.0 * beta * 1.1);
}
