#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dcsk/modem.hpp"

using namespace dcsk;

TEST_CASE("frame layout follows the bit", "[modem]") {
    const std::vector<double> ref = {0.3, -0.5};
    CHECK(frame_from_reference(+1, ref).chips == std::vector<double>{0.3, -0.5, 0.3, -0.5});
    CHECK(frame_from_reference(-1, ref).chips == std::vector<double>{0.3, -0.5, -0.3, 0.5});
    CHECK_THROWS_AS(frame_from_reference(0, ref), std::invalid_argument);
    CHECK_THROWS_AS(frame_from_reference(+1, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("modulate spreads fresh chips and advances the stream", "[modem]") {
    Rng rng(3);
    ChaosStream s = ChaosStream::seeded(rng);
    ChaosStream twin = s;
    const auto expected_ref = twin.take(8);

    DcskFrame f = modulate(-1, s, 8);
    REQUIRE(f.beta == 8);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(f.chips[k] == expected_ref[k]);
        CHECK(f.chips[8 + k] == -f.chips[k]);
    }
    // stream advanced by exactly beta
    CHECK(s.take(1) == twin.take(1));
}

TEST_CASE("frame energy is exactly twice the reference energy", "[modem]") {
    Rng rng(17);
    ChaosStream s = ChaosStream::seeded(rng);
    for (int bit : {+1, -1}) {
        DcskFrame f = modulate(bit, s, 64);
        double ref_e = 0.0, data_e = 0.0;
        for (std::size_t k = 0; k < f.beta; ++k) {
            // each data chip is +/- its reference chip, so the squares match
            // exactly chip by chip
            REQUIRE(f.chips[64 + k] * f.chips[64 + k] == f.chips[k] * f.chips[k]);
            ref_e += f.chips[k] * f.chips[k];
            data_e += f.chips[64 + k] * f.chips[64 + k];
        }
        CHECK(ref_e + data_e == 2.0 * ref_e);
    }
}

TEST_CASE("correlator recovers the bit sign in the identity channel", "[modem]") {
    Rng rng(21);
    ChaosStream s = ChaosStream::seeded(rng);
    DcskFrame plus = modulate(+1, s, 32);
    DcskFrame minus = modulate(-1, s, 32);
    double ref_e_plus = 0.0, ref_e_minus = 0.0;
    for (std::size_t k = 0; k < 32; ++k) {
        ref_e_plus += plus.chips[k] * plus.chips[k];
        ref_e_minus += minus.chips[k] * minus.chips[k];
    }
    CHECK(correlate(plus.chips) == Catch::Approx(ref_e_plus).epsilon(1e-12));
    CHECK(correlate(minus.chips) == Catch::Approx(-ref_e_minus).epsilon(1e-12));

    const std::vector<double> zeros(64, 0.0);
    CHECK(correlate(zeros) == 0.0);

    const std::vector<double> odd(7, 1.0);
    CHECK_THROWS_AS(correlate(odd), std::invalid_argument);
}

TEST_CASE("correlator is quadratic in an input scale", "[modem]") {
    Rng rng(31);
    ChaosStream s = ChaosStream::seeded(rng);
    DcskFrame f = modulate(+1, s, 16);
    std::vector<double> scaled = f.chips;
    const double a = -2.75;
    for (double& c : scaled) c *= a;
    CHECK(correlate(scaled) == Catch::Approx(a * a * correlate(f.chips)).epsilon(1e-12));
}

TEST_CASE("binary detector with fixed tie-break", "[modem]") {
    CHECK(detect_binary(3.7) == +1);
    CHECK(detect_binary(-0.2) == -1);
    CHECK(detect_binary(0.0) == +1);
}

TEST_CASE("ternary detector levels", "[modem]") {
    const double eb = 2.0 * 64;
    CHECK(detect_ternary(2.0 * eb, eb) == +2);
    CHECK(detect_ternary(0.0, eb) == 0);
    CHECK(detect_ternary(-1.5 * eb, eb) == -2);
    CHECK_THROWS_AS(detect_ternary(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(detect_ternary(1.0, -2.0), std::domain_error);
}

TEST_CASE("noiseless loopback across spreading factors and seeds", "[modem]") {
    for (std::size_t beta : {std::size_t{1}, std::size_t{2}, std::size_t{7}, std::size_t{64}}) {
        for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
            Rng rng(seed);
            ChaosStream s = ChaosStream::seeded(rng);
            for (int bit : {+1, -1}) {
                DcskFrame f = modulate(bit, s, beta);
                INFO("beta=" << beta << " seed=" << seed << " bit=" << bit);
                CHECK(detect_binary(correlate(f.chips)) == bit);
            }
        }
    }
}
