#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fsqkd/ao.hpp"
#include "fsqkd/errors.hpp"
#include "fsqkd/montecarlo.hpp" // SplitMix64

using namespace fsqkd;

namespace {

// Test-local oracle for the closed-loop OPD variance: the two moment
// integrals written out directly (own HV5/7 + Bufton wind formulas, own
// trapezoid on a fine uniform grid), independent of the library path.
double oracle_opd_cl_nm(double f_tc, double f_c) {
    auto cn2 = [](double h) {
        return 0.00594 * std::pow(21.0 / 27.0, 2) * std::pow(1e-5 * h, 10) *
                   std::exp(-h / 1000.0) +
               2.7e-16 * std::exp(-h / 1500.0) + 1.7e-14 * std::exp(-h / 100.0);
    };
    auto wind = [](double h) {
        return 12.6e-3 * h + 5.0 + 30.0 * std::exp(-std::pow((h - 9400.0) / 4800.0, 2));
    };
    const double dh = 0.25;
    double m53 = 0.0, m2 = 0.0;
    for (double h = dh; h <= 50e3; h += dh) {
        m53 += cn2(h) * std::pow(wind(h), 5.0 / 3.0) * dh;
        m2 += cn2(h) * std::pow(wind(h), 2.0) * dh;
    }
    const double var_m2 = 0.1022 * std::pow(f_c, -5.0 / 3.0) * m53 +
                          2.775e-3 * std::pow(std::numbers::pi / 2.0, 2) *
                              std::pow(f_tc, -2.0) * m2;
    return std::sqrt(var_m2) * 1e9;
}

} // namespace

TEST_CASE("open-loop residual phase error") {
    CHECK(rpe_open_loop_rad2(1.0, 1.0) == doctest::Approx(1.03).epsilon(1e-15));
    CHECK(rpe_open_loop_rad2(1.0, 0.05) ==
          doctest::Approx(1.03 * std::pow(20.0, 5.0 / 3.0)).epsilon(1e-12)); // 151.78
    CHECK(rpe_open_loop_rad2(1.0, 1e12) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("closed-loop residual phase error") {
    CHECK(rpe_closed_loop_rad2(AOParams{1e12, 1e12}, 43.0, 301.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Direct evaluation of the two-term budget at the reference point.
    const double tracking = std::pow(std::numbers::pi / 2.0 * 43.0 / 60.0, 2);
    const double higher = std::pow(301.0 / 200.0, 5.0 / 3.0);
    CHECK(rpe_closed_loop_rad2(AOParams{60.0, 200.0}, 43.0, 301.0) ==
          doctest::Approx(tracking + higher).epsilon(1e-14));
    CHECK(tracking + higher == doctest::Approx(3.2436).epsilon(1e-4));
    // f_c = f_G with the tracking term suppressed leaves exactly 1 rad^2.
    CHECK(rpe_closed_loop_rad2(AOParams{1e15, 301.0}, 43.0, 301.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("open-loop OPD reproduces the 980-nm reference") {
    CHECK(opd_rms_open_loop_m(0.05, 1.0) * 1e9 == doctest::Approx(980.0).epsilon(2.0 / 980.0));
    CHECK(opd_rms_open_loop_m(1.0, 1.0) * 1e9 ==
          doctest::Approx(std::sqrt(1.03) * 500.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(opd_rms_open_loop_m(1e12, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("closed-loop OPD reproduces the 184/144/104-nm references") {
    const SiteModel site{};
    CHECK(opd_rms_closed_loop_m(site, AOParams{60.0, 130.0}, 1.0) * 1e9 ==
          doctest::Approx(184.0).epsilon(3.0 / 184.0));
    CHECK(opd_rms_closed_loop_m(site, AOParams{60.0, 200.0}, 1.0) * 1e9 ==
          doctest::Approx(144.0).epsilon(3.0 / 144.0));
    CHECK(opd_rms_closed_loop_m(site, AOParams{60.0, 500.0}, 1.0) * 1e9 ==
          doctest::Approx(104.0).epsilon(3.0 / 104.0));
    CHECK(opd_rms_closed_loop_m(site, AOParams{1e12, 1e12}, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("closed-loop OPD equals the direct moment-integral route") {
    const SiteModel site{};
    for (double f_c : {130.0, 200.0, 500.0}) {
        const double lib = opd_rms_closed_loop_m(site, AOParams{60.0, f_c}, 1.0) * 1e9;
        const double oracle = oracle_opd_cl_nm(60.0, f_c);
        CHECK(lib == doctest::Approx(oracle).epsilon(2e-3));
    }
}

TEST_CASE("effective closed-loop r0 reproduces the 37/50/74-cm references") {
    CHECK(effective_r0_closed_loop_m(kAoPreset130, 43.0, 301.0, 1.0, 500.0) ==
          doctest::Approx(0.37).epsilon(0.01 / 0.37));
    CHECK(effective_r0_closed_loop_m(kAoPreset200, 43.0, 301.0, 1.0, 500.0) ==
          doctest::Approx(0.50).epsilon(0.01 / 0.50));
    CHECK(effective_r0_closed_loop_m(kAoPreset500, 43.0, 301.0, 1.0, 500.0) ==
          doctest::Approx(0.74).epsilon(0.01 / 0.74));
}

TEST_CASE("effective r0 round-trip: open-loop RPE at r(lambda) equals closed-loop RPE") {
    SplitMix64 rng(0xA0);
    for (int i = 0; i < 200; ++i) {
        const AOParams ao{20.0 + 200.0 * rng.next_double(), 50.0 + 900.0 * rng.next_double()};
        const double f_tg = 10.0 + 80.0 * rng.next_double();
        const double f_g = 100.0 + 500.0 * rng.next_double();
        const double lambda = 400.0 + 1200.0 * rng.next_double();
        const double d = 0.5 + 2.0 * rng.next_double();
        const double r0cl = effective_r0_closed_loop_m(ao, f_tg, f_g, d, lambda);
        const double back = rpe_open_loop_rad2(d, scale_fried(r0cl, lambda));
        CHECK(back == doctest::Approx(rpe_closed_loop_rad2(ao, f_tg, f_g)).epsilon(1e-9));
    }
}

TEST_CASE("effective open-loop bandwidth") {
    // Reference site: f_G [1.03*20^(5/3) - ((pi/2)(43/60))^2]^(-3/5).
    const double got = effective_fc_open_loop_hz(0.05, 1.0, 500.0, 43.0, 301.0, 60.0);
    CHECK(got == doctest::Approx(14.860).epsilon(1e-3));
    // Substituting back returns r0.
    const double r0 = effective_r0_closed_loop_m(AOParams{60.0, got}, 43.0, 301.0, 1.0, 500.0);
    CHECK(r0 == doctest::Approx(0.05).epsilon(1e-9));
    // Negligible turbulence: the bracket goes negative.
    CHECK_THROWS_AS(effective_fc_open_loop_hz(1e6, 1.0, 500.0, 43.0, 301.0, 60.0),
                    DomainError);
}

TEST_CASE("Strehl from OPD") {
    CHECK(strehl_from_opd(0.0, 781.0) == 1.0);
    CHECK(strehl_from_opd(144e-9, 1550.0) == doctest::Approx(0.71).epsilon(0.01 / 0.71));
    CHECK(strehl_from_opd(144e-9, 781.0) == doctest::Approx(0.37).epsilon(0.01 / 0.37));
    CHECK(strehl_from_opd(144e-9, 431.0) == doctest::Approx(0.14).epsilon(0.01 / 0.14));
    // Route consistency with the uncorrected-turbulence form at 500 nm.
    const double opd = opd_rms_open_loop_m(0.05, 1.0);
    CHECK(strehl_from_opd(opd, 500.0) ==
          doctest::Approx(strehl_uncorrected(1.0, 0.05)).epsilon(1e-9));
    CHECK_THROWS_AS(strehl_from_opd(-1e-9, 500.0), DomainError);
}

TEST_CASE("Strehl/OPD inversion is exact") {
    SplitMix64 rng(0xA1);
    for (int i = 0; i < 500; ++i) {
        const double s = 0.001 + 0.999 * rng.next_double();
        const double lambda = 400.0 + 1200.0 * rng.next_double();
        CHECK(strehl_from_opd(opd_from_strehl_m(s, lambda), lambda) ==
              doctest::Approx(s).epsilon(1e-12));
    }
    CHECK(opd_from_strehl_m(1.0, 781.0) == 0.0);
}

TEST_CASE("r0 from OPD inverts the open-loop form") {
    SplitMix64 rng(0xA2);
    for (int i = 0; i < 500; ++i) {
        const double r0 = 0.01 + 2.0 * rng.next_double();
        const double d = 0.5 + 2.0 * rng.next_double();
        CHECK(r0_from_opd_m(opd_rms_open_loop_m(r0, d), d) ==
              doctest::Approx(r0).epsilon(1e-12));
    }
    CHECK(std::isinf(r0_from_opd_m(0.0, 1.0)));
}

TEST_CASE("TL FOV from OPD") {
    CHECK(tl_fov_from_opd_sr(1.0, 781.0, 0.0) ==
          doctest::Approx(dl_fov_sr(1.0, 781.0)).epsilon(1e-15));
    // Consistency with the r0 parameterization.
    for (double r0 : {0.05, 0.3, 1.0})
        for (double lambda : {431.0, 781.0, 1550.0}) {
            const double opd = opd_rms_open_loop_m(r0, 1.0);
            CHECK(tl_fov_from_opd_sr(1.0, lambda, opd) ==
                  doctest::Approx(tl_fov_sr(1.0, lambda, r0)).epsilon(1e-9));
        }
    // Crossover: uncorrected (980 nm) favors long wavelengths, corrected
    // (144 nm) flips the ordering.
    CHECK(tl_fov_from_opd_sr(1.0, 431.0, 980e-9) > tl_fov_from_opd_sr(1.0, 1550.0, 980e-9));
    CHECK(tl_fov_from_opd_sr(1.0, 431.0, 144e-9) < tl_fov_from_opd_sr(1.0, 1550.0, 144e-9));
}

TEST_CASE("effective r0 grows with either loop bandwidth") {
    double prev = 0.0;
    for (double f_c : {60.0, 130.0, 200.0, 500.0, 2000.0}) {
        const double r0 = effective_r0_closed_loop_m(AOParams{60.0, f_c}, 43.0, 301.0, 1.0,
                                                     500.0);
        CHECK(r0 > prev);
        prev = r0;
    }
    prev = 0.0;
    for (double f_tc : {30.0, 60.0, 120.0, 240.0}) {
        const double r0 = effective_r0_closed_loop_m(AOParams{f_tc, 200.0}, 43.0, 301.0, 1.0,
                                                     500.0);
        CHECK(r0 > prev);
        prev = r0;
    }
}

TEST_CASE("residual error pairs phase and OPD variance consistently") {
    const ResidualError res = residual_from_phase(3.2436, 500.0);
    CHECK(res.phase_variance_rad2 == 3.2436);
    const double scale = 500e-9 / (2.0 * std::numbers::pi);
    CHECK(res.opd_variance_m2 ==
          doctest::Approx(3.2436 * scale * scale).epsilon(1e-15));
    CHECK(std::sqrt(res.opd_variance_m2) * 1e9 == doctest::Approx(143.3).epsilon(1e-3));
}

TEST_CASE("Strehl from OPD rises with wavelength") {
    double prev = 0.0;
    for (double lambda : {431.0, 500.0, 781.0, 1064.0, 1550.0}) {
        const double s = strehl_from_opd(300e-9, lambda);
        CHECK(s > prev);
        prev = s;
    }
    // Zero residual gives exactly 1 at any wavelength (the epsilon noise
    // term of the DL QBER approximation vanishes with it).
    for (double lambda : {431.0, 781.0, 1550.0}) CHECK(strehl_from_opd(0.0, lambda) == 1.0);
}
