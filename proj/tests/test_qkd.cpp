#include <doctest.h>

#include <cmath>
#include <limits>

#include "fsqkd/errors.hpp"
#include "fsqkd/montecarlo.hpp" // SplitMix64
#include "fsqkd/qkd.hpp"

using namespace fsqkd;

namespace {

SpectralProfile flat_profile(double transmission, double radiance) {
    std::vector<SpectralSample> s{{300.0, transmission, radiance},
                                  {1700.0, transmission, radiance}};
    return SpectralProfile(std::move(s), "flat", RadianceUnit::kWattPerM2SrNm);
}

} // namespace

TEST_CASE("background photons: zero radiance, linear scalings") {
    const SpectralProfile dark = flat_profile(0.9, 0.0);
    CHECK(background_photons(dark, 780.0, 1.0, 1e-10, 1.0, 1e-9) == 0.0);

    const SpectralProfile sky = flat_profile(0.9, 1e-2);
    const double base = background_photons(sky, 780.0, 1.0, 1e-10, 1.0, 1e-9);
    CHECK(background_photons(sky, 780.0, 1.0, 2e-10, 1.0, 1e-9) ==
          doctest::Approx(2.0 * base).epsilon(1e-12));
    CHECK(background_photons(sky, 780.0, 1.0, 1e-10, 2.0, 1e-9) ==
          doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("background photons match the hand dimensional-analysis oracle") {
    // Constant H_b = 1e-2 W m^-2 sr^-1 nm^-1, 1-nm notch at 780 nm,
    // Omega = 1e-10 sr, D_R = 1 m, dt = 1 ns:
    // N_b = (lambda0/4hc) H dl Omega pi D^2 dt, lambda0/4hc = 9.8165e17 /J.
    const SpectralProfile sky = flat_profile(0.9, 1e-2);
    const double oracle = (780e-9 / (4.0 * kHc)) * 1e-2 * 1.0 * 1e-10 *
                          3.14159265358979323846 * 1.0 * 1e-9;
    CHECK(oracle == doctest::Approx(3.0839e-3).epsilon(1e-4));
    CHECK(background_photons(sky, 780.0, 1.0, 1e-10, 1.0, 1e-9) ==
          doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("background probability") {
    CHECK(background_probability(0.0, 0.9, 0.5, 0.8, 0.0, 1e-9) == 0.0);
    CHECK(background_probability(0.0, 0.9, 0.5, 0.8, 10.0, 1e-9) ==
          doctest::Approx(4e-8).epsilon(1e-12));
    CHECK(background_probability(1e-3, 0.9, 0.5, 0.8, 10.0, 1e-9) ==
          doctest::Approx(3.6e-4 + 4e-8).epsilon(1e-12));
    CHECK_THROWS_AS(background_probability(10.0, 0.9, 0.5, 0.8, 10.0, 1e-9), DomainError);
    CHECK_THROWS_AS(background_probability(-1.0, 0.9, 0.5, 0.8, 10.0, 1e-9), DomainError);
}

TEST_CASE("gain") {
    CHECK(gain(1e-5, 0.0, 0.7) == 1e-5);
    CHECK(gain(1e-5, 1e-3, 0.7) == doctest::Approx(7.097550e-4).epsilon(1e-6));
    // Small-signal expansion: Q - Y0 = eta*mu to second order.
    for (double eta : {1e-6, 1e-4, 1e-3}) {
        const double q = gain(0.0, eta, 0.7);
        CHECK(std::abs(q - eta * 0.7) <= 0.5 * (eta * 0.7) * (eta * 0.7));
    }
}

TEST_CASE("qber limits") {
    // Signal-only limit: e_d.
    CHECK(qber(0.0, 1e-3, 0.7, 0.5, 0.01) == doctest::Approx(0.01).epsilon(1e-14));
    // Noise-only limit: e0 = 0.5 exactly (0.5 scaling is exact in binary fp).
    CHECK(qber(1e-4, 0.0, 0.7, 0.5, 0.01) == 0.5);
    // Equal-weight mixture: Y0 = 1 - exp(-eta mu) gives (e0 + e_d)/2.
    const double eta = 2e-3, mu = 0.7;
    const double s = 1.0 - std::exp(-eta * mu);
    CHECK(qber(s, eta, mu, 0.5, 0.01) == doctest::Approx(0.255).epsilon(1e-12));
    CHECK_THROWS_AS(qber(0.0, 0.0, 0.7, 0.5, 0.01), DomainError);
}

TEST_CASE("DL QBER approximation") {
    // S = 1: the noise term vanishes and the form is the linearized QBER.
    const double y0 = 1e-5, eta = 1e-4, mu = 0.7;
    const double linearized = (0.5 * y0 + 0.01 * eta * mu) / (y0 + eta * mu);
    CHECK(qber_dl_approx(y0, eta, mu, 0.5, 0.01, 1.0, 10.0, 1e-9) ==
          doctest::Approx(linearized).epsilon(1e-14));
    // Epsilon arithmetic: with e0 = 0, e_d = 1 the form is s/(eps + s), so
    // eps can be extracted and compared with 4 f_dark dt (1/S - 1) = 4e-8.
    const double probe = qber_dl_approx(0.0, eta, mu, 0.0, 1.0, 0.5, 10.0, 1e-9);
    const double eps = eta * mu * (1.0 / probe - 1.0);
    CHECK(eps == doctest::Approx(4e-8).epsilon(1e-9));
    CHECK_THROWS_AS(qber_dl_approx(y0, eta, mu, 0.5, 0.01, 0.0, 10.0, 1e-9), DomainError);

    // Remainder bound: |approx - exact| <= (x^2/2) |e0-e_d| Y/(Y+s)^2 for
    // eta_dl * mu <= 1e-3 (mean-value bound on t -> (e0 Y + e_d t)/(Y + t)).
    for (double beta : {0.0, 1e-6, 1e-4})
        for (double strehl : {0.1, 0.5, 1.0})
            for (double eta_tl : {1e-5, 1e-4, 1.4e-3}) {
                const double eta_dl = strehl * eta_tl;
                if (eta_dl * mu > 1e-3) continue;
                const double y0_tl = beta + 4e-8;
                const double y0_dl = strehl * beta + 4e-8;
                const double approx =
                    qber_dl_approx(y0_tl, eta_tl, mu, 0.5, 0.01, strehl, 10.0, 1e-9);
                const double exact = qber(y0_dl, eta_dl, mu, 0.5, 0.01);
                const double x = eta_dl * mu;
                const double sdl = 1.0 - std::exp(-x);
                const double bound =
                    0.5 * x * x * 0.49 * y0_dl / ((y0_dl + sdl) * (y0_dl + sdl)) + 1e-15;
                CHECK(std::abs(approx - exact) <= bound);
            }
}

TEST_CASE("snr") {
    CHECK(snr(gain(1e-5, 0.0, 0.7), 1e-5) == 1.0);
    CHECK(snr(2e-5, 1e-5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::isinf(snr(1e-3, 0.0)));
    CHECK_THROWS_AS(snr(1e-3, -1e-9), DomainError);
}

TEST_CASE("decoy estimates: exact-model round trip") {
    // Inputs generated from the additive model with Y0 = 0, eta = 1e-3,
    // mu = 0.7, nu = 0.1. Frozen oracle values from direct evaluation of the
    // estimator formulas (the vacuum+weak estimator is a lower bound: it
    // recovers Y1 = 0.9538 eta here, a ~4.6% nu-truncation bias, and
    // e1 = 1.1587 e_d; both frozen, qualitative bands asserted alongside).
    const double eta = 1e-3, mu = 0.7, nu = 0.1, e_d = 0.01;
    const double q_mu = gain(0.0, eta, mu);
    const double q_nu = gain(0.0, eta, nu);
    const double e_nu = qber(0.0, eta, nu, 0.5, e_d);
    const DecoyEstimate est = decoy_estimates(q_mu, q_nu, 0.0, mu, nu, e_nu, 0.5);

    CHECK(est.q_1 == doctest::Approx(3.315479176e-4).epsilon(1e-6));
    CHECK(est.y_1 == doctest::Approx(9.537935952e-4).epsilon(1e-6));
    CHECK(est.e_1 == doctest::Approx(1.158652844e-2).epsilon(1e-6));
    CHECK(est.y_1 / eta > 0.94);
    CHECK(est.y_1 / eta < 0.97);
    CHECK(est.e_1 / e_d > 1.1);
    CHECK(est.e_1 / e_d < 1.2);
    CHECK(!est.q1_clamped);
    CHECK(!est.y1_degenerate);
    CHECK(!est.e1_clamped);
    // Y1 = Q1 e^mu / mu by construction.
    CHECK(est.y_1 == doctest::Approx(est.q_1 * std::exp(mu) / mu).epsilon(1e-15));
}

TEST_CASE("decoy estimates: clamps and degeneracy") {
    // Decoy gain far below the signal gain makes the linear combination
    // negative: Q1 clamps to 0 and the estimate is degenerate.
    const DecoyEstimate est = decoy_estimates(0.9, 1e-3, 0.0, 0.7, 0.1, 0.01, 0.5);
    CHECK(est.q_1 == 0.0);
    CHECK(est.q1_clamped);
    CHECK(est.y1_degenerate);

    // Noise-dominated channel pushes e1 past 1/2: clamped and flagged.
    const double y0 = 0.01;
    const DecoyEstimate noisy =
        decoy_estimates(gain(y0, 0.0, 0.7), gain(y0, 0.0, 0.1), y0, 0.7, 0.1, 0.5, 0.5);
    CHECK(noisy.e_1 == 0.5);
    CHECK(noisy.e1_clamped);

    CHECK_THROWS_AS(decoy_estimates(1e-3, 1e-4, 0.0, 0.7, 0.7, 0.01, 0.5), DomainError);
    CHECK_THROWS_AS(decoy_estimates(1e-3, 1e-4, 0.0, 0.1, 0.7, 0.01, 0.5), DomainError);
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958).epsilon(1e-9));
    CHECK_THROWS_AS(binary_entropy(-0.01), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.01), DomainError);
    SplitMix64 rng(0xB0);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.next_double();
        CHECK(binary_entropy(x) == doctest::Approx(binary_entropy(1.0 - x)).epsilon(1e-12));
    }
}

TEST_CASE("key-bit probability limits") {
    // Ideal sifting: Q1 = Q_mu, no errors, f_ec = 1 gives Q_mu / 2.
    CHECK(key_bit_probability(1e-3, 0.0, 1e-3, 0.0, 1.0) ==
          doctest::Approx(5e-4).epsilon(1e-15));
    // Maximal error: -Q_mu f_ec / 2.
    CHECK(key_bit_probability(1e-3, 0.5, 1e-3, 0.5, 1.22) ==
          doctest::Approx(-0.5 * 1e-3 * 1.22).epsilon(1e-12));
}

TEST_CASE("key-bit probability forms agree on randomized inputs") {
    SplitMix64 rng(0xB1);
    for (int i = 0; i < 10000; ++i) {
        const double q_mu = std::pow(10.0, -8.0 * rng.next_double());
        const double q1 = q_mu * rng.next_double();
        const double e_mu = 0.5 * rng.next_double();
        const double e1 = 0.5 * rng.next_double();
        const double f_ec = 1.0 + rng.next_double();
        const double a = key_bit_probability(q_mu, e_mu, q1, e1, f_ec);
        const double b = key_bit_probability_rearranged(
            q_mu, q1 / q_mu, f_ec * binary_entropy(e_mu), 1.0 - binary_entropy(e1));
        const double scale = std::max({q_mu * f_ec * binary_entropy(e_mu),
                                       q1 * (1.0 - binary_entropy(e1)), 1e-300});
        CHECK(std::abs(a - b) <= 1e-12 * scale);
    }
    CHECK(key_bit_probability_rearranged(0.0, 0.0, 0.0, 1.0) == 0.0);
    CHECK(key_bit_probability_rearranged(1e-3, 1.0, 0.0, 1.0) ==
          doctest::Approx(5e-4).epsilon(1e-15));
}

TEST_CASE("key-bit rate") {
    CHECK(key_bit_rate_hz(0.0, 10e6, 0.3) == 0.0);
    CHECK(key_bit_rate_hz(1e-4, 10e6, 0.3) == doctest::Approx(700.0).epsilon(1e-12));
    CHECK(key_bit_rate_hz(-1e-4, 10e6, 0.3) == 0.0); // clamp convention
}

TEST_CASE("evaluate_link: noiseless channel") {
    const SpectralProfile clear = flat_profile(1.0, 0.0);
    LinkConfig cfg;
    cfg.dark_count_rate_hz = 0.0;
    cfg.signal_wavelength_nm = 431.0;
    const ProtocolParams protocol{};
    const LinkBudget b = evaluate_link(clear, 1e9, cfg, protocol); // S ~ 1
    CHECK(b.strehl == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.y0 == 0.0);
    CHECK(b.e_mu == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(b.r_kb_hz > 0.0);
    CHECK(std::isinf(b.snr_mu));
    CHECK(!b.flags.any());
}

TEST_CASE("evaluate_link: strategies coincide at S = 1") {
    const SpectralProfile sky = flat_profile(0.8, 1e-3);
    LinkConfig tl;
    tl.strategy = Strategy::kTurbulenceLimited;
    LinkConfig dl = tl;
    dl.strategy = Strategy::kDiffractionLimited;
    const ProtocolParams protocol{};
    const double huge_r0 = 1e9;
    const LinkBudget btl = evaluate_link(sky, huge_r0, tl, protocol);
    const LinkBudget bdl = evaluate_link(sky, huge_r0, dl, protocol);
    CHECK(btl.omega_fov_sr == doctest::Approx(bdl.omega_fov_sr).epsilon(1e-12));
    CHECK(btl.eta_total == doctest::Approx(bdl.eta_total).epsilon(1e-12));
    CHECK(btl.y0 == doctest::Approx(bdl.y0).epsilon(1e-12));
    CHECK(btl.q_mu == doctest::Approx(bdl.q_mu).epsilon(1e-12));
    CHECK(btl.e_mu == doctest::Approx(bdl.e_mu).epsilon(1e-12));
    CHECK(btl.r_kb_hz == doctest::Approx(bdl.r_kb_hz).epsilon(1e-12));
}

TEST_CASE("evaluate_link: demo profile favors 431 over 1550 at the AO point") {
    const SpectralProfile sky = demo_sky_profile();
    LinkConfig cfg;
    cfg.strategy = Strategy::kTurbulenceLimited;
    const ProtocolParams protocol{};
    cfg.signal_wavelength_nm = 431.0;
    const LinkBudget blue = evaluate_link(sky, 0.50, cfg, protocol);
    cfg.signal_wavelength_nm = 1550.0;
    const LinkBudget ir = evaluate_link(sky, 0.50, cfg, protocol);
    CHECK(blue.r_kb_hz > ir.r_kb_hz);
    CHECK(blue.r_kb_hz > 0.0);
}

TEST_CASE("evaluate_link: site-driven with AO reports the effective r0") {
    const SpectralProfile sky = demo_sky_profile();
    const SiteModel site{};
    const LinkConfig cfg{};
    const ProtocolParams protocol{};
    const LinkBudget plain = evaluate_link(sky, site, cfg, protocol);
    CHECK(plain.r0_m == doctest::Approx(0.05).epsilon(0.10));
    const LinkBudget corrected = evaluate_link(sky, site, cfg, protocol, kAoPreset200);
    CHECK(corrected.r0_m == doctest::Approx(0.50).epsilon(0.03));
    CHECK(corrected.r_kb_hz > plain.r_kb_hz);
}

TEST_CASE("evaluate_link: saturated background is rejected") {
    const SpectralProfile blinding = flat_profile(0.8, 1e9);
    LinkConfig cfg;
    cfg.strategy = Strategy::kTurbulenceLimited;
    CHECK_THROWS_AS(evaluate_link(blinding, 0.05, cfg, ProtocolParams{}), DomainError);
}

TEST_CASE("evaluate_link: noise-dominated point clamps and zeroes the rate") {
    // Bright enough that the QBER sits near 0.5 and the raw key-bit
    // probability goes negative.
    const SpectralProfile bright = flat_profile(0.8, 1.0);
    LinkConfig cfg;
    cfg.strategy = Strategy::kDiffractionLimited;
    cfg.signal_wavelength_nm = 1550.0;
    const LinkBudget b = evaluate_link(bright, 0.05, cfg, ProtocolParams{});
    CHECK(b.r_kb_hz == 0.0);
    CHECK(b.flags.any());
    CHECK(b.p_kb <= 0.0);
    CHECK(b.flags.to_string() != "");
}

TEST_CASE("TL admits ~7.4x the background photons of DL at the AO point") {
    // The ratio is 1/S and cancels the radiance, so it holds on any sky.
    const SpectralProfile sky = demo_sky_profile();
    LinkConfig tl;
    tl.signal_wavelength_nm = 431.0;
    tl.strategy = Strategy::kTurbulenceLimited;
    LinkConfig dl = tl;
    dl.strategy = Strategy::kDiffractionLimited;
    const ProtocolParams protocol{};
    const LinkBudget btl = evaluate_link(sky, 0.50, tl, protocol);
    const LinkBudget bdl = evaluate_link(sky, 0.50, dl, protocol);
    CHECK(btl.n_b / bdl.n_b == doctest::Approx(7.4).epsilon(0.1 / 7.4));
    CHECK(btl.n_b / bdl.n_b == doctest::Approx(1.0 / btl.strehl).epsilon(1e-12));
}

TEST_CASE("budget fields respect their bounds across the operating range") {
    const SpectralProfile sky = demo_sky_profile();
    const ProtocolParams protocol{};
    for (double lambda : {431.0, 781.0, 1550.0})
        for (double r0 : {0.05, 0.2, 0.5, 1.0})
            for (Strategy strategy :
                 {Strategy::kDiffractionLimited, Strategy::kTurbulenceLimited})
                for (double width : {0.05, 1.0}) {
                    LinkConfig cfg;
                    cfg.signal_wavelength_nm = lambda;
                    cfg.strategy = strategy;
                    cfg.filter_width_nm = width;
                    const LinkBudget b = evaluate_link(sky, r0, cfg, protocol);
                    CHECK(b.n_b >= 0.0);
                    CHECK(b.y0 >= 0.0);
                    CHECK(b.y0 <= 1.0);
                    CHECK(b.q_mu >= b.y0);
                    CHECK(b.q_nu >= b.y0);
                    CHECK(b.q_mu <= 1.0);
                    CHECK(b.e_mu >= protocol.e_misalignment);
                    CHECK(b.e_mu <= protocol.e0);
                    CHECK(b.e_1 >= 0.0);
                    CHECK(b.e_1 <= 0.5);
                    CHECK(b.q_1 >= 0.0);
                    CHECK(b.y_1 >= 0.0);
                    CHECK(b.r_kb_hz >= 0.0);
                    CHECK(b.strehl > 0.0);
                    CHECK(b.strehl <= 1.0);
                    CHECK(b.eta_total > 0.0);
                    CHECK(b.eta_total < 1.0);
                }
}

TEST_CASE("TL and DL QBERs differ by less than the epsilon-term bound") {
    const SpectralProfile sky = demo_sky_profile();
    const ProtocolParams protocol{};
    for (double lambda : {431.0, 781.0, 1550.0})
        for (int i = 0; i <= 20; ++i) {
            const double r0 = 0.05 + (1.0 - 0.05) * i / 20.0;
            LinkConfig tl;
            tl.signal_wavelength_nm = lambda;
            tl.strategy = Strategy::kTurbulenceLimited;
            LinkConfig dl = tl;
            dl.strategy = Strategy::kDiffractionLimited;
            const LinkBudget btl = evaluate_link(sky, r0, tl, protocol);
            const LinkBudget bdl = evaluate_link(sky, r0, dl, protocol);
            CHECK(std::abs(btl.e_mu - bdl.e_mu) < 1e-3);
        }
}

TEST_CASE("TL/DL gain ratio lies in [1, 1/S]") {
    const SpectralProfile sky = demo_sky_profile();
    const ProtocolParams protocol{};
    for (double lambda : {431.0, 781.0, 1550.0})
        for (double r0 : {0.05, 0.1, 0.3, 0.5, 1.0}) {
            LinkConfig tl;
            tl.signal_wavelength_nm = lambda;
            tl.strategy = Strategy::kTurbulenceLimited;
            LinkConfig dl = tl;
            dl.strategy = Strategy::kDiffractionLimited;
            const LinkBudget btl = evaluate_link(sky, r0, tl, protocol);
            const LinkBudget bdl = evaluate_link(sky, r0, dl, protocol);
            const double ratio = btl.q_mu / bdl.q_mu;
            CHECK(ratio >= 1.0);
            CHECK(ratio <= 1.0 / btl.strehl * (1.0 + 1e-12));
        }
}

TEST_CASE("SNR at the signal MPN rises with improving coherence") {
    const SpectralProfile sky = demo_sky_profile();
    const ProtocolParams protocol{};
    for (Strategy strategy : {Strategy::kDiffractionLimited, Strategy::kTurbulenceLimited}) {
        double prev = 0.0;
        for (double r0 : {0.05, 0.1, 0.2, 0.4, 0.8}) {
            LinkConfig cfg;
            cfg.signal_wavelength_nm = 431.0;
            cfg.strategy = strategy;
            const LinkBudget b = evaluate_link(sky, r0, cfg, protocol);
            CHECK(b.snr_mu > prev);
            CHECK(b.snr_mu >= 1.0);
            prev = b.snr_mu;
        }
    }
}

TEST_CASE("key rate is non-decreasing in r0 on a noiseless channel") {
    const SpectralProfile clear = flat_profile(1.0, 0.0);
    ProtocolParams protocol{};
    for (Strategy strategy : {Strategy::kDiffractionLimited, Strategy::kTurbulenceLimited}) {
        double prev = -1.0;
        for (double r0 : {0.05, 0.1, 0.2, 0.4, 0.8}) {
            LinkConfig cfg;
            cfg.dark_count_rate_hz = 0.0;
            cfg.strategy = strategy;
            cfg.signal_wavelength_nm = 781.0;
            const LinkBudget b = evaluate_link(clear, r0, cfg, protocol);
            CHECK(b.r_kb_hz >= prev);
            prev = b.r_kb_hz;
        }
    }
}
