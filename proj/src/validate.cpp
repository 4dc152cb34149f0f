#include "fsqkd/validate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "fsqkd/ao.hpp"
#include "fsqkd/montecarlo.hpp"
#include "fsqkd/optics.hpp"
#include "fsqkd/qkd.hpp"
#include "fsqkd/scenario.hpp"
#include "fsqkd/spectral.hpp"
#include "fsqkd/sweep.hpp"
#include "fsqkd/turbulence.hpp"

namespace fsqkd {

namespace {

// Reference 500-nm site figures quoted for the LEO downlink operating point.
constexpr double kRefGreenwoodHz = 301.0;
constexpr double kRefTrackingGreenwoodHz = 43.0;
constexpr double kRefTrackingBandwidthHz = 60.0;

struct Check {
    CheckResult result;

    explicit Check(std::string name) { result.name = std::move(name); result.pass = true; }

    void note(const std::string& text) {
        if (!result.detail.empty()) result.detail += "; ";
        result.detail += text;
    }

    void expect(bool ok, const std::string& text) {
        note((ok ? "" : "FAILED: ") + text);
        if (!ok) result.pass = false;
    }

    void within(const std::string& label, double got, double expected, double tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s=%.6g (want %.6g +- %.2g)", label.c_str(), got,
                      expected, tol);
        expect(std::abs(got - expected) <= tol, buf);
    }

    void within_rel(const std::string& label, double got, double expected, double rel) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s=%.12g (want %.12g rel %.1g)", label.c_str(), got,
                      expected, rel);
        expect(std::abs(got - expected) <= rel * std::abs(expected), buf);
    }
};

CheckResult check_effective_r0() {
    Check c("effective-r0-closed-loop");
    const double targets[3][2] = {{130.0, 0.37}, {200.0, 0.50}, {500.0, 0.74}};
    for (const auto& t : targets) {
        const AOParams ao{kRefTrackingBandwidthHz, t[0]};
        const double r0 = effective_r0_closed_loop_m(ao, kRefTrackingGreenwoodHz,
                                                     kRefGreenwoodHz, 1.0,
                                                     kReferenceWavelengthNm);
        c.within("r0cl(fc=" + std::to_string(static_cast<int>(t[0])) + ")", r0, t[1], 0.01);
    }
    return c.result;
}

CheckResult check_opd_residuals() {
    Check c("opd-residuals");
    c.within("opd_ol(r0=5cm)", opd_rms_open_loop_m(0.05, 1.0) * 1e9, 980.0, 2.0);
    const SiteModel site{};
    const double targets[3][2] = {{130.0, 184.0}, {200.0, 144.0}, {500.0, 104.0}};
    for (const auto& t : targets) {
        const AOParams ao{kRefTrackingBandwidthHz, t[0]};
        c.within("opd_cl(fc=" + std::to_string(static_cast<int>(t[0])) + ")",
                 opd_rms_closed_loop_m(site, ao, 1.0) * 1e9, t[1], 3.0);
    }
    return c.result;
}

CheckResult check_strehl_at_opd() {
    Check c("strehl-at-144nm-opd");
    const double targets[3][2] = {{1550.0, 0.71}, {781.0, 0.37}, {431.0, 0.14}};
    for (const auto& t : targets)
        c.within("S(" + std::to_string(static_cast<int>(t[0])) + "nm)",
                 strehl_from_opd(144e-9, t[0]), t[1], 0.01);
    return c.result;
}

CheckResult check_fov_ratios() {
    Check c("fov-ratios");
    c.within("dlfov(1550)/dlfov(431)", dl_fov_sr(1.0, 1550.0) / dl_fov_sr(1.0, 431.0), 12.93,
             0.01);
    c.within("tl/dl(431, r0=30cm)", tl_fov_sr(1.0, 431.0, 0.30) / dl_fov_sr(1.0, 431.0), 17.8,
             0.5);
    c.within("tl/dl(1550, r0=30cm)", tl_fov_sr(1.0, 1550.0, 0.30) / dl_fov_sr(1.0, 1550.0),
             1.99, 0.05);
    // Absolute anchors so a tampered Airy constant cannot hide in the ratios.
    c.within("dlfov(1550, 1m)", dl_fov_sr(1.0, 1550.0), 1.12336e-11, 1e-14);
    LinkConfig cfg;
    cfg.focal_length_m = 10.0;
    c.within("dlspot(1550, f=10m)", dl_spot_diameter_m(cfg, 1550.0) * 1e6, 37.82, 0.01);
    return c.result;
}

CheckResult check_site_moments() {
    Check c("site-moments");
    const SiteModel site{};
    const double r0 = fried_length_m(site, kReferenceWavelengthNm);
    const double f_g = greenwood_frequency_hz(site, kReferenceWavelengthNm);
    const double f_tg = tracking_greenwood_frequency_hz(site, kReferenceWavelengthNm, 1.0);
    c.within("r0", r0, 0.05, 0.005);
    c.within("f_G", f_g, kRefGreenwoodHz, 30.1);
    c.within("f_TG", f_tg, kRefTrackingGreenwoodHz, 4.3);

    SiteModel fine = site;
    fine.quadrature_intervals = site.quadrature_intervals * 2;
    c.expect(std::abs(fried_length_m(fine, 500.0) - r0) / r0 < 1e-3,
             "r0 quadrature converged on grid doubling");
    c.expect(std::abs(greenwood_frequency_hz(fine, 500.0) - f_g) / f_g < 1e-3,
             "f_G quadrature converged on grid doubling");
    c.expect(std::abs(tracking_greenwood_frequency_hz(fine, 500.0, 1.0) - f_tg) / f_tg < 1e-3,
             "f_TG quadrature converged on grid doubling");
    return c.result;
}

CheckResult check_ao_fov_reduction() {
    Check c("ao-fov-reduction");
    const double targets[3][3] = {{1550.0, 20.0, 1.0}, {781.0, 52.0, 2.0}, {431.0, 78.0, 3.0}};
    for (const auto& t : targets) {
        const double ratio = tl_fov_sr(1.0, t[0], 0.05) / tl_fov_sr(1.0, t[0], 0.50);
        c.within("shrink(" + std::to_string(static_cast<int>(t[0])) + "nm)", ratio, t[1],
                 t[2]);
    }
    return c.result;
}

CheckResult check_identities() {
    Check c("algebraic-identities");

    SplitMix64 rng(0xFCD1);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double q_mu = std::pow(10.0, -8.0 * rng.next_double());
        const double q1 = q_mu * rng.next_double();
        const double e_mu = 0.5 * rng.next_double();
        const double e1 = 0.5 * rng.next_double();
        const double f_ec = 1.0 + rng.next_double();
        const double a = key_bit_probability(q_mu, e_mu, q1, e1, f_ec);
        const double c1 = f_ec * binary_entropy(e_mu);
        const double c2 = 1.0 - binary_entropy(e1);
        const double b = key_bit_probability_rearranged(q_mu, q1 / q_mu, c1, c2);
        const double scale =
            std::max({q_mu * c1, q1 * std::abs(c2), std::numeric_limits<double>::min()});
        worst = std::max(worst, std::abs(a - b) / scale);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "key-bit forms: worst rel diff %.3g over 1e4 draws", worst);
    c.expect(worst <= 1e-12, buf);

    double worst_s = 0.0, worst_f = 0.0;
    for (double r0 : {0.05, 0.10, 0.30, 0.50, 1.0})
        for (double lambda : {431.0, 500.0, 781.0, 1550.0})
            for (double d : {0.5, 1.0, 2.0}) {
                const double opd = opd_rms_open_loop_m(r0, d);
                const double s_direct = strehl_uncorrected(d, scale_fried(r0, lambda));
                const double s_opd = strehl_from_opd(opd, lambda);
                worst_s = std::max(worst_s, std::abs(s_opd - s_direct) / s_direct);
                const double fov_direct = tl_fov_sr(d, lambda, r0);
                const double fov_opd = tl_fov_from_opd_sr(d, lambda, opd);
                worst_f = std::max(worst_f, std::abs(fov_opd - fov_direct) / fov_direct);
            }
    std::snprintf(buf, sizeof buf, "strehl route consistency: worst rel %.3g", worst_s);
    c.expect(worst_s <= 1e-9, buf);
    std::snprintf(buf, sizeof buf, "fov route consistency: worst rel %.3g", worst_f);
    c.expect(worst_f <= 1e-9, buf);
    return c.result;
}

CheckResult check_monte_carlo(std::uint64_t seed) {
    Check c("monte-carlo-equivalence");
    c.note(std::string("rng=") + kMcRngAlgorithm + " seed=" + std::to_string(seed) +
           " pulses=1e7");
    int combo = 0;
    for (double eta : {1e-4, 1e-3, 1e-2})
        for (double y0 : {0.0, 1e-5, 1e-3})
            for (double n : {0.7, 0.1}) {
                McConfig cfg;
                cfg.pulses = 10'000'000;
                cfg.seed = seed + combo;
                cfg.eta = eta;
                cfg.y0 = y0;
                cfg.mean_photon_number = n;
                const McEstimate est = simulate(cfg);

                const double signal = 1.0 - std::exp(-eta * n);
                const double q = y0 + signal;
                const double e = (0.5 * y0 + 0.01 * signal) / q;
                // Null-hypothesis standard errors of the additive-tally
                // estimators.
                const double pulses = static_cast<double>(cfg.pulses);
                const double sigma_q =
                    std::sqrt((signal * (1.0 - signal) + y0 * (1.0 - y0)) / pulses);
                const double sigma_e = std::sqrt(e * (1.0 - e) / (pulses * q));

                char buf[192];
                std::snprintf(buf, sizeof buf,
                              "eta=%g y0=%g n=%g: |Q-%0.3g|=%.3g (3sig %.3g), |E-%0.3g|=%.3g "
                              "(3sig %.3g)",
                              eta, y0, n, q, std::abs(est.q_hat - q), 3 * sigma_q, e,
                              std::abs(est.e_hat - e), 3 * sigma_e);
                c.expect(std::abs(est.q_hat - q) <= 3 * sigma_q &&
                             std::abs(est.e_hat - e) <= 3 * sigma_e,
                         buf);
                ++combo;
            }

    McConfig cfg;
    cfg.pulses = 1'000'000;
    cfg.seed = seed;
    const McEstimate a = simulate(cfg);
    const McEstimate b = simulate(cfg);
    c.expect(a.q_hat == b.q_hat && a.e_hat == b.e_hat && a.clicks == b.clicks,
             "fixed seed reproduces bit-identical estimates");
    return c.result;
}

CheckResult check_qber_limits() {
    Check c("qber-limits-and-approx");
    const double e_d = 0.01, e0 = 0.5;

    double worst = 0.0;
    for (double eta : {1e-5, 1e-3, 1e-1})
        worst = std::max(worst, std::abs(qber(0.0, eta, 0.7, e0, e_d) - e_d) / e_d);
    char buf[192];
    std::snprintf(buf, sizeof buf, "Y0=0 -> e_d within %.3g rel (roundoff)", worst);
    c.expect(worst <= 1e-15, buf);

    bool exact_e0 = true;
    for (double y0 : {1e-8, 1e-4, 0.5})
        exact_e0 = exact_e0 && qber(y0, 0.0, 0.7, e0, e_d) == e0;
    c.expect(exact_e0, "eta=0 -> e0 exactly");

    // First-order DL approximation against the exact form, with the
    // mean-value remainder bound (x - s <= x^2/2 scaled by |e0-e_d| Y/(Y+s)^2).
    const double f_dark = 10.0, dt = 1e-9, mu = 0.7;
    double worst_excess = 0.0;
    for (double beta : {0.0, 1e-6, 1e-4})
        for (double strehl : {0.1, 0.5, 1.0})
            for (double eta_tl : {1e-5, 1e-4, 1.4e-3}) {
                const double eta_dl = strehl * eta_tl;
                if (eta_dl * mu > 1e-3) continue;
                const double y0_tl = beta + 4.0 * f_dark * dt;
                const double y0_dl = strehl * beta + 4.0 * f_dark * dt;
                const double approx =
                    qber_dl_approx(y0_tl, eta_tl, mu, e0, e_d, strehl, f_dark, dt);
                const double exact = qber(y0_dl, eta_dl, mu, e0, e_d);
                const double x = eta_dl * mu;
                const double s = 1.0 - std::exp(-x);
                const double bound = 0.5 * x * x * std::abs(e0 - e_d) * y0_dl /
                                         ((y0_dl + s) * (y0_dl + s)) +
                                     1e-15;
                worst_excess = std::max(worst_excess, std::abs(approx - exact) - bound);
            }
    std::snprintf(buf, sizeof buf, "DL approximation within O((eta mu)^2) remainder bound "
                                   "(worst excess %.3g)",
                  worst_excess);
    c.expect(worst_excess <= 0.0, buf);
    return c.result;
}

CheckResult check_optimizer() {
    Check c("wavelength-optimizer");
    const SpectralProfile sky = demo_sky_profile();
    const LinkConfig link{};
    const ProtocolParams protocol{};
    const double r0 = effective_r0_closed_loop_m(kAoPreset200, kRefTrackingGreenwoodHz,
                                                 kRefGreenwoodHz, 1.0,
                                                 kReferenceWavelengthNm);

    const OptimizeResult wide =
        optimize_wavelength(sky, 1.0, link, protocol, r0, 401.0, 1599.0, 0.5);
    char buf[160];
    std::snprintf(buf, sizeof buf, "1-nm filter: lambda_opt=%.3f nm (want 431 within one "
                                   "0.5-nm step)",
                  wide.lambda_opt_nm);
    c.expect(wide.key_possible && std::abs(wide.lambda_opt_nm - 431.0) <= 0.5 + 1e-9, buf);

    const OptimizeResult narrow =
        optimize_wavelength(sky, 0.05, link, protocol, r0, 401.0, 1599.0, 0.025);
    std::snprintf(buf, sizeof buf, "0.05-nm filter: lambda_opt=%.4f nm (want 405 within one "
                                   "0.025-nm step)",
                  narrow.lambda_opt_nm);
    c.expect(narrow.key_possible && std::abs(narrow.lambda_opt_nm - 405.0) <= 0.025 + 1e-9,
             buf);
    return c.result;
}

CheckResult check_strategy_dominance() {
    Check c("strategy-dominance");
    const SpectralProfile sky = demo_sky_profile();
    SweepSpec spec;
    spec.axis = SweepAxis::kR0;
    spec.min = 0.05;
    spec.max = 1.0;
    spec.points = 25;
    spec.lambdas_nm = {431.0};
    spec.strategies = {Strategy::kDiffractionLimited, Strategy::kTurbulenceLimited};
    spec.link.filter_width_nm = 0.05;

    const auto rows = run_sweep(sky, spec);
    bool strict = true;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        const double dl = row.cells[0].budget.r_kb_hz;
        const double tl = row.cells[1].budget.r_kb_hz;
        if (!(tl > dl) || !(tl > 0.0)) strict = false;
        min_gap = std::min(min_gap, tl - dl);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "R_TL > R_DL at all 25 points over r0 in [0.05, 1.0] m "
                                   "(min gap %.3g Hz)",
                  min_gap);
    c.expect(strict, buf);
    return c.result;
}

} // namespace

std::vector<CheckResult> run_acceptance_checks(std::uint64_t mc_seed) {
    std::vector<CheckResult> results;
    results.push_back(check_effective_r0());
    results.push_back(check_opd_residuals());
    results.push_back(check_strehl_at_opd());
    results.push_back(check_fov_ratios());
    results.push_back(check_site_moments());
    results.push_back(check_ao_fov_reduction());
    results.push_back(check_identities());
    results.push_back(check_monte_carlo(mc_seed));
    results.push_back(check_qber_limits());
    results.push_back(check_optimizer());
    results.push_back(check_strategy_dominance());
    return results;
}

} // namespace fsqkd
