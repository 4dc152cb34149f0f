#include "fsqkd/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fsqkd {

std::string BudgetFlags::to_string() const {
    std::string out;
    auto add = [&out](const char* tag) {
        if (!out.empty()) out += '|';
        out += tag;
    };
    if (q1_clamped) add("q1_clamped");
    if (y1_degenerate) add("y1_degenerate");
    if (e1_clamped) add("e1_clamped");
    if (negative_pkb) add("negative_pkb");
    if (eval_error) add("eval_error");
    return out;
}

double background_photons(const SpectralProfile& profile, double center_nm, double width_nm,
                          double omega_sr, double receiver_diameter_m, double gate_time_s) {
    // Photon-count weight lambda/(4hc); lambda enters in meters, the radiance
    // and the notch stay per-nm so the band integral is W m^-2 sr^-1 / (J).
    const double integral = profile.band_integral(
        center_nm, width_nm, [](double lambda_nm) { return lambda_nm * 1e-9 / (4.0 * kHc); });
    return integral * omega_sr * std::numbers::pi * receiver_diameter_m *
           receiver_diameter_m * gate_time_s;
}

double background_probability(double n_b, double eta_spectral, double eta_receiver,
                              double eta_detector, double dark_count_rate_hz,
                              double gate_time_s) {
    if (n_b < 0.0) throw DomainError("background_probability: N_b must be >= 0");
    const double y0 = n_b * eta_spectral * eta_receiver * eta_detector +
                      4.0 * dark_count_rate_hz * gate_time_s;
    if (y0 > 1.0)
        throw DomainError("background_probability: Y0 = " + std::to_string(y0) +
                          " exceeds 1; nonphysical radiance/FOV combination");
    return y0;
}

double gain(double y0, double eta, double mean_photon_number) {
    // Summing the signal term first keeps eta = 0 exact at tiny y0.
    return (1.0 - std::exp(-eta * mean_photon_number)) + y0;
}

double qber(double y0, double eta, double mean_photon_number, double e0, double e_d) {
    const double signal = 1.0 - std::exp(-eta * mean_photon_number);
    const double denominator = y0 + signal;
    if (denominator <= 0.0)
        throw DomainError("qber: no clicks (Y0 + signal probability is zero)");
    return (e0 * y0 + e_d * signal) / denominator;
}

double qber_dl_approx(double y0_tl, double eta_tl, double mean_photon_number, double e0,
                      double e_d, double strehl, double dark_count_rate_hz,
                      double gate_time_s) {
    if (strehl <= 0.0 || strehl > 1.0)
        throw DomainError("qber_dl_approx: Strehl must lie in (0, 1]");
    const double eps = 4.0 * dark_count_rate_hz * gate_time_s * (1.0 / strehl - 1.0);
    const double signal = eta_tl * mean_photon_number;
    return (e0 * (y0_tl + eps) + e_d * signal) / (y0_tl + eps + signal);
}

double snr(double q_n, double y0) {
    if (y0 < 0.0) throw DomainError("snr: Y0 must be >= 0");
    if (y0 == 0.0) return std::numeric_limits<double>::infinity();
    return q_n / y0;
}

DecoyEstimate decoy_estimates(double q_mu, double q_nu, double y0, double mu, double nu,
                              double e_nu, double e0) {
    if (!(0.0 < nu && nu < mu))
        throw DomainError("decoy_estimates: need 0 < nu < mu");
    DecoyEstimate est;
    const double denom = mu * nu - nu * nu;
    const double bracket = q_nu * std::exp(nu) - q_mu * std::exp(mu) * nu * nu / (mu * mu) -
                           (mu * mu - nu * nu) / (mu * mu) * y0;
    est.q_1 = mu * mu * std::exp(-mu) / denom * bracket;
    if (est.q_1 < 0.0) {
        est.q_1 = 0.0;
        est.q1_clamped = true;
    }
    est.y_1 = est.q_1 * std::exp(mu) / mu;
    if (est.y_1 <= 0.0) {
        // Degenerate estimate: no single-photon yield survives; the caller
        // reports zero key rate.
        est.y1_degenerate = true;
        est.e_1 = 0.5;
        return est;
    }
    est.e_1 = e_nu * q_nu * std::exp(nu) / (est.y_1 * nu) - e0 * y0 / (est.y_1 * nu);
    if (est.e_1 < 0.0 || est.e_1 > 0.5) {
        est.e_1 = std::clamp(est.e_1, 0.0, 0.5);
        est.e1_clamped = true;
    }
    return est;
}

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0)
        throw DomainError("binary_entropy: argument " + std::to_string(x) +
                          " outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double key_bit_probability(double q_mu, double e_mu, double q_1, double e_1, double f_ec) {
    return 0.5 * (-q_mu * f_ec * binary_entropy(e_mu) +
                  q_1 * (1.0 - binary_entropy(e_1)));
}

double key_bit_probability_rearranged(double q_mu, double q, double c1, double c2) {
    if (q_mu == 0.0) return 0.0;
    return 0.5 * q_mu * (-c1 + q * c2);
}

double key_bit_rate_hz(double p_kb, double pulse_rate_hz, double decoy_fraction) {
    return std::max(p_kb, 0.0) * pulse_rate_hz * (1.0 - decoy_fraction);
}

LinkBudget evaluate_link(const SpectralProfile& profile, double r0_m, const LinkConfig& cfg,
                         const ProtocolParams& protocol) {
    cfg.validate();
    protocol.validate();
    if (!(r0_m > 0.0)) // rejects non-positive and NaN; +infinity is a valid vacuum channel
        throw DomainError("evaluate_link: r0 must be positive, got " + std::to_string(r0_m));

    LinkBudget b;
    b.lambda_nm = cfg.signal_wavelength_nm;
    b.r0_m = r0_m;
    b.strategy = cfg.strategy;

    const double r_lambda = scale_fried(r0_m, b.lambda_nm);
    b.strehl = strehl_uncorrected(cfg.receiver_diameter_m, r_lambda);
    b.omega_fov_sr = cfg.strategy == Strategy::kTurbulenceLimited
                         ? tl_fov_sr(cfg.receiver_diameter_m, b.lambda_nm, r0_m)
                         : dl_fov_sr(cfg.receiver_diameter_m, b.lambda_nm);

    b.eta_geo = geometric_coupling(cfg, b.lambda_nm);
    b.eta_trans = profile.transmission_at(b.lambda_nm);
    b.eta_fs = field_stop_efficiency(cfg.strategy, b.strehl);
    b.eta_total = b.eta_geo * b.eta_trans * b.eta_fs * cfg.eta_spectral * cfg.eta_receiver *
                  cfg.eta_detector;

    b.n_b = background_photons(profile, b.lambda_nm, cfg.filter_width_nm, b.omega_fov_sr,
                               cfg.receiver_diameter_m, cfg.gate_time_s);
    b.y0 = background_probability(b.n_b, cfg.eta_spectral, cfg.eta_receiver,
                                  cfg.eta_detector, cfg.dark_count_rate_hz, cfg.gate_time_s);

    b.q_mu = gain(b.y0, b.eta_total, protocol.mu);
    b.q_nu = gain(b.y0, b.eta_total, protocol.nu);
    b.e_mu = qber(b.y0, b.eta_total, protocol.mu, protocol.e0, protocol.e_misalignment);
    b.e_nu = qber(b.y0, b.eta_total, protocol.nu, protocol.e0, protocol.e_misalignment);
    b.snr_mu = snr(b.q_mu, b.y0);

    const DecoyEstimate est = decoy_estimates(b.q_mu, b.q_nu, b.y0, protocol.mu, protocol.nu,
                                              b.e_nu, protocol.e0);
    b.q_1 = est.q_1;
    b.y_1 = est.y_1;
    b.e_1 = est.e_1;
    b.flags.q1_clamped = est.q1_clamped;
    b.flags.y1_degenerate = est.y1_degenerate;
    b.flags.e1_clamped = est.e1_clamped;

    b.p_kb = key_bit_probability(b.q_mu, b.e_mu, b.q_1, b.e_1, protocol.f_ec);
    if (b.p_kb < 0.0) b.flags.negative_pkb = true;
    b.r_kb_hz = est.y1_degenerate
                    ? 0.0
                    : key_bit_rate_hz(b.p_kb, protocol.pulse_rate_hz, protocol.decoy_fraction);
    return b;
}

LinkBudget evaluate_link(const SpectralProfile& profile, const SiteModel& site,
                         const LinkConfig& cfg, const ProtocolParams& protocol,
                         const std::optional<AOParams>& ao) {
    double r0 = fried_length_m(site, kReferenceWavelengthNm);
    if (ao) {
        ao->validate();
        const double f_g = greenwood_frequency_hz(site, kReferenceWavelengthNm);
        const double f_tg = tracking_greenwood_frequency_hz(site, kReferenceWavelengthNm,
                                                            cfg.receiver_diameter_m);
        r0 = effective_r0_closed_loop_m(*ao, f_tg, f_g, cfg.receiver_diameter_m,
                                        kReferenceWavelengthNm);
    }
    return evaluate_link(profile, r0, cfg, protocol);
}

} // namespace fsqkd
