#pragma once
// fsqkd/qkd.hpp - Radiometric noise counting and the decoy-state BB84
// analytic chain: background probability, gains, QBER, SNR, single-photon
// bounds, key-bit probability, and key rate.
//
// The additive click model Q_n = Y0 + 1 - exp(-eta n) is implemented as
// printed; the Monte Carlo oracle samples the same model.

#include <optional>
#include <string>

#include "fsqkd/ao.hpp"
#include "fsqkd/optics.hpp"
#include "fsqkd/spectral.hpp"
#include "fsqkd/turbulence.hpp"

namespace fsqkd {

struct ProtocolParams {
    double mu = 0.7;               ///< signal mean photon number
    double nu = 0.1;               ///< decoy mean photon number
    double e0 = 0.5;               ///< background error rate (random basis)
    double e_misalignment = 0.01;  ///< polarization cross-talk error e_d
    double f_ec = 1.22;            ///< error-correction inefficiency
    double decoy_fraction = 0.3;   ///< decoy + vacuum pulse fraction N_nu_mu
    double pulse_rate_hz = 10e6;   ///< R_p

    void validate() const {
        if (!(0.0 < nu && nu < mu))
            throw ConfigError("protocol: need 0 < nu < mu (decoy denominators)");
        if (e0 < 0.0 || e0 > 1.0 || e_misalignment < 0.0 || e_misalignment > 1.0)
            throw ConfigError("protocol: error rates must lie in [0, 1]");
        if (f_ec < 1.0) throw ConfigError("protocol: f_ec must be >= 1");
        if (decoy_fraction < 0.0 || decoy_fraction >= 1.0)
            throw ConfigError("protocol: decoy fraction must lie in [0, 1)");
        if (pulse_rate_hz <= 0.0) throw ConfigError("protocol: pulse rate must be positive");
    }
};

/// Diagnostic clamp flags accumulated while evaluating a budget.
struct BudgetFlags {
    bool q1_clamped = false;    ///< decoy Q1 went negative, clamped to 0
    bool y1_degenerate = false; ///< Y1 <= 0 after clamping; key rate forced to 0
    bool e1_clamped = false;    ///< e1 clamped into [0, 0.5]
    bool negative_pkb = false;  ///< raw key-bit probability negative
    bool eval_error = false;    ///< point failed to evaluate (sweep rows)

    bool any() const {
        return q1_clamped || y1_degenerate || e1_clamped || negative_pkb || eval_error;
    }
    std::string to_string() const;
};

/// Fully evaluated channel point.
struct LinkBudget {
    double lambda_nm = 0.0;
    double r0_m = 0.0; ///< 500-nm-referenced Fried length used (effective when AO given)
    Strategy strategy = Strategy::kTurbulenceLimited;
    double strehl = 0.0;
    double omega_fov_sr = 0.0;
    double eta_geo = 0.0;
    double eta_trans = 0.0;
    double eta_fs = 0.0;
    double eta_total = 0.0;
    double n_b = 0.0; ///< background photons per gate at the field stop
    double y0 = 0.0;  ///< per-gate background click probability
    double q_mu = 0.0, q_nu = 0.0;
    double q_1 = 0.0, y_1 = 0.0;
    double e_mu = 0.0, e_nu = 0.0, e_1 = 0.0;
    double snr_mu = 0.0;
    double p_kb = 0.0;     ///< raw key-bit probability, may be negative
    double r_kb_hz = 0.0;  ///< clamped key-bit rate
    BudgetFlags flags;
};

/// Sky photons per detection gate through the spatial/spectral/temporal
/// filters: Int (lambda/4hc) H_b(lambda) dlambda * Omega * pi D_R^2 * dt.
double background_photons(const SpectralProfile& profile, double center_nm, double width_nm,
                          double omega_sr, double receiver_diameter_m, double gate_time_s);

/// Y0 = N_b eta_spec eta_rec eta_det + 4 f_dark dt. A result above 1 signals
/// a nonphysical operating point and throws DomainError.
double background_probability(double n_b, double eta_spectral, double eta_receiver,
                              double eta_detector, double dark_count_rate_hz,
                              double gate_time_s);

/// Additive-model gain Q_n = Y0 + 1 - exp(-eta n).
double gain(double y0, double eta, double mean_photon_number);

/// QBER (e0 Y0 + e_d (1 - exp(-eta n))) / (Y0 + 1 - exp(-eta n)).
/// Throws DomainError when the denominator vanishes (no clicks at all).
double qber(double y0, double eta, double mean_photon_number, double e0, double e_d);

/// First-order DL-strategy QBER from TL quantities, with the additive noise
/// term eps = 4 f_dark dt (1/S - 1); eps vanishes at S = 1.
double qber_dl_approx(double y0_tl, double eta_tl, double mean_photon_number, double e0,
                      double e_d, double strehl, double dark_count_rate_hz,
                      double gate_time_s);

/// SNR_n = Q_n / Y0; +infinity when Y0 = 0.
double snr(double q_n, double y0);

struct DecoyEstimate {
    double q_1 = 0.0;
    double y_1 = 0.0;
    double e_1 = 0.0;
    bool q1_clamped = false;
    bool y1_degenerate = false;
    bool e1_clamped = false;
};

/// Vacuum+weak decoy estimates of the single-photon gain, yield, and error.
/// Q1 and Y1 are clamped below at 0, e1 into [0, 0.5]; clamps are flagged.
DecoyEstimate decoy_estimates(double q_mu, double q_nu, double y0, double mu, double nu,
                              double e_nu, double e0);

/// Binary entropy in bits, with H2(0) = H2(1) = 0 by continuous extension.
double binary_entropy(double x);

/// Raw key-bit probability (1/2)(-Q_mu f_ec H2[E_mu] + Q1 (1 - H2[e1]));
/// may be negative, callers clamp for rate reporting.
double key_bit_probability(double q_mu, double e_mu, double q_1, double e_1, double f_ec);

/// Rearranged form (1/2) Q_mu (-c1 + q c2); algebraically identical.
double key_bit_probability_rearranged(double q_mu, double q, double c1, double c2);

/// R_KB = max(P_KB, 0) * R_p * (1 - N_nu_mu).
double key_bit_rate_hz(double p_kb, double pulse_rate_hz, double decoy_fraction);

/// Full budget at cfg.signal_wavelength_nm for an explicit 500-nm-referenced
/// Fried length.
LinkBudget evaluate_link(const SpectralProfile& profile, double r0_m, const LinkConfig& cfg,
                         const ProtocolParams& protocol);

/// Site-driven budget: r0 from the site moment integrals, replaced by the
/// effective closed-loop r0 when AO parameters are given.
LinkBudget evaluate_link(const SpectralProfile& profile, const SiteModel& site,
                         const LinkConfig& cfg, const ProtocolParams& protocol,
                         const std::optional<AOParams>& ao = std::nullopt);

} // namespace fsqkd
