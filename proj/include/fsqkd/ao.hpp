#pragma once
// fsqkd/ao.hpp - Adaptive-optics performance algebra: residual phase error,
// OPD variance, effective closed-loop Fried length, effective open-loop
// bandwidth, and Strehl/FOV as functions of residual OPD.
//
// Closed-loop expressions take Greenwood frequencies referenced at 500 nm;
// the (lambda0/lambda) prefactors apply the wavelength scaling internally,
// so passing frequencies already scaled to the signal wavelength would
// double-count it.

#include <cmath>
#include <limits>
#include <numbers>

#include "fsqkd/constants.hpp"
#include "fsqkd/errors.hpp"
#include "fsqkd/optics.hpp"
#include "fsqkd/turbulence.hpp"

namespace fsqkd {

struct AOParams {
    double tracking_bandwidth_hz = 60.0;     ///< f_tc, tip/tilt loop
    double closed_loop_bandwidth_hz = 200.0; ///< f_c, higher-order loop

    void validate() const {
        if (tracking_bandwidth_hz <= 0.0 || closed_loop_bandwidth_hz <= 0.0)
            throw ConfigError("ao: loop bandwidths must be positive");
    }
};

// Reference operating points: a 60-Hz tracking loop with the field-tested
// 130-Hz higher-order loop and the 200/500-Hz design studies.
inline constexpr AOParams kAoPreset130{60.0, 130.0};
inline constexpr AOParams kAoPreset200{60.0, 200.0};
inline constexpr AOParams kAoPreset500{60.0, 500.0};

/// Residual wavefront error; the OPD form is wavelength-independent.
struct ResidualError {
    double phase_variance_rad2 = 0.0;
    double opd_variance_m2 = 0.0;
    double wavelength_nm = kReferenceWavelengthNm; ///< wavelength of the phase figure
};

inline ResidualError residual_from_phase(double phase_variance_rad2, double lambda_nm) {
    const double scale = lambda_nm * 1e-9 / (2.0 * std::numbers::pi);
    return {phase_variance_rad2, phase_variance_rad2 * scale * scale, lambda_nm};
}

/// Open-loop residual phase variance 1.03 (D_R / r(lambda))^(5/3) [rad^2].
inline double rpe_open_loop_rad2(double receiver_diameter_m, double fried_length_m) {
    return kApertureRpeCoeff * std::pow(receiver_diameter_m / fried_length_m, 5.0 / 3.0);
}

/// Closed-loop residual phase variance: tracking plus higher-order servo lag,
/// ((pi/2) f_TG/f_tc)^2 + (f_G/f_c)^(5/3) [rad^2].
inline double rpe_closed_loop_rad2(const AOParams& ao, double f_tg_hz, double f_g_hz) {
    const double tracking =
        std::numbers::pi / 2.0 * f_tg_hz / ao.tracking_bandwidth_hz;
    const double higher = std::pow(f_g_hz / ao.closed_loop_bandwidth_hz, 5.0 / 3.0);
    return tracking * tracking + higher;
}

/// Open-loop RMS OPD [m]: sqrt(1.03) (lambda0/2pi) (D_R/r0)^(5/6).
inline double opd_rms_open_loop_m(double r0_m, double receiver_diameter_m) {
    const double scale = kReferenceWavelengthNm * 1e-9 / (2.0 * std::numbers::pi);
    return std::sqrt(kApertureRpeCoeff) * scale *
           std::pow(receiver_diameter_m / r0_m, 5.0 / 6.0);
}

/// Closed-loop RMS OPD [m] from the site moment integrals (evaluated through
/// the 500-nm Greenwood frequencies, converted by lambda0/2pi).
double opd_rms_closed_loop_m(const SiteModel& site, const AOParams& ao,
                             double receiver_diameter_m);

/// Effective 500-nm-referenced Fried length whose open-loop residual equals
/// the closed-loop residual. f_tg_hz and f_g_hz are the 500-nm values; with
/// lambda_nm = 500 this is the wavelength-independent effective r0.
inline double effective_r0_closed_loop_m(const AOParams& ao, double f_tg_hz, double f_g_hz,
                                         double receiver_diameter_m, double lambda_nm) {
    const double residual = rpe_closed_loop_rad2(ao, f_tg_hz, f_g_hz);
    return std::pow(kApertureRpeCoeff, 3.0 / 5.0) *
           std::pow(kReferenceWavelengthNm / lambda_nm, 6.0 / 5.0) * receiver_diameter_m *
           std::pow(residual, -3.0 / 5.0);
}

/// Closed-loop bandwidth at which AO stops improving on open loop; the lower
/// axis bound for bandwidth sweeps. Throws DomainError when the tracking
/// residual alone already exceeds the open-loop turbulence.
inline double effective_fc_open_loop_hz(double r0_m, double receiver_diameter_m,
                                        double lambda_nm, double f_tg_hz, double f_g_hz,
                                        double f_tc_hz) {
    const double turbulence = kApertureRpeCoeff *
                              std::pow(receiver_diameter_m / r0_m, 5.0 / 3.0) *
                              std::pow(kReferenceWavelengthNm / lambda_nm, 2.0);
    const double tracking = std::numbers::pi / 2.0 * f_tg_hz / f_tc_hz;
    const double bracket = turbulence - tracking * tracking;
    if (bracket <= 0.0)
        throw DomainError("effective_fc_open_loop: tracking residual alone exceeds the "
                          "open-loop turbulence error");
    return f_g_hz * std::pow(bracket, -3.0 / 5.0);
}

/// Strehl versus residual OPD: [1 + (1/1.03) sigma^2 (2pi/lambda)^2]^(-6/5).
inline double strehl_from_opd(double opd_rms_m, double lambda_nm) {
    if (opd_rms_m < 0.0) throw DomainError("strehl_from_opd: OPD must be >= 0");
    const double phase = opd_rms_m * 2.0 * std::numbers::pi / (lambda_nm * 1e-9);
    return std::pow(1.0 + phase * phase / kApertureRpeCoeff, -6.0 / 5.0);
}

/// Inverse of strehl_from_opd; S = 1 maps to zero OPD.
inline double opd_from_strehl_m(double strehl, double lambda_nm) {
    if (strehl <= 0.0 || strehl > 1.0)
        throw DomainError("opd_from_strehl: Strehl must lie in (0, 1]");
    const double phase2 = kApertureRpeCoeff * (std::pow(strehl, -5.0 / 6.0) - 1.0);
    return std::sqrt(std::max(phase2, 0.0)) * (lambda_nm * 1e-9) /
           (2.0 * std::numbers::pi);
}

/// 500-nm-referenced r0 with open-loop RMS OPD equal to opd_rms_m
/// (inverse of opd_rms_open_loop_m); zero OPD maps to infinity.
inline double r0_from_opd_m(double opd_rms_m, double receiver_diameter_m) {
    if (opd_rms_m < 0.0) throw DomainError("r0_from_opd: OPD must be >= 0");
    if (opd_rms_m == 0.0) return std::numeric_limits<double>::infinity();
    const double scale = kReferenceWavelengthNm * 1e-9 / (2.0 * std::numbers::pi);
    return receiver_diameter_m *
           std::pow(opd_rms_m / (std::sqrt(kApertureRpeCoeff) * scale), -6.0 / 5.0);
}

/// Turbulence-limited FOV parameterized by residual OPD [sr].
inline double tl_fov_from_opd_sr(double receiver_diameter_m, double lambda_nm,
                                 double opd_rms_m) {
    return dl_fov_sr(receiver_diameter_m, lambda_nm) / strehl_from_opd(opd_rms_m, lambda_nm);
}

} // namespace fsqkd
