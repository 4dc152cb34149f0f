#pragma once
// fsqkd/optics.hpp - Receiver-plane optics: focused spots, fields of view,
// uncorrected Strehl, field-stop strategies, transmitter-receiver geometric
// coupling, and end-to-end channel efficiency.
//
// FOV computations use the solid-angle forms throughout and never require a
// focal length; physical spot diameters are exposed for engineering reports
// only. Pure functions over immutable inputs.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "fsqkd/constants.hpp"
#include "fsqkd/errors.hpp"
#include "fsqkd/spectral.hpp"
#include "fsqkd/turbulence.hpp"

namespace fsqkd {

/// Field-stop sizing strategy: Airy core (DL) or turbulence-broadened spot (TL).
enum class Strategy { kDiffractionLimited, kTurbulenceLimited };

inline const char* to_string(Strategy s) {
    return s == Strategy::kDiffractionLimited ? "dl" : "tl";
}

inline std::optional<Strategy> parse_strategy(const std::string& tag) {
    if (tag == "dl" || tag == "DL") return Strategy::kDiffractionLimited;
    if (tag == "tl" || tag == "TL") return Strategy::kTurbulenceLimited;
    return std::nullopt;
}

struct LinkConfig {
    double transmitter_diameter_m = 0.10;  ///< D_T
    double receiver_diameter_m = 1.0;      ///< D_R
    std::optional<double> focal_length_m{}; ///< only for physical spot diameters
    double range_m = 600e3;                ///< transmitter-receiver distance z

    double eta_spectral = 0.9; ///< spectral filter efficiency
    double eta_receiver = 0.5; ///< receiver optics efficiency
    double eta_detector = 0.8; ///< detector efficiency

    double dark_count_rate_hz = 10.0; ///< f_dark
    double gate_time_s = 1e-9;        ///< temporal detection window
    double filter_width_nm = 1.0;     ///< spectral notch width
    double signal_wavelength_nm = 431.0;
    Strategy strategy = Strategy::kTurbulenceLimited;

    void validate() const {
        if (transmitter_diameter_m <= 0.0 || receiver_diameter_m <= 0.0)
            throw ConfigError("link: aperture diameters must be positive");
        if (focal_length_m && *focal_length_m <= 0.0)
            throw ConfigError("link: focal length must be positive when given");
        if (range_m < 0.0) throw ConfigError("link: range must be non-negative");
        for (double eta : {eta_spectral, eta_receiver, eta_detector})
            if (eta <= 0.0 || eta > 1.0)
                throw ConfigError("link: each optical efficiency must lie in (0, 1]");
        if (dark_count_rate_hz < 0.0) throw ConfigError("link: dark rate must be >= 0");
        if (gate_time_s <= 0.0 || filter_width_nm <= 0.0)
            throw ConfigError("link: gate time and filter width must be positive");
        if (signal_wavelength_nm <= 0.0)
            throw ConfigError("link: signal wavelength must be positive");
    }
};

/// Diffraction-limited spot diameter 2.44 lambda f / D_R [m].
inline double dl_spot_diameter_m(const LinkConfig& cfg, double lambda_nm) {
    if (!cfg.focal_length_m)
        throw ConfigError("spot diameter requires a focal length");
    return kAiryDiameterFactor * (lambda_nm * 1e-9) * *cfg.focal_length_m /
           cfg.receiver_diameter_m;
}

/// Uncorrected-turbulence on-axis Strehl: [1 + (D_R/r)^(5/3)]^(-6/5), in (0, 1].
inline double strehl_uncorrected(double receiver_diameter_m, double fried_length_m) {
    return std::pow(1.0 + std::pow(receiver_diameter_m / fried_length_m, 5.0 / 3.0),
                    -6.0 / 5.0);
}

/// Turbulence-limited spot: DL spot / sqrt(S) with S at r(lambda).
inline double tl_spot_diameter_m(const LinkConfig& cfg, double lambda_nm,
                                 double fried_length_m) {
    return dl_spot_diameter_m(cfg, lambda_nm) /
           std::sqrt(strehl_uncorrected(cfg.receiver_diameter_m, fried_length_m));
}

/// Diffraction-limited solid-angle FOV: pi (1.22 lambda / D_R)^2 [sr].
inline double dl_fov_sr(double receiver_diameter_m, double lambda_nm) {
    const double half_angle = kAiryRadiusFactor * (lambda_nm * 1e-9) / receiver_diameter_m;
    return std::numbers::pi * half_angle * half_angle;
}

/// Turbulence-limited FOV: DL FOV / S, with S evaluated at r(lambda) scaled
/// from the 500-nm-referenced r0.
inline double tl_fov_sr(double receiver_diameter_m, double lambda_nm, double r0_m) {
    const double strehl = strehl_uncorrected(receiver_diameter_m, scale_fried(r0_m, lambda_nm));
    return dl_fov_sr(receiver_diameter_m, lambda_nm) / strehl;
}

/// Gaussian-beam aperture-to-aperture capture fraction,
/// 1 - exp(-(1/2) D_R^2 / w^2(lambda, z)), with w0 = 0.7 D_T / 2.
/// Turbulence-induced beam spreading is negligible on the downlink.
inline double geometric_coupling(const LinkConfig& cfg, double lambda_nm) {
    const double lambda_m = lambda_nm * 1e-9;
    const double w0 = 0.7 * cfg.transmitter_diameter_m / 2.0;
    const double rayleigh = std::numbers::pi * w0 * w0 / lambda_m;
    const double z_ratio = cfg.range_m / rayleigh;
    const double w2 = w0 * w0 * (1.0 + z_ratio * z_ratio);
    const double d2 = cfg.receiver_diameter_m * cfg.receiver_diameter_m;
    return 1.0 - std::exp(-0.5 * d2 / w2);
}

/// Field-stop transmission: TL passes the Airy-core 84% always; DL passes
/// 84% of the turbulence-broadened spot, i.e. 0.84 S.
inline double field_stop_efficiency(Strategy strategy, double strehl) {
    if (strehl <= 0.0 || strehl > 1.0)
        throw DomainError("field_stop_efficiency: Strehl must lie in (0, 1]");
    return strategy == Strategy::kTurbulenceLimited ? kAiryCoreFraction
                                                    : kAiryCoreFraction * strehl;
}

/// Total channel efficiency eta_geo * eta_trans * eta_FS * eta_spec * eta_rec * eta_det.
inline double channel_efficiency(const LinkConfig& cfg, const SpectralProfile& profile,
                                 double r0_m, double lambda_nm) {
    const double strehl =
        strehl_uncorrected(cfg.receiver_diameter_m, scale_fried(r0_m, lambda_nm));
    return geometric_coupling(cfg, lambda_nm) * profile.transmission_at(lambda_nm) *
           field_stop_efficiency(cfg.strategy, strehl) * cfg.eta_spectral * cfg.eta_receiver *
           cfg.eta_detector;
}

} // namespace fsqkd
