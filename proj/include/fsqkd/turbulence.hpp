#pragma once
// fsqkd/turbulence.hpp - Atmospheric coherence from Cn2 and wind profiles:
// Fried length, Greenwood frequency, tracking-Greenwood frequency via
// altitude moment integrals.
//
// All types are immutable in use and all operations are pure.

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsqkd/constants.hpp"

namespace fsqkd {

struct Hv57Params {
    double ground_strength = 1.7e-14; ///< A [m^-2/3], ground-layer term
    double v_rms = 21.0;              ///< [m/s] upper-atmosphere RMS wind
};

struct Cn2Sample {
    double altitude_m = 0.0;
    double cn2 = 0.0; ///< [m^-2/3]
};

/// Either the HV5/7 closed form or a user table interpolated linearly.
class Cn2Profile {
public:
    static Cn2Profile hufnagel_valley(Hv57Params params = {});
    static Cn2Profile tabulated(std::vector<Cn2Sample> table);

    /// Cn2 at altitude h >= 0. Tabulated profiles hold the first value below
    /// the table and decay to zero above it.
    double at(double altitude_m) const;

    bool is_tabulated() const { return !table_.empty(); }
    const Hv57Params& hv_params() const { return hv_; }

private:
    Cn2Profile() = default;
    Hv57Params hv_{};
    std::vector<Cn2Sample> table_;
};

/// Optional tabulated Cn2 CSV: `altitude_m,cn2` rows, `#` comments allowed.
Cn2Profile load_cn2_table(std::istream& in, const std::string& source_label = "stream");
Cn2Profile load_cn2_table_file(const std::string& path);

struct BuftonWind {
    double peak_speed = 30.0;          ///< [m/s]
    double center_altitude_m = 9400.0; ///< [m]
    double width_m = 4800.0;           ///< [m]
};

/// Slew-augmented Bufton wind: v(h) = slew_rate*h + ground_speed + bufton(h).
/// The default slew rate is the apparent angular rate of a 600-km circular
/// LEO pass observed at zenith (~7.56 km/s over 600 km).
struct WindModel {
    double ground_speed = 5.0;   ///< [m/s] constant offset
    BuftonWind bufton{};
    double slew_rate = 12.6e-3;  ///< [rad/s] pseudo-wind from platform slew

    double speed_at(double altitude_m) const {
        const double gauss = (altitude_m - bufton.center_altitude_m) / bufton.width_m;
        return slew_rate * altitude_m + ground_speed +
               bufton.peak_speed * std::exp(-gauss * gauss);
    }
};

struct SiteModel {
    Cn2Profile cn2 = Cn2Profile::hufnagel_valley();
    WindModel wind{};
    double zenith_angle_rad = 0.0;    ///< in [0, pi/2)
    double source_altitude_m = 600e3; ///< LEO downlink altitude
    int quadrature_intervals = 2048;  ///< Simpson intervals on the log-altitude grid

    void validate() const; // throws ConfigError
};

/// sec(theta_z) * Integral of Cn2(h) * v(h)^wind_exponent dh over the path.
/// Composite Simpson on a log-spaced altitude grid from 1 m to
/// min(source altitude, 50 km); Cn2 is negligible above 50 km.
double path_moment(const SiteModel& site, double wind_exponent);

/// Fried coherence length [m] at lambda_nm. A vacuum path (zero turbulence
/// integral) yields +infinity.
double fried_length_m(const SiteModel& site, double lambda_nm);

/// Higher-order Greenwood frequency [Hz] at lambda_nm.
double greenwood_frequency_hz(const SiteModel& site, double lambda_nm);

/// Tip/tilt (tracking) Greenwood frequency [Hz] at lambda_nm.
double tracking_greenwood_frequency_hz(const SiteModel& site, double lambda_nm,
                                       double receiver_diameter_m);

/// r(lambda) = r0 (lambda/500 nm)^(6/5), r0 referenced at 500 nm.
inline double scale_fried(double r0_m, double lambda_nm) {
    return r0_m * std::pow(lambda_nm / kReferenceWavelengthNm, 6.0 / 5.0);
}

} // namespace fsqkd
