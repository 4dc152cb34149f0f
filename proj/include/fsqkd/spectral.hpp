#pragma once
// fsqkd/spectral.hpp - Tabulated atmospheric transmission and sky spectral
// radiance: ingestion, validation, interpolation, and band integration.
//
// Canonical radiance unit is W m^-2 sr^-1 nm^-1. Input files declare their
// unit in a `# unit=...` header and are converted on load.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fsqkd {

enum class RadianceUnit {
    kWattPerM2SrNm,  ///< W m^-2 sr^-1 nm^-1 (canonical)
    kWattPerCm2SrUm, ///< W cm^-2 sr^-1 um^-1 (common radiative-transfer output)
};

const char* to_string(RadianceUnit unit);
std::optional<RadianceUnit> parse_radiance_unit(const std::string& tag);

struct SpectralSample {
    double wavelength_nm = 0.0;
    double transmission = 0.0; ///< unitless, in [0, 1]
    double radiance = 0.0;     ///< W m^-2 sr^-1 nm^-1
};

/// Immutable after construction; safe for shared concurrent reads.
class SpectralProfile {
public:
    /// Samples must be strictly increasing in wavelength (at least two),
    /// with transmission in [0, 1] and radiance >= 0. Radiance is expected
    /// already converted to the canonical unit; `declared_unit` is kept as
    /// provenance metadata only.
    SpectralProfile(std::vector<SpectralSample> samples, std::string source_label,
                    RadianceUnit declared_unit);

    const std::vector<SpectralSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    const std::string& source() const { return source_; }
    RadianceUnit declared_unit() const { return declared_unit_; }

    double min_wavelength_nm() const { return samples_.front().wavelength_nm; }
    double max_wavelength_nm() const { return samples_.back().wavelength_nm; }
    bool covers(double lambda_nm) const {
        return lambda_nm >= min_wavelength_nm() && lambda_nm <= max_wavelength_nm();
    }

    /// Linear interpolation; exact at sample points. Throws DomainError when
    /// lambda_nm lies outside the tabulated range.
    double transmission_at(double lambda_nm) const;
    double radiance_at(double lambda_nm) const;

    /// Integral of weight(lambda) * radiance(lambda) d(lambda) over the notch
    /// [center - width/2, center + width/2]. Segment-wise Simpson on the
    /// union of tabulated nodes and the notch endpoints: exact for the
    /// piecewise-linear data model with any weight up to linear in lambda,
    /// so no tolerance knob is needed.
    double band_integral(double center_nm, double width_nm,
                         const std::function<double(double)>& weight) const;

private:
    double interpolate(double lambda_nm, bool radiance) const;

    std::vector<SpectralSample> samples_;
    std::string source_;
    RadianceUnit declared_unit_;
};

/// Parses the spectral CSV format:
///   # unit=<W_m2_sr_nm | W_cm2_sr_um>
///   wavelength_nm,transmission,radiance
///   <numeric rows>
/// `#`-prefixed comment lines are allowed anywhere; LF or CRLF endings.
/// `fallback_unit` applies only when the file has no unit header.
SpectralProfile load_profile(std::istream& in, const std::string& source_label = "stream",
                             std::optional<RadianceUnit> fallback_unit = std::nullopt);
SpectralProfile load_profile_file(const std::string& path);

/// Emits the same CSV format (canonical unit, full precision).
void write_profile_csv(std::ostream& out, const SpectralProfile& profile);

/// Synthetic demonstration sky, 400-1600 nm: smooth continuum rising toward
/// short wavelengths, a broad radiance dip at 431 nm and a narrow one at
/// 405 nm. Lets every workflow run without site-measured spectra.
SpectralProfile demo_sky_profile();

} // namespace fsqkd
