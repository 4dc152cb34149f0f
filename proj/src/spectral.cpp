#include "fsqkd/spectral.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fsqkd/errors.hpp"

namespace fsqkd {

const char* to_string(RadianceUnit unit) {
    switch (unit) {
        case RadianceUnit::kWattPerM2SrNm: return "W_m2_sr_nm";
        case RadianceUnit::kWattPerCm2SrUm: return "W_cm2_sr_um";
    }
    return "?";
}

std::optional<RadianceUnit> parse_radiance_unit(const std::string& tag) {
    if (tag == "W_m2_sr_nm") return RadianceUnit::kWattPerM2SrNm;
    if (tag == "W_cm2_sr_um") return RadianceUnit::kWattPerCm2SrUm;
    return std::nullopt;
}

SpectralProfile::SpectralProfile(std::vector<SpectralSample> samples,
                                 std::string source_label, RadianceUnit declared_unit)
    : samples_(std::move(samples)), source_(std::move(source_label)),
      declared_unit_(declared_unit) {
    if (samples_.size() < 2)
        throw ConfigError("spectral profile '" + source_ + "': needs at least 2 samples, got " +
                          std::to_string(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        const std::string where =
            "spectral profile '" + source_ + "' sample " + std::to_string(i + 1);
        if (!std::isfinite(s.wavelength_nm) || !std::isfinite(s.transmission) ||
            !std::isfinite(s.radiance))
            throw ConfigError(where + ": non-finite value");
        if (i > 0 && s.wavelength_nm <= samples_[i - 1].wavelength_nm)
            throw ConfigError(where + ": wavelengths not strictly increasing (" +
                              std::to_string(s.wavelength_nm) + " nm after " +
                              std::to_string(samples_[i - 1].wavelength_nm) + " nm)");
        if (s.transmission < 0.0 || s.transmission > 1.0)
            throw ConfigError(where + ": transmission " + std::to_string(s.transmission) +
                              " outside [0, 1]");
        if (s.radiance < 0.0)
            throw ConfigError(where + ": negative radiance " + std::to_string(s.radiance));
    }
}

double SpectralProfile::interpolate(double lambda_nm, bool radiance) const {
    if (!covers(lambda_nm))
        throw DomainError("wavelength " + std::to_string(lambda_nm) +
                          " nm outside tabulated range [" +
                          std::to_string(min_wavelength_nm()) + ", " +
                          std::to_string(max_wavelength_nm()) + "] nm of '" + source_ + "'");
    auto hi = std::lower_bound(samples_.begin(), samples_.end(), lambda_nm,
                               [](const SpectralSample& s, double x) {
                                   return s.wavelength_nm < x;
                               });
    if (hi == samples_.begin()) hi = std::next(hi);
    const auto lo = std::prev(hi);
    if (lambda_nm == lo->wavelength_nm) return radiance ? lo->radiance : lo->transmission;
    if (lambda_nm == hi->wavelength_nm) return radiance ? hi->radiance : hi->transmission;
    const double t = (lambda_nm - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
    const double a = radiance ? lo->radiance : lo->transmission;
    const double b = radiance ? hi->radiance : hi->transmission;
    return a + t * (b - a);
}

double SpectralProfile::transmission_at(double lambda_nm) const {
    return interpolate(lambda_nm, false);
}

double SpectralProfile::radiance_at(double lambda_nm) const {
    return interpolate(lambda_nm, true);
}

double SpectralProfile::band_integral(double center_nm, double width_nm,
                                      const std::function<double(double)>& weight) const {
    if (width_nm <= 0.0)
        throw DomainError("band integral: width must be positive, got " +
                          std::to_string(width_nm) + " nm");
    const double a = center_nm - width_nm / 2.0;
    const double b = center_nm + width_nm / 2.0;
    if (a < min_wavelength_nm() || b > max_wavelength_nm())
        throw DomainError("band integral: notch [" + std::to_string(a) + ", " +
                          std::to_string(b) + "] nm exceeds tabulated range of '" + source_ +
                          "'");
    // Union of tabulated nodes inside (a, b) with the notch endpoints.
    std::vector<double> nodes;
    nodes.push_back(a);
    auto it = std::upper_bound(samples_.begin(), samples_.end(), a,
                               [](double x, const SpectralSample& s) {
                                   return x < s.wavelength_nm;
                               });
    for (; it != samples_.end() && it->wavelength_nm < b; ++it)
        nodes.push_back(it->wavelength_nm);
    nodes.push_back(b);

    // Simpson per segment: the radiance is linear between union nodes, so
    // the rule is exact whenever the weight is at most linear in lambda
    // (the photon-count weight lambda/4hc included).
    double integral = 0.0;
    double f_prev = weight(nodes.front()) * radiance_at(nodes.front());
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double mid = 0.5 * (nodes[i - 1] + nodes[i]);
        const double f_mid = weight(mid) * radiance_at(mid);
        const double f = weight(nodes[i]) * radiance_at(nodes[i]);
        integral += (f_prev + 4.0 * f_mid + f) * (nodes[i] - nodes[i - 1]) / 6.0;
        f_prev = f;
    }
    return integral;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& tok, const std::string& where) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse number '" + tok + "'");
    }
    if (pos != tok.size())
        throw ConfigError(where + ": trailing characters in number '" + tok + "'");
    return v;
}

} // namespace

SpectralProfile load_profile(std::istream& in, const std::string& source_label,
                             std::optional<RadianceUnit> fallback_unit) {
    std::optional<RadianceUnit> unit;
    bool header_seen = false;
    std::vector<SpectralSample> samples;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back(); // CRLF
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "'" + source_label + "' line " + std::to_string(line_no);
        if (line[0] == '#') {
            const std::string body = trim(line.substr(1));
            if (body.rfind("unit=", 0) == 0) {
                const std::string tag = trim(body.substr(5));
                unit = parse_radiance_unit(tag);
                if (!unit)
                    throw ConfigError(where + ": unknown radiance unit tag '" + tag + "'");
            }
            continue;
        }
        if (!header_seen) {
            // Column header row is mandatory and fixed.
            std::string squashed;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) squashed += c;
            if (squashed != "wavelength_nm,transmission,radiance")
                throw ConfigError(where + ": expected header row "
                                  "'wavelength_nm,transmission,radiance', got '" + line + "'");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        double cols[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(ss, tok, ','))
                throw ConfigError(where + ": expected 3 comma-separated columns");
            cols[c] = parse_number(trim(tok), where);
        }
        if (std::getline(ss, tok, ','))
            throw ConfigError(where + ": expected 3 columns, found more");
        samples.push_back({cols[0], cols[1], cols[2]});
    }
    if (!header_seen)
        throw ConfigError("'" + source_label + "': missing header row");
    if (!unit) unit = fallback_unit;
    if (!unit)
        throw ConfigError("'" + source_label +
                          "': no '# unit=' header and no fallback unit given");

    // 1 W cm^-2 sr^-1 um^-1 = 1e4 W m^-2 sr^-1 um^-1 = 10 W m^-2 sr^-1 nm^-1.
    if (*unit == RadianceUnit::kWattPerCm2SrUm)
        for (auto& s : samples) s.radiance *= 10.0;

    return SpectralProfile(std::move(samples), source_label, *unit);
}

SpectralProfile load_profile_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open spectral profile file '" + path + "'");
    return load_profile(in, path);
}

void write_profile_csv(std::ostream& out, const SpectralProfile& profile) {
    out << "# unit=" << to_string(RadianceUnit::kWattPerM2SrNm) << "\n";
    out << "# source=" << profile.source() << "\n";
    out << "wavelength_nm,transmission,radiance\n";
    char buf[128];
    for (const auto& s : profile.samples()) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", s.wavelength_nm, s.transmission,
                      s.radiance);
        out << buf;
    }
}

namespace {

double demo_radiance(double lam) {
    const double continuum = 0.015 + 0.11 * std::exp(-std::pow((lam - 480.0) / 260.0, 2)) +
                             0.20 * std::exp(-std::pow((lam - 385.0) / 40.0, 2));
    const double broad_dip = 1.0 - 0.55 * std::exp(-std::pow((lam - 431.0) / 3.0, 2));
    const double narrow_dip = 1.0 - 0.92 * std::exp(-std::pow((lam - 405.0) / 0.06, 2));
    return continuum * broad_dip * narrow_dip;
}

double demo_transmission(double lam) {
    return 0.82 + 0.10 * std::tanh((lam - 500.0) / 400.0);
}

} // namespace

SpectralProfile demo_sky_profile() {
    std::vector<double> grid;
    auto fill = [&grid](double lo, double hi, double step) {
        for (double x = lo; x < hi - 1e-9; x += step) grid.push_back(x);
    };
    fill(400.0, 403.0, 0.2);
    fill(403.0, 407.0, 0.01); // resolves the narrow 405-nm dip
    fill(407.0, 440.0, 0.2);
    fill(440.0, 1600.0, 2.0);
    grid.push_back(1600.0);

    std::vector<SpectralSample> samples;
    samples.reserve(grid.size());
    for (double lam : grid)
        samples.push_back({lam, demo_transmission(lam), demo_radiance(lam)});
    return SpectralProfile(std::move(samples), "demo-sky", RadianceUnit::kWattPerM2SrNm);
}

} // namespace fsqkd
