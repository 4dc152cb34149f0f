#include "fsqkd/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

#include "fsqkd/errors.hpp"

namespace fsqkd {

Cn2Profile Cn2Profile::hufnagel_valley(Hv57Params params) {
    Cn2Profile p;
    p.hv_ = params;
    return p;
}

Cn2Profile Cn2Profile::tabulated(std::vector<Cn2Sample> table) {
    if (table.size() < 2)
        throw ConfigError("tabulated Cn2 profile needs at least 2 samples");
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].cn2 < 0.0)
            throw ConfigError("tabulated Cn2 profile: negative Cn2 at sample " +
                              std::to_string(i + 1));
        if (i > 0 && table[i].altitude_m <= table[i - 1].altitude_m)
            throw ConfigError("tabulated Cn2 profile: altitudes not strictly increasing at "
                              "sample " + std::to_string(i + 1));
    }
    Cn2Profile p;
    p.table_ = std::move(table);
    return p;
}

double Cn2Profile::at(double altitude_m) const {
    if (altitude_m < 0.0)
        throw DomainError("Cn2 queried at negative altitude " + std::to_string(altitude_m));
    if (!is_tabulated()) {
        const double h = altitude_m;
        const double upper = 0.00594 * std::pow(hv_.v_rms / 27.0, 2) *
                             std::pow(1e-5 * h, 10) * std::exp(-h / 1000.0);
        const double mid = 2.7e-16 * std::exp(-h / 1500.0);
        const double ground = hv_.ground_strength * std::exp(-h / 100.0);
        return upper + mid + ground;
    }
    if (altitude_m <= table_.front().altitude_m) return table_.front().cn2;
    if (altitude_m >= table_.back().altitude_m) {
        return altitude_m == table_.back().altitude_m ? table_.back().cn2 : 0.0;
    }
    auto hi = std::lower_bound(table_.begin(), table_.end(), altitude_m,
                               [](const Cn2Sample& s, double h) { return s.altitude_m < h; });
    if (altitude_m == hi->altitude_m) return hi->cn2;
    const auto lo = std::prev(hi);
    const double t = (altitude_m - lo->altitude_m) / (hi->altitude_m - lo->altitude_m);
    return lo->cn2 + t * (hi->cn2 - lo->cn2);
}

Cn2Profile load_cn2_table(std::istream& in, const std::string& source_label) {
    std::vector<Cn2Sample> table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // strip whitespace
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);
        if (line[0] == '#') continue;
        if (!header_seen) {
            std::string squashed;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) squashed += c;
            if (squashed != "altitude_m,cn2")
                throw ConfigError("'" + source_label + "' line " + std::to_string(line_no) +
                                  ": expected header 'altitude_m,cn2'");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string a, b2, extra;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b2, ','))
            throw ConfigError("'" + source_label + "' line " + std::to_string(line_no) +
                              ": expected 2 comma-separated columns");
        if (std::getline(ss, extra, ','))
            throw ConfigError("'" + source_label + "' line " + std::to_string(line_no) +
                              ": expected 2 columns, found more");
        try {
            table.push_back({std::stod(a), std::stod(b2)});
        } catch (const std::exception&) {
            throw ConfigError("'" + source_label + "' line " + std::to_string(line_no) +
                              ": cannot parse numbers");
        }
    }
    if (!header_seen)
        throw ConfigError("'" + source_label + "': missing header row");
    return Cn2Profile::tabulated(std::move(table));
}

Cn2Profile load_cn2_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open Cn2 table file '" + path + "'");
    return load_cn2_table(in, path);
}

void SiteModel::validate() const {
    if (zenith_angle_rad < 0.0 || zenith_angle_rad >= std::numbers::pi / 2.0)
        throw ConfigError("site: zenith angle must lie in [0, pi/2), got " +
                          std::to_string(zenith_angle_rad) + " rad");
    if (source_altitude_m <= 0.0)
        throw ConfigError("site: source altitude must be positive");
    if (quadrature_intervals < 2)
        throw ConfigError("site: quadrature_intervals must be >= 2");
    if (wind.ground_speed < 0.0 || wind.slew_rate < 0.0 || wind.bufton.peak_speed < 0.0)
        throw ConfigError("site: wind speeds must be non-negative");
}

namespace {

// Cn2 spans ~10 decades between the ground layer and the tropopause bump, so
// integrate on a log grid: Int f(h) dh = Int f(e^u) e^u du, composite Simpson
// in u. Integrand contribution below 1 m and above 50 km is negligible.
constexpr double kQuadratureFloorM = 1.0;
constexpr double kQuadratureCeilingM = 50e3;

template <typename F>
double simpson_log(const F& f, double lo, double hi, int intervals) {
    if (intervals % 2 != 0) ++intervals;
    const double u_lo = std::log(lo);
    const double u_hi = std::log(hi);
    const double du = (u_hi - u_lo) / intervals;
    auto g = [&](double u) {
        const double h = std::exp(u);
        return f(h) * h;
    };
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < intervals; ++i) {
        const double v = g(u_lo + i * du);
        if (i % 2 == 1)
            odd += v;
        else
            even += v;
    }
    return du / 3.0 * (g(u_lo) + g(u_hi) + 4.0 * odd + 2.0 * even);
}

} // namespace

double path_moment(const SiteModel& site, double wind_exponent) {
    site.validate();
    const double ceiling = std::min(site.source_altitude_m, kQuadratureCeilingM);
    if (ceiling <= kQuadratureFloorM) return 0.0; // source below the integration floor
    auto integrand = [&](double h) {
        const double c = site.cn2.at(h);
        if (wind_exponent == 0.0) return c;
        return c * std::pow(site.wind.speed_at(h), wind_exponent);
    };
    const double integral =
        simpson_log(integrand, kQuadratureFloorM, ceiling, site.quadrature_intervals);
    return integral / std::cos(site.zenith_angle_rad);
}

double fried_length_m(const SiteModel& site, double lambda_nm) {
    if (lambda_nm <= 0.0)
        throw DomainError("fried_length: wavelength must be positive");
    const double moment = path_moment(site, 0.0);
    if (moment <= 0.0) return std::numeric_limits<double>::infinity(); // vacuum path
    const double k = 2.0 * std::numbers::pi / (lambda_nm * 1e-9);
    return std::pow(kFriedIntegralCoeff * k * k * moment, -3.0 / 5.0);
}

double greenwood_frequency_hz(const SiteModel& site, double lambda_nm) {
    if (lambda_nm <= 0.0)
        throw DomainError("greenwood_frequency: wavelength must be positive");
    const double moment = path_moment(site, 5.0 / 3.0);
    const double k = 2.0 * std::numbers::pi / (lambda_nm * 1e-9);
    return std::pow(kGreenwoodIntegralCoeff * k * k * moment, 3.0 / 5.0);
}

double tracking_greenwood_frequency_hz(const SiteModel& site, double lambda_nm,
                                       double receiver_diameter_m) {
    if (lambda_nm <= 0.0)
        throw DomainError("tracking_greenwood_frequency: wavelength must be positive");
    if (receiver_diameter_m <= 0.0)
        throw DomainError("tracking_greenwood_frequency: receiver diameter must be positive");
    const double moment = path_moment(site, 2.0);
    const double k = 2.0 * std::numbers::pi / (lambda_nm * 1e-9);
    return kTrackingGreenwoodCoeff * std::pow(receiver_diameter_m, -1.0 / 6.0) * k *
           std::sqrt(moment);
}

} // namespace fsqkd
