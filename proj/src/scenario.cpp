#include "fsqkd/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

namespace fsqkd {

SweepSpec Scenario::sweep_spec() const {
    SweepSpec spec;
    spec.axis = axis;
    spec.min = sweep_min;
    spec.max = sweep_max;
    spec.points = sweep_points;
    spec.spacing = spacing;
    spec.lambdas_nm = effective_lambdas();
    spec.strategies = effective_strategies();
    spec.link = link;
    spec.protocol = protocol;
    spec.ao = ao;
    if (r0_m)
        spec.r0_m = r0_m;
    else
        spec.site = site;
    return spec;
}

void Scenario::validate() const {
    link.validate();
    protocol.validate();
    if (!r0_m) site.validate();
    if (ao) {
        ao->validate();
        if (r0_m)
            throw ConfigError("scenario: AO correction needs a site model; the Greenwood "
                              "frequencies cannot be derived from an explicit r0");
    }
    if (r0_m && *r0_m <= 0.0) throw ConfigError("scenario: r0 must be positive");
    for (double lam : lambdas_nm)
        if (lam <= 0.0) throw ConfigError("scenario: wavelengths must be positive");
}

Scenario default_scenario() { return Scenario{}; }

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_number(const std::string& value, const std::string& where) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse number '" + value + "'");
    }
    if (pos != value.size())
        throw ConfigError(where + ": trailing characters in number '" + value + "'");
    return v;
}

int to_int(const std::string& value, const std::string& where) {
    const double v = to_number(value, where);
    if (v != std::floor(v))
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    return static_cast<int>(v);
}

std::vector<double> to_number_list(const std::string& value, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(to_number(trim(tok), where));
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

std::vector<Strategy> to_strategies(const std::string& value, const std::string& where) {
    if (value == "both")
        return {Strategy::kDiffractionLimited, Strategy::kTurbulenceLimited};
    const auto s = parse_strategy(value);
    if (!s) throw ConfigError(where + ": expected dl, tl, or both, got '" + value + "'");
    return {*s};
}

} // namespace

Scenario load_scenario(std::istream& in, const std::string& source_label) {
    Scenario sc;
    bool site_turbulence_keys = false;

    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const std::string where = "'" + source_label + "' line " + std::to_string(line_no);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "transmitter" && section != "receiver" && section != "protocol" &&
                section != "site" && section != "ao" && section != "sweep")
                throw ConfigError(where + ": unknown section [" + section + "]");
            if (section == "ao" && !sc.ao) sc.ao = AOParams{};
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(where + ": empty key or value");
        if (section.empty())
            throw ConfigError(where + ": key '" + key + "' outside any section");

        auto unknown = [&]() -> ConfigError {
            return ConfigError(where + ": unknown key '" + key + "' in section [" + section +
                               "]");
        };

        if (section == "transmitter") {
            if (key == "aperture_m") sc.link.transmitter_diameter_m = to_number(value, where);
            else if (key == "range_m") sc.link.range_m = to_number(value, where);
            else throw unknown();
        } else if (section == "receiver") {
            if (key == "aperture_m") sc.link.receiver_diameter_m = to_number(value, where);
            else if (key == "focal_length_m") sc.link.focal_length_m = to_number(value, where);
            else if (key == "eta_spectral") sc.link.eta_spectral = to_number(value, where);
            else if (key == "eta_receiver") sc.link.eta_receiver = to_number(value, where);
            else if (key == "eta_detector") sc.link.eta_detector = to_number(value, where);
            else if (key == "dark_count_rate_hz")
                sc.link.dark_count_rate_hz = to_number(value, where);
            else if (key == "gate_time_s") sc.link.gate_time_s = to_number(value, where);
            else if (key == "filter_width_nm")
                sc.link.filter_width_nm = to_number(value, where);
            else if (key == "wavelength_nm")
                sc.link.signal_wavelength_nm = to_number(value, where);
            else if (key == "strategy") {
                const auto s = parse_strategy(value);
                if (!s) throw ConfigError(where + ": expected dl or tl, got '" + value + "'");
                sc.link.strategy = *s;
            } else throw unknown();
        } else if (section == "protocol") {
            if (key == "mu") sc.protocol.mu = to_number(value, where);
            else if (key == "nu") sc.protocol.nu = to_number(value, where);
            else if (key == "e0") sc.protocol.e0 = to_number(value, where);
            else if (key == "e_misalignment")
                sc.protocol.e_misalignment = to_number(value, where);
            else if (key == "f_ec") sc.protocol.f_ec = to_number(value, where);
            else if (key == "decoy_fraction")
                sc.protocol.decoy_fraction = to_number(value, where);
            else if (key == "pulse_rate_hz") sc.protocol.pulse_rate_hz = to_number(value, where);
            else throw unknown();
        } else if (section == "site") {
            if (key == "spectral_profile") sc.profile_path = value;
            else if (key == "cn2_table") {
                sc.cn2_table_path = value;
                site_turbulence_keys = true;
            } else if (key == "r0_m") sc.r0_m = to_number(value, where);
            else if (key == "hv_ground_strength") {
                Hv57Params p = sc.site.cn2.hv_params();
                p.ground_strength = to_number(value, where);
                sc.site.cn2 = Cn2Profile::hufnagel_valley(p);
                site_turbulence_keys = true;
            } else if (key == "hv_v_rms") {
                Hv57Params p = sc.site.cn2.hv_params();
                p.v_rms = to_number(value, where);
                sc.site.cn2 = Cn2Profile::hufnagel_valley(p);
                site_turbulence_keys = true;
            } else if (key == "wind_ground_speed") {
                sc.site.wind.ground_speed = to_number(value, where);
                site_turbulence_keys = true;
            } else if (key == "wind_slew_rate") {
                sc.site.wind.slew_rate = to_number(value, where);
                site_turbulence_keys = true;
            } else if (key == "zenith_angle_deg") {
                sc.site.zenith_angle_rad = to_number(value, where) * std::numbers::pi / 180.0;
                site_turbulence_keys = true;
            } else if (key == "source_altitude_m") {
                sc.site.source_altitude_m = to_number(value, where);
                site_turbulence_keys = true;
            } else if (key == "quadrature_intervals") {
                sc.site.quadrature_intervals = to_int(value, where);
                site_turbulence_keys = true;
            } else throw unknown();
        } else if (section == "ao") {
            if (key == "f_tc") sc.ao->tracking_bandwidth_hz = to_number(value, where);
            else if (key == "f_c") sc.ao->closed_loop_bandwidth_hz = to_number(value, where);
            else throw unknown();
        } else if (section == "sweep") {
            if (key == "axis") {
                const auto a = parse_sweep_axis(value);
                if (!a)
                    throw ConfigError(where + ": expected r0, strehl, fc, or wavelength, "
                                      "got '" + value + "'");
                sc.axis = *a;
            } else if (key == "min") sc.sweep_min = to_number(value, where);
            else if (key == "max") sc.sweep_max = to_number(value, where);
            else if (key == "points") sc.sweep_points = to_int(value, where);
            else if (key == "spacing") {
                if (value == "linear") sc.spacing = SweepSpacing::kLinear;
                else if (value == "log") sc.spacing = SweepSpacing::kLog;
                else throw ConfigError(where + ": expected linear or log, got '" + value + "'");
            } else if (key == "lambdas_nm") sc.lambdas_nm = to_number_list(value, where);
            else if (key == "strategy") sc.strategies = to_strategies(value, where);
            else if (key == "optimize_min_nm") sc.optimize_min_nm = to_number(value, where);
            else if (key == "optimize_max_nm") sc.optimize_max_nm = to_number(value, where);
            else if (key == "optimize_step_nm") sc.optimize_step_nm = to_number(value, where);
            else throw unknown();
        }
    }

    if (sc.r0_m && site_turbulence_keys)
        throw ConfigError("'" + source_label + "': give either r0_m or site turbulence keys, "
                          "not both");
    if (sc.cn2_table_path) sc.site.cn2 = load_cn2_table_file(*sc.cn2_table_path);
    sc.validate();
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    return load_scenario(in, path);
}

SpectralProfile load_scenario_profile(const Scenario& scenario) {
    if (scenario.profile_path.empty())
        throw ConfigError("no spectral profile configured; set [site] spectral_profile "
                          "(the repository ships data/demo_sky.csv)");
    return load_profile_file(scenario.profile_path);
}

double resolve_r0(const Scenario& scenario) {
    if (scenario.r0_m) return *scenario.r0_m;
    if (!scenario.ao) return fried_length_m(scenario.site, kReferenceWavelengthNm);
    const double f_g = greenwood_frequency_hz(scenario.site, kReferenceWavelengthNm);
    const double f_tg = tracking_greenwood_frequency_hz(scenario.site, kReferenceWavelengthNm,
                                                        scenario.link.receiver_diameter_m);
    return effective_r0_closed_loop_m(*scenario.ao, f_tg, f_g,
                                      scenario.link.receiver_diameter_m,
                                      kReferenceWavelengthNm);
}

} // namespace fsqkd
