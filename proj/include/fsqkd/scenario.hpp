#pragma once
// fsqkd/scenario.hpp - Flat sectioned key=value scenario files and the
// resolved Scenario aggregate consumed by the CLI.
//
// Sections: [transmitter], [receiver], [protocol], [site], [ao], [sweep].
// Every constant defaults to the standard LEO-downlink operating point, so
// an empty file (or no file) is a valid scenario. CLI flags override file
// values.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsqkd/ao.hpp"
#include "fsqkd/qkd.hpp"
#include "fsqkd/sweep.hpp"

namespace fsqkd {

struct Scenario {
    std::string profile_path;                 ///< spectral CSV ([site] spectral_profile)
    std::optional<std::string> cn2_table_path;
    std::optional<double> r0_m;               ///< explicit alternative to the site model
    SiteModel site;

    LinkConfig link;
    ProtocolParams protocol;
    std::optional<AOParams> ao;

    std::vector<double> lambdas_nm;           ///< evaluation wavelengths; empty = signal wavelength
    std::vector<Strategy> strategies;         ///< empty = the receiver strategy

    SweepAxis axis = SweepAxis::kR0;
    double sweep_min = 0.05;
    double sweep_max = 1.0;
    int sweep_points = 25;
    SweepSpacing spacing = SweepSpacing::kLinear;

    std::optional<double> optimize_min_nm;    ///< default: profile coverage minus margins
    std::optional<double> optimize_max_nm;
    std::optional<double> optimize_step_nm;   ///< default: half the filter width

    /// Wavelengths compute/sweep should evaluate.
    std::vector<double> effective_lambdas() const {
        return lambdas_nm.empty() ? std::vector<double>{link.signal_wavelength_nm}
                                  : lambdas_nm;
    }

    /// Strategies compute/sweep should evaluate.
    std::vector<Strategy> effective_strategies() const {
        return strategies.empty() ? std::vector<Strategy>{link.strategy} : strategies;
    }

    /// Builds the sweep spec for the configured axis.
    SweepSpec sweep_spec() const;

    void validate() const;
};

Scenario default_scenario();

/// Parses the INI-style scenario format. Unknown sections or keys are
/// configuration errors. `#` and `;` lines are comments.
Scenario load_scenario(std::istream& in, const std::string& source_label = "scenario");
Scenario load_scenario_file(const std::string& path);

/// Loads the configured spectral profile (and Cn2 table when given).
SpectralProfile load_scenario_profile(const Scenario& scenario);

/// 500-nm-referenced Fried length the scenario evaluates at: the explicit
/// r0, or the site-derived value, AO-corrected when AO is configured.
double resolve_r0(const Scenario& scenario);

} // namespace fsqkd
