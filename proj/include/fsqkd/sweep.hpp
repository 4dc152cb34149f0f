#pragma once
// fsqkd/sweep.hpp - Parameter sweeps over r0, Strehl, AO bandwidth, or
// wavelength, plus the exhaustive optimal-wavelength search.
//
// Grid points are independent and may be evaluated in parallel; output
// ordering and values are deterministic regardless of the schedule.

#include <optional>
#include <string>
#include <vector>

#include "fsqkd/ao.hpp"
#include "fsqkd/qkd.hpp"

namespace fsqkd {

enum class SweepAxis { kR0, kStrehl, kClosedLoopBandwidth, kWavelength };
enum class SweepSpacing { kLinear, kLog };

const char* to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(const std::string& tag);

struct SweepSpec {
    SweepAxis axis = SweepAxis::kR0;
    double min = 0.05;
    double max = 1.0;
    int points = 25;
    SweepSpacing spacing = SweepSpacing::kLinear;

    std::vector<double> lambdas_nm{1550.0, 781.0, 431.0}; ///< ignored for the wavelength axis
    std::vector<Strategy> strategies{Strategy::kDiffractionLimited,
                                     Strategy::kTurbulenceLimited};

    LinkConfig link;
    ProtocolParams protocol;
    std::optional<SiteModel> site;   ///< turbulence source (fc axis requires it)
    std::optional<double> r0_m;      ///< explicit alternative to the site
    std::optional<AOParams> ao;      ///< applied to the baseline r0; fc axis varies f_c

    void validate() const;
};

/// One (lambda, strategy) evaluation; `error` is set (and eval_error flagged
/// in the budget) when the point failed instead of aborting the sweep.
struct SweepCell {
    LinkBudget budget;
    std::string error;
};

struct SweepRow {
    double axis_value = 0.0;
    std::vector<SweepCell> cells; ///< lambdas-major, strategies-minor order
};

std::vector<SweepRow> run_sweep(const SpectralProfile& profile, const SweepSpec& spec);

struct OptimizeResult {
    bool key_possible = false; ///< false when the key rate is zero over the whole range
    double lambda_opt_nm = 0.0;
    double r_kb_hz = 0.0;
    double step_nm = 0.0;
    std::vector<SweepRow> scan; ///< full TL scan, one row per grid wavelength
};

/// Exhaustive grid argmax of the TL-strategy key-bit rate over
/// [min_nm, max_nm] in steps of step_nm; ties break toward the shorter
/// wavelength. Requires step_nm <= filter width / 2 and the scanned notches
/// to stay within the profile coverage.
OptimizeResult optimize_wavelength(const SpectralProfile& profile, double filter_width_nm,
                                   const LinkConfig& link, const ProtocolParams& protocol,
                                   double r0_m, double min_nm, double max_nm, double step_nm);

} // namespace fsqkd
