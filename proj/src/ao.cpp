#include "fsqkd/ao.hpp"

#include <cmath>
#include <numbers>

namespace fsqkd {

double opd_rms_closed_loop_m(const SiteModel& site, const AOParams& ao,
                             double receiver_diameter_m) {
    ao.validate();
    const double f_g = greenwood_frequency_hz(site, kReferenceWavelengthNm);
    const double f_tg =
        tracking_greenwood_frequency_hz(site, kReferenceWavelengthNm, receiver_diameter_m);
    const double phase_variance = rpe_closed_loop_rad2(ao, f_tg, f_g);
    const double scale = kReferenceWavelengthNm * 1e-9 / (2.0 * std::numbers::pi);
    return std::sqrt(phase_variance) * scale;
}

} // namespace fsqkd
