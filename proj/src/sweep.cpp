#include "fsqkd/sweep.hpp"

#include <cmath>
#include <thread>

#include "fsqkd/parallel.hpp"

namespace fsqkd {

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::kR0: return "r0";
        case SweepAxis::kStrehl: return "strehl";
        case SweepAxis::kClosedLoopBandwidth: return "fc";
        case SweepAxis::kWavelength: return "wavelength";
    }
    return "?";
}

std::optional<SweepAxis> parse_sweep_axis(const std::string& tag) {
    if (tag == "r0") return SweepAxis::kR0;
    if (tag == "strehl") return SweepAxis::kStrehl;
    if (tag == "fc") return SweepAxis::kClosedLoopBandwidth;
    if (tag == "wavelength") return SweepAxis::kWavelength;
    return std::nullopt;
}

void SweepSpec::validate() const {
    if (!(min < max)) throw ConfigError("sweep: need min < max");
    if (points < 2) throw ConfigError("sweep: need at least 2 points");
    if (spacing == SweepSpacing::kLog && min <= 0.0)
        throw ConfigError("sweep: log spacing requires min > 0");
    if (axis != SweepAxis::kWavelength && lambdas_nm.empty())
        throw ConfigError("sweep: need at least one wavelength");
    if (strategies.empty()) throw ConfigError("sweep: need at least one strategy");
    if (axis == SweepAxis::kClosedLoopBandwidth && (!site || !ao))
        throw ConfigError("sweep: the fc axis needs a site model and AO parameters");
    if (axis == SweepAxis::kWavelength && !site && !r0_m)
        throw ConfigError("sweep: need a site model or an explicit r0");
    if (site && r0_m)
        throw ConfigError("sweep: give either a site model or an explicit r0, not both");
    link.validate();
    protocol.validate();
    if (site) site->validate();
    if (ao) ao->validate();
}

namespace {

std::vector<double> axis_grid(const SweepSpec& spec) {
    std::vector<double> grid(spec.points);
    if (spec.spacing == SweepSpacing::kLinear) {
        const double step = (spec.max - spec.min) / (spec.points - 1);
        for (int i = 0; i < spec.points; ++i) grid[i] = spec.min + i * step;
    } else {
        const double ratio = std::log(spec.max / spec.min) / (spec.points - 1);
        for (int i = 0; i < spec.points; ++i) grid[i] = spec.min * std::exp(i * ratio);
    }
    grid.back() = spec.max; // endpoint exact under either spacing
    return grid;
}

struct Baseline {
    double r0_m = 0.0;     ///< resolved 500-nm-referenced Fried length
    double f_g_hz = 0.0;   ///< 500-nm Greenwood (fc axis only)
    double f_tg_hz = 0.0;  ///< 500-nm tracking Greenwood (fc axis only)
};

Baseline resolve_baseline(const SweepSpec& spec) {
    Baseline base;
    if (spec.axis == SweepAxis::kClosedLoopBandwidth) {
        base.f_g_hz = greenwood_frequency_hz(*spec.site, kReferenceWavelengthNm);
        base.f_tg_hz = tracking_greenwood_frequency_hz(*spec.site, kReferenceWavelengthNm,
                                                       spec.link.receiver_diameter_m);
        return base;
    }
    // The r0 and Strehl axes define the turbulence point themselves.
    if (spec.axis == SweepAxis::kR0 || spec.axis == SweepAxis::kStrehl) return base;
    if (spec.r0_m) {
        base.r0_m = *spec.r0_m;
        if (spec.ao)
            throw ConfigError("sweep: AO correction needs a site model (the Greenwood "
                              "frequencies are not derivable from an explicit r0)");
        return base;
    }
    base.r0_m = fried_length_m(*spec.site, kReferenceWavelengthNm);
    if (spec.ao) {
        const double f_g = greenwood_frequency_hz(*spec.site, kReferenceWavelengthNm);
        const double f_tg = tracking_greenwood_frequency_hz(*spec.site, kReferenceWavelengthNm,
                                                            spec.link.receiver_diameter_m);
        base.r0_m = effective_r0_closed_loop_m(*spec.ao, f_tg, f_g,
                                               spec.link.receiver_diameter_m,
                                               kReferenceWavelengthNm);
    }
    return base;
}

SweepRow evaluate_row(const SpectralProfile& profile, const SweepSpec& spec,
                      const Baseline& base, double axis_value) {
    SweepRow row;
    row.axis_value = axis_value;
    // The wavelength axis supplies the wavelength itself.
    const std::vector<double> lambdas = spec.axis == SweepAxis::kWavelength
                                            ? std::vector<double>{axis_value}
                                            : spec.lambdas_nm;
    for (double lambda : lambdas) {
        for (Strategy strategy : spec.strategies) {
            LinkConfig cfg = spec.link;
            cfg.signal_wavelength_nm = lambda;
            cfg.strategy = strategy;

            SweepCell cell;
            try {
                double r0 = base.r0_m;
                switch (spec.axis) {
                    case SweepAxis::kR0:
                        r0 = axis_value;
                        break;
                    case SweepAxis::kStrehl: {
                        // One Strehl maps to a different residual OPD (and
                        // hence r0) per wavelength.
                        const double opd = opd_from_strehl_m(axis_value, lambda);
                        r0 = r0_from_opd_m(opd, cfg.receiver_diameter_m);
                        break;
                    }
                    case SweepAxis::kClosedLoopBandwidth: {
                        AOParams point_ao = *spec.ao;
                        point_ao.closed_loop_bandwidth_hz = axis_value;
                        r0 = effective_r0_closed_loop_m(point_ao, base.f_tg_hz, base.f_g_hz,
                                                        cfg.receiver_diameter_m,
                                                        kReferenceWavelengthNm);
                        break;
                    }
                    case SweepAxis::kWavelength:
                        break;
                }
                cell.budget = evaluate_link(profile, r0, cfg, spec.protocol);
            } catch (const std::exception& ex) {
                cell.budget = LinkBudget{};
                cell.budget.lambda_nm = cfg.signal_wavelength_nm;
                cell.budget.strategy = strategy;
                cell.budget.flags.eval_error = true;
                cell.error = ex.what();
            }
            row.cells.push_back(std::move(cell));
        }
    }
    return row;
}

template <typename PointFn>
void for_each_point(std::size_t count, const PointFn& fn) {
    const unsigned workers = thread_budget(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<SweepRow> run_sweep(const SpectralProfile& profile, const SweepSpec& spec) {
    spec.validate();
    const Baseline base = resolve_baseline(spec);
    const std::vector<double> grid = axis_grid(spec);

    std::vector<SweepRow> rows(grid.size());
    for_each_point(grid.size(), [&](std::size_t i) {
        rows[i] = evaluate_row(profile, spec, base, grid[i]);
    });
    return rows;
}

OptimizeResult optimize_wavelength(const SpectralProfile& profile, double filter_width_nm,
                                   const LinkConfig& link, const ProtocolParams& protocol,
                                   double r0_m, double min_nm, double max_nm, double step_nm) {
    link.validate();
    protocol.validate();
    if (!(r0_m > 0.0)) throw ConfigError("optimize: r0 must be positive");
    if (filter_width_nm <= 0.0)
        throw ConfigError("optimize: filter width must be positive");
    if (!(min_nm < max_nm)) throw ConfigError("optimize: need min < max");
    if (step_nm <= 0.0 || step_nm > filter_width_nm / 2.0)
        throw ConfigError("optimize: grid step must be positive and at most half the "
                          "filter width");
    const double margin = filter_width_nm / 2.0;
    if (min_nm - margin < profile.min_wavelength_nm() ||
        max_nm + margin > profile.max_wavelength_nm())
        throw ConfigError("optimize: search range (plus filter half-width margins) exceeds "
                          "the profile coverage [" +
                          std::to_string(profile.min_wavelength_nm()) + ", " +
                          std::to_string(profile.max_wavelength_nm()) + "] nm");

    const std::size_t count =
        static_cast<std::size_t>(std::floor((max_nm - min_nm) / step_nm + 1e-9)) + 1;

    OptimizeResult result;
    result.step_nm = step_nm;
    result.scan.resize(count);

    for_each_point(count, [&](std::size_t i) {
        LinkConfig cfg = link;
        cfg.signal_wavelength_nm = min_nm + static_cast<double>(i) * step_nm;
        cfg.filter_width_nm = filter_width_nm;
        cfg.strategy = Strategy::kTurbulenceLimited;

        SweepRow row;
        row.axis_value = cfg.signal_wavelength_nm;
        SweepCell cell;
        try {
            cell.budget = evaluate_link(profile, r0_m, cfg, protocol);
        } catch (const std::exception& ex) {
            cell.budget = LinkBudget{};
            cell.budget.lambda_nm = cfg.signal_wavelength_nm;
            cell.budget.flags.eval_error = true;
            cell.error = ex.what();
        }
        row.cells.push_back(std::move(cell));
        result.scan[i] = std::move(row);
    });

    // Ascending scan with strict improvement: ties resolve to the shorter
    // wavelength.
    double best = 0.0;
    for (const auto& row : result.scan) {
        const double rate = row.cells.front().budget.r_kb_hz;
        if (rate > best) {
            best = rate;
            result.lambda_opt_nm = row.axis_value;
        }
    }
    result.key_possible = best > 0.0;
    result.r_kb_hz = best;
    if (!result.key_possible) result.lambda_opt_nm = min_nm;
    return result;
}

} // namespace fsqkd
