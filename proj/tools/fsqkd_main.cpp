// fsqkd - command-line front end: single-point link budgets, parameter
// sweeps, wavelength optimization, and the built-in validation suite.
//
// Exit codes: 0 success (including no-key results), 1 validation failure,
// 2 configuration error, 3 domain error. Data goes to stdout (or --out);
// diagnostics go to stderr only.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsqkd/montecarlo.hpp"
#include "fsqkd/report.hpp"
#include "fsqkd/scenario.hpp"
#include "fsqkd/validate.hpp"

namespace {

struct CommonFlags {
    std::string scenario_path;
    std::string out_path;
    std::string format = "human";
    std::optional<std::string> axis;
    std::optional<double> min_value;
    std::optional<double> max_value;
    std::optional<int> points;
    std::optional<std::string> spacing;
    std::optional<std::string> lambdas;
    std::optional<std::string> strategy;
    std::uint64_t seed = fsqkd::kDefaultValidationSeed;
};

std::vector<double> parse_lambda_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw fsqkd::ConfigError("--lambda: cannot parse '" + tok + "'");
        }
    }
    if (out.empty()) throw fsqkd::ConfigError("--lambda: empty list");
    return out;
}

fsqkd::Scenario make_scenario(const CommonFlags& flags) {
    fsqkd::Scenario sc = flags.scenario_path.empty()
                             ? fsqkd::default_scenario()
                             : fsqkd::load_scenario_file(flags.scenario_path);
    if (flags.axis) {
        const auto axis = fsqkd::parse_sweep_axis(*flags.axis);
        if (!axis) throw fsqkd::ConfigError("--axis: unknown axis '" + *flags.axis + "'");
        sc.axis = *axis;
    }
    if (flags.min_value) sc.sweep_min = *flags.min_value;
    if (flags.max_value) sc.sweep_max = *flags.max_value;
    if (flags.points) sc.sweep_points = *flags.points;
    if (flags.spacing) {
        if (*flags.spacing == "linear") sc.spacing = fsqkd::SweepSpacing::kLinear;
        else if (*flags.spacing == "log") sc.spacing = fsqkd::SweepSpacing::kLog;
        else throw fsqkd::ConfigError("--spacing: expected linear or log");
    }
    if (flags.lambdas) sc.lambdas_nm = parse_lambda_list(*flags.lambdas);
    if (flags.strategy) {
        if (*flags.strategy == "both")
            sc.strategies = {fsqkd::Strategy::kDiffractionLimited,
                             fsqkd::Strategy::kTurbulenceLimited};
        else {
            const auto s = fsqkd::parse_strategy(*flags.strategy);
            if (!s) throw fsqkd::ConfigError("--strategy: expected dl, tl, or both");
            sc.strategies = {*s};
        }
    }
    sc.validate();
    return sc;
}

/// Opens --out for writing, or hands back stdout.
class OutputStream {
public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw fsqkd::ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<std::string> scenario_metadata(const fsqkd::Scenario& sc, double r0) {
    std::vector<std::string> meta;
    meta.push_back("profile=" + sc.profile_path);
    meta.push_back("r0_m=" + fsqkd::format_number(r0) +
                   (sc.r0_m ? " (explicit)" : (sc.ao ? " (site, AO-corrected)" : " (site)")));
    if (!sc.r0_m) {
        meta.push_back("f_G_hz=" + fsqkd::format_number(fsqkd::greenwood_frequency_hz(
                                       sc.site, fsqkd::kReferenceWavelengthNm)));
        meta.push_back("f_TG_hz=" +
                       fsqkd::format_number(fsqkd::tracking_greenwood_frequency_hz(
                           sc.site, fsqkd::kReferenceWavelengthNm,
                           sc.link.receiver_diameter_m)));
    }
    if (sc.ao) {
        meta.push_back("ao_f_tc_hz=" + fsqkd::format_number(sc.ao->tracking_bandwidth_hz));
        meta.push_back("ao_f_c_hz=" +
                       fsqkd::format_number(sc.ao->closed_loop_bandwidth_hz));
    }
    return meta;
}

int cmd_compute(const CommonFlags& flags) {
    const fsqkd::Scenario sc = make_scenario(flags);
    const fsqkd::SpectralProfile profile = fsqkd::load_scenario_profile(sc);
    const double r0 = fsqkd::resolve_r0(sc);

    std::vector<fsqkd::LinkBudget> budgets;
    for (double lambda : sc.effective_lambdas())
        for (fsqkd::Strategy strategy : sc.effective_strategies()) {
            fsqkd::LinkConfig cfg = sc.link;
            cfg.signal_wavelength_nm = lambda;
            cfg.strategy = strategy;
            budgets.push_back(fsqkd::evaluate_link(profile, r0, cfg, sc.protocol));
        }

    OutputStream out(flags.out_path);
    if (flags.format == "csv") {
        fsqkd::write_budget_csv(out.get(), budgets, scenario_metadata(sc, r0));
    } else {
        for (const auto& line : scenario_metadata(sc, r0)) out.get() << "# " << line << "\n";
        for (const auto& budget : budgets) {
            out.get() << "\n";
            fsqkd::print_budget(out.get(), budget);
            if (sc.link.focal_length_m) {
                // Physical focal-plane spot sizes, for field-stop engineering.
                fsqkd::LinkConfig cfg = sc.link;
                const double r_lambda = fsqkd::scale_fried(budget.r0_m, budget.lambda_nm);
                out.get() << "dl spot diameter      "
                          << fsqkd::format_number(
                                 fsqkd::dl_spot_diameter_m(cfg, budget.lambda_nm) * 1e6)
                          << " um\n"
                          << "tl spot diameter      "
                          << fsqkd::format_number(
                                 fsqkd::tl_spot_diameter_m(cfg, budget.lambda_nm, r_lambda) *
                                 1e6)
                          << " um\n";
            }
        }
    }
    return 0;
}

int cmd_sweep(const CommonFlags& flags) {
    const fsqkd::Scenario sc = make_scenario(flags);
    const fsqkd::SpectralProfile profile = fsqkd::load_scenario_profile(sc);
    const fsqkd::SweepSpec spec = sc.sweep_spec();
    const auto rows = fsqkd::run_sweep(profile, spec);

    std::vector<std::string> meta;
    meta.push_back(std::string("axis=") + fsqkd::to_string(spec.axis));
    meta.push_back("min=" + fsqkd::format_number(spec.min));
    meta.push_back("max=" + fsqkd::format_number(spec.max));
    meta.push_back("points=" + std::to_string(spec.points));
    meta.push_back(std::string("spacing=") +
                   (spec.spacing == fsqkd::SweepSpacing::kLinear ? "linear" : "log"));
    meta.push_back("profile=" + sc.profile_path);

    OutputStream out(flags.out_path);
    fsqkd::write_sweep_csv(out.get(), rows, meta);
    return 0;
}

int cmd_optimize(const CommonFlags& flags) {
    const fsqkd::Scenario sc = make_scenario(flags);
    const fsqkd::SpectralProfile profile = fsqkd::load_scenario_profile(sc);
    const double r0 = fsqkd::resolve_r0(sc);

    const double margin = sc.link.filter_width_nm / 2.0;
    const double min_nm = flags.min_value.value_or(
        sc.optimize_min_nm.value_or(profile.min_wavelength_nm() + margin));
    const double max_nm = flags.max_value.value_or(
        sc.optimize_max_nm.value_or(profile.max_wavelength_nm() - margin));
    const double step_nm = sc.optimize_step_nm.value_or(sc.link.filter_width_nm / 2.0);

    const fsqkd::OptimizeResult result = fsqkd::optimize_wavelength(
        profile, sc.link.filter_width_nm, sc.link, sc.protocol, r0, min_nm, max_nm, step_nm);

    std::vector<std::string> meta = scenario_metadata(sc, r0);
    meta.push_back("filter_width_nm=" + fsqkd::format_number(sc.link.filter_width_nm));
    meta.push_back("grid_step_nm=" + fsqkd::format_number(result.step_nm));
    meta.push_back("search_min_nm=" + fsqkd::format_number(min_nm));
    meta.push_back("search_max_nm=" + fsqkd::format_number(max_nm));
    meta.push_back(std::string("key_possible=") + (result.key_possible ? "yes" : "no"));
    meta.push_back("lambda_opt_nm=" + fsqkd::format_number(result.lambda_opt_nm));
    meta.push_back("r_kb_opt_hz=" + fsqkd::format_number(result.r_kb_hz));

    OutputStream out(flags.out_path);
    fsqkd::write_sweep_csv(out.get(), result.scan, meta);

    // Summary report: stdout when the table went to a file, stderr otherwise
    // so table data and report never interleave.
    std::ostream& report = flags.out_path.empty() ? std::cerr : std::cout;
    if (result.key_possible)
        report << "optimal wavelength: " << fsqkd::format_number(result.lambda_opt_nm)
               << " nm, key-bit rate " << fsqkd::format_number(result.r_kb_hz) << " Hz (grid "
               << fsqkd::format_number(result.step_nm) << " nm)\n";
    else
        report << "no key possible anywhere in [" << fsqkd::format_number(min_nm) << ", "
               << fsqkd::format_number(max_nm) << "] nm\n";
    return 0;
}

int cmd_validate(const CommonFlags& flags) {
    OutputStream out(flags.out_path);
    out.get() << "# rng=" << fsqkd::kMcRngAlgorithm << " seed=" << flags.seed << "\n";
    const auto results = fsqkd::run_acceptance_checks(flags.seed);
    bool all_pass = true;
    for (const auto& r : results) {
        out.get() << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    out.get() << (all_pass ? "all checks passed\n" : "VALIDATION FAILED\n");
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"free-space daytime QKD downlink: link budgets, sweeps, and wavelength "
                 "optimization"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&flags](CLI::App* cmd) {
        cmd->add_option("--scenario", flags.scenario_path, "scenario file (INI sections)");
        cmd->add_option("--out", flags.out_path, "write output to this file");
        cmd->add_option("--format", flags.format, "human|csv")
            ->check(CLI::IsMember({"human", "csv"}));
        cmd->add_option("--lambda", flags.lambdas, "wavelengths in nm, comma-separated");
        cmd->add_option("--strategy", flags.strategy, "dl|tl|both");
        cmd->add_option("--min", flags.min_value, "axis/search minimum");
        cmd->add_option("--max", flags.max_value, "axis/search maximum");
        cmd->add_option("--points", flags.points, "sweep point count");
        cmd->add_option("--spacing", flags.spacing, "linear|log");
        cmd->add_option("--axis", flags.axis, "r0|strehl|fc|wavelength");
        cmd->add_option("--seed", flags.seed, "Monte Carlo seed");
    };

    CLI::App* compute = app.add_subcommand("compute", "evaluate one channel point");
    CLI::App* sweep = app.add_subcommand("sweep", "emit a parameter-sweep CSV table");
    CLI::App* optimize = app.add_subcommand("optimize", "exhaustive optimal-wavelength scan");
    CLI::App* validate = app.add_subcommand("validate", "run the built-in validation suite");
    for (CLI::App* cmd : {compute, sweep, optimize, validate}) add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (compute->parsed()) return cmd_compute(flags);
        if (sweep->parsed()) return cmd_sweep(flags);
        if (optimize->parsed()) return cmd_optimize(flags);
        if (validate->parsed()) return cmd_validate(flags);
    } catch (const fsqkd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fsqkd::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
