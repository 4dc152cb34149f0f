#include "fsqkd/report.hpp"

#include <cstdio>
#include <ostream>

namespace fsqkd {

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

std::string budget_csv_header() {
    return "axis_value,lambda_nm,strategy,r0_m,strehl,omega_fov_sr,eta_geo,eta_trans,"
           "eta_fs,eta_total,n_b,y0,q_mu,q_nu,e_mu,q_1,y_1,e_1,snr_mu,p_kb_raw,r_kb_hz,flags";
}

std::string budget_csv_row(double axis_value, const LinkBudget& b) {
    std::string row;
    row.reserve(256);
    auto add = [&row](const std::string& field) {
        if (!row.empty()) row += ',';
        row += field;
    };
    add(format_number(axis_value));
    add(format_number(b.lambda_nm));
    add(to_string(b.strategy));
    add(format_number(b.r0_m));
    add(format_number(b.strehl));
    add(format_number(b.omega_fov_sr));
    add(format_number(b.eta_geo));
    add(format_number(b.eta_trans));
    add(format_number(b.eta_fs));
    add(format_number(b.eta_total));
    add(format_number(b.n_b));
    add(format_number(b.y0));
    add(format_number(b.q_mu));
    add(format_number(b.q_nu));
    add(format_number(b.e_mu));
    add(format_number(b.q_1));
    add(format_number(b.y_1));
    add(format_number(b.e_1));
    add(format_number(b.snr_mu));
    add(format_number(b.p_kb));
    add(format_number(b.r_kb_hz));
    add(b.flags.to_string());
    return row;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << "# " << line << "\n";
    out << budget_csv_header() << "\n";
    for (const auto& row : rows)
        for (const auto& cell : row.cells)
            out << budget_csv_row(row.axis_value, cell.budget) << "\n";
}

void write_budget_csv(std::ostream& out, const std::vector<LinkBudget>& budgets,
                      const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << "# " << line << "\n";
    out << budget_csv_header() << "\n";
    for (const auto& b : budgets) out << budget_csv_row(b.lambda_nm, b) << "\n";
}

void print_budget(std::ostream& out, const LinkBudget& b) {
    out << "wavelength            " << format_number(b.lambda_nm) << " nm\n"
        << "strategy              " << to_string(b.strategy) << "\n"
        << "r0 (500 nm)           " << format_number(b.r0_m) << " m\n"
        << "strehl                " << format_number(b.strehl) << "\n"
        << "fov solid angle       " << format_number(b.omega_fov_sr) << " sr\n"
        << "eta geometric         " << format_number(b.eta_geo) << "\n"
        << "eta transmission      " << format_number(b.eta_trans) << "\n"
        << "eta field stop        " << format_number(b.eta_fs) << "\n"
        << "eta total             " << format_number(b.eta_total) << "\n"
        << "background photons    " << format_number(b.n_b) << " /gate\n"
        << "Y0                    " << format_number(b.y0) << "\n"
        << "Q_mu                  " << format_number(b.q_mu) << "\n"
        << "Q_nu                  " << format_number(b.q_nu) << "\n"
        << "E_mu                  " << format_number(b.e_mu) << "\n"
        << "E_nu                  " << format_number(b.e_nu) << "\n"
        << "Q_1                   " << format_number(b.q_1) << "\n"
        << "Y_1                   " << format_number(b.y_1) << "\n"
        << "e_1                   " << format_number(b.e_1) << "\n"
        << "SNR_mu                " << format_number(b.snr_mu) << "\n"
        << "P_KB (raw)            " << format_number(b.p_kb) << "\n"
        << "R_KB                  " << format_number(b.r_kb_hz) << " Hz\n"
        << "flags                 " << (b.flags.any() ? b.flags.to_string() : "-") << "\n";
}

} // namespace fsqkd
