#pragma once
// fsqkd/report.hpp - CSV and human-readable emission of link budgets and
// sweep tables. Column order is fixed; numbers carry 9 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

#include "fsqkd/qkd.hpp"
#include "fsqkd/sweep.hpp"

namespace fsqkd {

/// 9-significant-digit serialization used for every CSV number.
std::string format_number(double value);

/// axis_value,lambda_nm,strategy,r0_m,strehl,omega_fov_sr,eta_geo,eta_trans,
/// eta_fs,eta_total,n_b,y0,q_mu,q_nu,e_mu,q_1,y_1,e_1,snr_mu,p_kb_raw,
/// r_kb_hz,flags
std::string budget_csv_header();
std::string budget_csv_row(double axis_value, const LinkBudget& budget);

/// Full sweep table; metadata lines are emitted as leading `# key=value`
/// comments. Data rows never interleave with diagnostics.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& metadata = {});

/// Single budget as a sweep-style CSV (axis value = wavelength).
void write_budget_csv(std::ostream& out, const std::vector<LinkBudget>& budgets,
                      const std::vector<std::string>& metadata = {});

/// Human-readable budget report with units, one field per line.
void print_budget(std::ostream& out, const LinkBudget& budget);

} // namespace fsqkd
