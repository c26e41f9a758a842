#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "odp/asymptotic.hpp"
#include "odp/ode.hpp"

namespace odp {

const char* version();

/// Comment lines "# odpendulum <version>" and "# config: <compact json>".
void write_config_header(std::ostream& os, const nlohmann::json& config);

struct BifurcationRow {
  double f = 0.0;
  std::array<double, 2> theta_star{};
  std::array<int, 2> stability{};  ///< 1 stable, 0 unstable, -1 marginal (every theta fixed)
  double trace = 0.0;
  double b0 = 0.0;
};

/// Stroboscopic fixed points of F = f sin(omega t) on `steps` + 1 evenly spaced amplitudes.
std::vector<BifurcationRow> bifurcation_sweep(double omega, double f_lo, double f_hi, int steps,
                                              const IntegratorConfig& cfg = {}, int workers = 1);
void write_bifurcation_csv(std::ostream& os, const std::vector<BifurcationRow>& rows);

struct CriticalRow {
  double omega = 0.0;
  double f = 0.0;
  int branch_index = 0;  ///< 1 for the lowest exchange of stability at this omega
  TraceMethod method = TraceMethod::Numeric;
};

/// Critical amplitudes in (0, f_max] for each omega, at most `count` per omega. Rows are sorted
/// by (omega, branch_index).
std::vector<CriticalRow> critical_curve_rows(TraceMethod method, const std::vector<double>& omegas,
                                             double f_max, int count, int workers = 1);
void write_critical_csv(std::ostream& os, const std::vector<CriticalRow>& rows);

void write_wkb_csv(std::ostream& os, const std::vector<WkbComparison>& rows);

/// Minimal gnuplot script plotting columns (x, y) of a CSV file, one curve per entry of ys.
std::string gnuplot_script(const std::string& csv_path, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel, int xcol,
                           const std::vector<int>& ycols, const std::string& style = "points");

}  // namespace odp
