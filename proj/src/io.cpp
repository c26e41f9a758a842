#include "odp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/parallel.hpp"

namespace odp {

const char* version() { return ODP_VERSION; }

void write_config_header(std::ostream& os, const nlohmann::json& config) {
  os << "# odpendulum " << version() << "\n# config: " << config.dump() << "\n";
}

std::vector<BifurcationRow> bifurcation_sweep(double omega, double f_lo, double f_hi, int steps,
                                              const IntegratorConfig& cfg, int workers) {
  if (!(omega > 0.0)) throw InvalidParameter("omega must be positive");
  if (!(f_hi > f_lo) || f_lo < 0.0 || steps < 1) {
    throw InvalidParameter("amplitude range must satisfy 0 <= f_min < f_max with steps >= 1");
  }
  return parallel_map(
      static_cast<std::size_t>(steps) + 1,
      [&](std::size_t i) {
        BifurcationRow row;
        row.f = f_lo + (f_hi - f_lo) * static_cast<double>(i) / steps;
        const auto fp = stroboscopic_fixed_points(DriveSpec::sinusoidal(row.f, omega), cfg);
        row.trace = fp.trace;
        row.b0 = fp.b0;
        for (int b = 0; b < 2; ++b) {
          row.theta_star[b] = fp.theta_star[b];
          row.stability[b] = fp.all_fixed ? -1 : (fp.stable[b] ? 1 : 0);
        }
        return row;
      },
      workers);
}

void write_bifurcation_csv(std::ostream& os, const std::vector<BifurcationRow>& rows) {
  os << "f,theta_star_1,theta_star_2,stability_1,stability_2,trM,B0\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%d,%d,%.10g,%.10g\n", r.f, r.theta_star[0],
                  r.theta_star[1], r.stability[0], r.stability[1], r.trace, r.b0);
    os << buf;
  }
}

std::vector<CriticalRow> critical_curve_rows(TraceMethod method, const std::vector<double>& omegas,
                                             double f_max, int count, int workers) {
  if (omegas.empty()) throw InvalidParameter("omega grid is empty");
  if (!(f_max > 0.0) || count < 1) throw InvalidParameter("need f_max > 0 and count >= 1");
  const auto per = parallel_map(
      omegas.size(),
      [&](std::size_t j) {
        // Lower bound keeps the bracket scans clear of f = 0, where no exchange occurs.
        auto fs = critical_amplitudes_by(method, omegas[j], 1e-3, f_max);
        if (static_cast<int>(fs.size()) > count) fs.resize(count);
        return fs;
      },
      workers);
  std::vector<CriticalRow> rows;
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    for (std::size_t k = 0; k < per[j].size(); ++k) {
      rows.push_back({omegas[j], per[j][k], static_cast<int>(k) + 1, method});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CriticalRow& a, const CriticalRow& b) {
    return a.omega != b.omega ? a.omega < b.omega : a.branch_index < b.branch_index;
  });
  return rows;
}

void write_critical_csv(std::ostream& os, const std::vector<CriticalRow>& rows) {
  os << "omega,f_critical,branch_index,method\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%s\n", r.omega, r.f, r.branch_index,
                  method_name(r.method));
    os << buf;
  }
}

void write_wkb_csv(std::ostream& os, const std::vector<WkbComparison>& rows) {
  os << "lambda,trace_exact,trace_wkb,rel_error\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.12g,%.12g,%.6e\n", r.lambda, r.exact, r.wkb, r.error);
    os << buf;
  }
}

std::string gnuplot_script(const std::string& csv_path, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel, int xcol,
                           const std::vector<int>& ycols, const std::string& style) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set datafile commentschars '#'\n"
    << "set key autotitle columnhead\n"
    << "set title '" << title << "'\n"
    << "set xlabel '" << xlabel << "'\n"
    << "set ylabel '" << ylabel << "'\n"
    << "plot ";
  for (std::size_t i = 0; i < ycols.size(); ++i) {
    if (i) s << ", \\\n     ";
    s << "'" << csv_path << "' using " << xcol << ":" << ycols[i] << " with " << style;
  }
  s << "\npause -1\n";
  return s.str();
}

}  // namespace odp
