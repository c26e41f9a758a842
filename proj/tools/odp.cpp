// odp: parameter sweeps and figure datasets for the driven overdamped pendulum.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "odp/asymptotic.hpp"
#include "odp/drive.hpp"
#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/io.hpp"
#include "odp/josephson.hpp"
#include "odp/superlattice.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;

  std::vector<double> values() const {
    if (steps < 0 || !(hi >= lo)) throw odp::InvalidParameter("grid needs max >= min, steps >= 0");
    if (steps == 0) return {lo};
    std::vector<double> v(steps + 1);
    for (int i = 0; i <= steps; ++i) v[i] = lo + (hi - lo) * i / steps;
    return v;
  }
};

struct Common {
  std::string out;
  std::string gnuplot;
  std::string config;
  int workers = 1;
  double rtol = 1e-10;
  double atol = 1e-12;

  odp::IntegratorConfig ode() const {
    odp::IntegratorConfig c;
    c.rel_tol = rtol;
    c.abs_tol = atol;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "output file (default: stdout)");
  sub->add_option("--gnuplot", c.gnuplot, "also write a gnuplot script here (needs --out)");
  sub->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 256));
  sub->add_option("--rtol", c.rtol, "integrator relative tolerance");
  sub->add_option("--atol", c.atol, "integrator absolute tolerance");
  sub->add_option("--config", c.config, "JSON file with option values");
}

void add_grid(CLI::App* sub, const std::string& name, Grid& g, const std::string& what) {
  sub->add_option("--" + name + "-min", g.lo, what + " lower end");
  sub->add_option("--" + name + "-max", g.hi, what + " upper end");
  sub->add_option("--" + name + "-steps", g.steps, what + " intervals");
}

json parse_value(const std::string& s) {
  if (s.empty()) return s;
  try {
    return json::parse(s);
  } catch (const json::exception&) {
  }
  if (s.front() == '[' && s.back() == ']') {
    json arr = json::array();
    std::stringstream in(s.substr(1, s.size() - 2));
    for (std::string item; std::getline(in, item, ',');) arr.push_back(parse_value(item));
    return arr;
  }
  return s;
}

// Resolved option values of a subcommand.
json resolved_config(const CLI::App* sub) {
  json j;
  j["command"] = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out" ||
        name == "gnuplot") {
      continue;
    }
    const bool multi = opt->get_expected_max() > 1;
    const auto& given = opt->results();
    if (given.empty()) {
      if (!opt->get_default_str().empty()) j[name] = parse_value(opt->get_default_str());
      continue;
    }
    json arr = json::array();
    for (const auto& s : given) arr.push_back(parse_value(s));
    j[name] = multi ? arr : arr.back();
  }
  return j;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw odp::InvalidParameter("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_gnuplot(const Common& c, const std::string& script) {
  if (c.gnuplot.empty()) return;
  if (c.out.empty()) throw odp::InvalidParameter("--gnuplot needs --out");
  std::ofstream g(c.gnuplot);
  if (!g) throw odp::InvalidParameter("cannot open " + c.gnuplot);
  g << script;
}

// Turns {"key": value} pairs of a config file into command-line tokens for options the user
// did not pass explicitly.
std::vector<std::string> config_tokens(const std::string& path,
                                       const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw odp::InvalidParameter("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw odp::InvalidParameter(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw odp::InvalidParameter("config file must hold a JSON object");
  std::set<std::string> explicit_flags;
  for (const auto& tok : given) {
    if (tok.rfind("--", 0) == 0) explicit_flags.insert(tok.substr(0, tok.find('=')));
  }
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || key == "config") continue;
    std::string flag = "--" + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    if (explicit_flags.count(flag)) continue;
    auto scalar = [](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      std::ostringstream s;
      s.precision(17);
      if (v.is_number()) s << v.get<double>(); else s << v.dump();
      return s.str();
    };
    out.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) out.push_back(scalar(v));
    } else {
      out.push_back(scalar(value));
    }
  }
  return out;
}

int run(int argc, char** argv);

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const odp::InvalidParameter& e) {
    std::fprintf(stderr, "odp: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "odp: numerical failure: %s\n", e.what());
    return kExitNumeric;
  }
}

namespace {

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      const auto extra = config_tokens(args[i + 1], args);
      args.insert(args.end(), extra.begin(), extra.end());
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      const auto extra = config_tokens(args[i].substr(9), args);
      args.insert(args.end(), extra.begin(), extra.end());
      break;
    }
  }

  CLI::App app{"Floquet stability tools for the driven overdamped pendulum", "odp"};
  app.set_version_flag("--version", std::string(odp::version()));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Common c;

  // bifurcation
  auto* bif = app.add_subcommand("bifurcation", "stroboscopic fixed points against f");
  double bif_omega = 0.3;
  Grid bif_f{1.0, 3.2, 220};
  bif->add_option("--omega", bif_omega, "pump frequency");
  add_grid(bif, "f", bif_f, "amplitude");
  add_common(bif, c);

  // critical-curves
  auto* crit = app.add_subcommand("critical-curves", "exchange-of-stability amplitudes per omega");
  Grid crit_w{0.1, 3.0, 29};
  std::vector<double> crit_single;
  std::vector<std::string> crit_methods{"numeric"};
  int crit_count = 5;
  double crit_fmax = 0.0;
  crit->add_option("--omega", crit_single, "explicit omega values (override the grid)");
  add_grid(crit, "omega", crit_w, "omega");
  crit->add_option("--method", crit_methods, "numeric, mathieu, elliptic, wkb, bessel");
  crit->add_option("--count", crit_count, "branches per omega")->check(CLI::PositiveNumber);
  crit->add_option("--f-max", crit_fmax, "largest amplitude searched (0: automatic)");
  add_common(crit, c);

  // superlattice-map
  auto* slm = app.add_subcommand("superlattice-map", "branch map in (u0, Omega) for one Gamma");
  double slm_gamma = 0.2;
  Grid slm_f{0.05, 8.0, 159}, slm_w{0.05, 1.0, 19};
  slm->add_option("--gamma", slm_gamma, "scattering parameter");
  add_grid(slm, "f", slm_f, "normalized amplitude");
  add_grid(slm, "omega", slm_w, "normalized frequency");
  add_common(slm, c);

  // rectify
  auto* rect = app.add_subcommand("rectify", "direct balance-equation rectification test");
  double r_u0 = 3.52, r_Om = 0.45, r_gamma = 0.2, r_u0max = 0.0;
  int r_steps = 0, r_ensemble = 8;
  rect->add_option("--u0", r_u0, "field amplitude (sweep start)");
  rect->add_option("--Omega", r_Om, "drive frequency");
  rect->add_option("--gamma", r_gamma, "scattering parameter");
  rect->add_option("--u0-max", r_u0max, "sweep end");
  rect->add_option("--u0-steps", r_steps, "sweep intervals (0: single JSON report)");
  rect->add_option("--ensemble", r_ensemble, "initial conditions")->check(CLI::PositiveNumber);
  add_common(rect, c);

  // jj-gain
  auto* gain = app.add_subcommand("jj-gain", "negative-absorption regions of the junction");
  Grid g_f{1.0, 2.5, 150}, g_w{0.1, 0.3, 20};
  double g_mult = 11.5;
  int g_per = 200;
  add_grid(gain, "f", g_f, "pump amplitude");
  add_grid(gain, "omega", g_w, "pump frequency");
  gain->add_option("--Omega-max-multiple", g_mult, "probe range in units of omega");
  gain->add_option("--per-harmonic", g_per, "probe samples per 2 omega");
  add_common(gain, c);

  // jj-profile
  auto* prof = app.add_subcommand("jj-profile", "absorption against probe frequency");
  double p_f = 1.5, p_w = 0.149, p_eps = 1e-3, p_mult = 11.5;
  int p_per = 100;
  std::string p_method = "series";
  prof->add_option("--f", p_f, "pump amplitude");
  prof->add_option("--omega", p_w, "pump frequency");
  prof->add_option("--eps", p_eps, "probe amplitude");
  prof->add_option("--method", p_method, "series or direct")
      ->check(CLI::IsMember({"series", "direct"}));
  prof->add_option("--Omega-max-multiple", p_mult, "probe range in units of omega");
  prof->add_option("--per-harmonic", p_per, "probe samples per 2 omega");
  add_common(prof, c);

  // wkb-compare
  auto* wkb = app.add_subcommand("wkb-compare", "WKB trace against the exact trace");
  double w_f = 1.2, w_w = 0.5;
  std::vector<double> w_lambda{5, 10, 20};
  wkb->add_option("--f", w_f, "shape amplitude");
  wkb->add_option("--omega", w_w, "shape frequency");
  wkb->add_option("--lambda", w_lambda, "large-parameter ladder");
  add_common(wkb, c);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const json cfg_echo = resolved_config(sub);
  const auto ode = c.ode();

  if (sub == bif) {
    const auto rows = odp::bifurcation_sweep(bif_omega, bif_f.lo, bif_f.hi, bif_f.steps, ode,
                                             c.workers);
    const auto crits = odp::critical_amplitudes(bif_omega, bif_f.lo, bif_f.hi, ode,
                                                {0, 1e-8, c.workers});
    Output out(c.out);
    odp::write_config_header(out.os(), cfg_echo);
    for (double f : crits) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "# exchange of stability at f = %.8f\n", f);
      out.os() << buf;
    }
    odp::write_bifurcation_csv(out.os(), rows);
    emit_gnuplot(c, odp::gnuplot_script(c.out, "Stroboscopic fixed points", "f", "theta*", 1,
                                        {2, 3}));
  } else if (sub == crit) {
    const auto omegas = crit_single.empty() ? crit_w.values() : crit_single;
    std::vector<odp::CriticalRow> rows;
    for (const auto& m : crit_methods) {
      const auto method = odp::parse_method(m);
      for (double w : omegas) {
        if (!(w > 0.0)) throw odp::InvalidParameter("omega values must be positive");
        const double f_max =
            crit_fmax > 0.0 ? crit_fmax : 1.5 + w * (3.2 * crit_count + 2.0);
        const auto part = odp::critical_curve_rows(method, {w}, f_max, crit_count, c.workers);
        rows.insert(rows.end(), part.begin(), part.end());
      }
    }
    Output out(c.out);
    odp::write_config_header(out.os(), cfg_echo);
    odp::write_critical_csv(out.os(), rows);
    emit_gnuplot(c, odp::gnuplot_script(c.out, "Critical curves", "omega", "f", 1, {2}));
  } else if (sub == slm) {
    const auto map = odp::branch_map(slm_gamma, slm_f.values(), slm_w.values(), ode, c.workers);
    Output out(c.out);
    odp::write_config_header(out.os(), cfg_echo);
    std::string ns = "# branches:";
    for (int n : odp::branch_indices(map)) ns += " " + std::to_string(n);
    out.os() << ns << "\n";
    odp::write_branch_csv(out.os(), map);
    emit_gnuplot(c, "set datafile separator ','\nset datafile commentschars '#'\n"
                    "set xlabel 'u0'\nset ylabel 'Omega'\nset cblabel 'n'\n"
                    "plot '" + c.out + "' using 5:6:4 with points pt 5 ps 0.5 palette notitle\n"
                    "pause -1\n");
  } else if (sub == rect) {
    odp::RectifyConfig rc;
    rc.ensemble = r_ensemble;
    rc.workers = c.workers;
    if (r_steps == 0) {
      const odp::SlParams p{r_u0, r_Om, r_gamma};
      const auto r = odp::detect_rectification(p, rc);
      json rep = cfg_echo;
      rep["version"] = odp::version();
      rep["v_dc"] = r.v_dc;
      rep["u_dc"] = r.u_dc;
      rep["broken"] = r.broken;
      rep["status"] = odp::status_name(r.status);
      rep["n_guess"] = r.n_guess;
      for (const auto& m : r.members) {
        rep["members"].push_back({{"v0", m.v0}, {"w0", m.w0}, {"v_dc", m.v_dc}, {"u_dc", m.u_dc},
                                  {"n_guess", m.n_guess}, {"converged", m.converged}});
      }
      Output out(c.out);
      out.os() << rep.dump(2) << "\n";
    } else {
      const Grid g{r_u0, r_u0max, r_steps};
      Output out(c.out);
      odp::write_config_header(out.os(), cfg_echo);
      odp::write_rectification_header(out.os());
      for (double u : g.values()) {
        const odp::SlParams p{u, r_Om, r_gamma};
        odp::write_rectification_row(out.os(), p, odp::detect_rectification(p, rc));
      }
      emit_gnuplot(c, odp::gnuplot_script(c.out, "Rectified velocity", "u0", "<v>", 1, {4},
                                          "linespoints"));
    }
  } else if (sub == gain) {
    odp::GainScanOptions go;
    go.omega_max_multiple = g_mult;
    go.per_harmonic = g_per;
    go.workers = c.workers;
    const auto pts = odp::gain_scan(g_f.values(), g_w.values(), ode, go);
    Output out(c.out);
    odp::write_config_header(out.os(), cfg_echo);
    odp::write_gain_csv(out.os(), pts);
    emit_gnuplot(c, "set datafile separator ','\nset datafile commentschars '#'\n"
                    "set xlabel 'f'\nset ylabel 'omega'\n"
                    "plot '" + c.out + "' using 1:($4 > 0 ? $2 : 1/0) with points pt 5 "
                    "title 'gain', '" + c.out + "' using 5:2 with points pt 7 ps 0.3 "
                    "title 'exchange of stability'\npause -1\n");
  } else if (sub == prof) {
    const auto Omegas = odp::probe_grid(p_w, p_mult * p_w, p_per);
    const auto profile =
        p_method == "series"
            ? odp::profile_series(odp::fourier_tables(p_f, p_w, ode), Omegas, p_eps)
            : odp::profile_direct(p_f, p_w, Omegas, p_eps, {}, c.workers);
    Output out(c.out);
    odp::write_config_header(out.os(), cfg_echo);
    odp::write_profile_csv(out.os(), profile);
    emit_gnuplot(c, odp::gnuplot_script(c.out, "Absorption profile", "Omega", "A_JJ", 1, {2},
                                        "lines"));
  } else if (sub == wkb) {
    const auto rows = odp::wkb_ladder(odp::DriveSpec::sinusoidal(w_f, w_w), w_lambda, ode);
    Output out(c.out);
    odp::write_config_header(out.os(), cfg_echo);
    odp::write_wkb_csv(out.os(), rows);
    emit_gnuplot(c, "set datafile separator ','\nset datafile commentschars '#'\nset logscale xy\n"
                    "plot '" + c.out + "' using 1:4 with linespoints title 'relative error'\n"
                    "pause -1\n");
  }
  return 0;
}

}  // namespace
