#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "metascreen/config.hpp"
#include "metascreen/errors.hpp"
#include "metascreen/parallel.hpp"
#include "metascreen/version.hpp"

namespace fs = std::filesystem;
using namespace metascreen;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Every output file embeds the resolved config and tool version; identical
// configs produce byte-identical files.
void write_preamble(std::ofstream& out, const RunConfig& cfg) {
  out << "# metascreen " << kVersion << "\n";
  std::string one_line = config_to_json(cfg);
  for (auto& ch : one_line)
    if (ch == '\n') ch = ' ';
  out << "# config " << one_line << "\n";
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  fs::path p = fs::path(cfg.out_dir) / name;
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot open output file: " + p.string());
  std::cout << "writing " << p.string() << "\n";
  return out;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

bool parses_as_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}

// Writes a table as CSV or JSON per the configured format; cell strings are
// preformatted so both formats are byte-stable across runs.
void write_table(const RunConfig& cfg, const std::string& stem, const Table& t) {
  if (cfg.format == "json") {
    auto out = open_output(cfg, stem + ".json");
    std::string one_line = config_to_json(cfg);
    for (auto& ch : one_line)
      if (ch == '\n') ch = ' ';
    out << "{\n  \"version\": \"" << kVersion << "\",\n  \"config\": " << one_line
        << ",\n  \"columns\": [";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? ", " : "") << '"' << t.columns[c] << '"';
    out << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      out << "    [";
      for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
        const std::string& cell = t.rows[r][c];
        out << (c ? ", " : "");
        if (parses_as_number(cell)) out << cell;
        else out << '"' << cell << '"';
      }
      out << (r + 1 < t.rows.size() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
    return;
  }
  auto out = open_output(cfg, stem + ".csv");
  write_preamble(out, cfg);
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out << (c ? "," : "") << t.columns[c];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
}

int cmd_print_config(const RunConfig& cfg) {
  std::cout << config_to_json(cfg) << "\n";
  return 0;
}

int cmd_green_eval(const RunConfig& cfg, bool oracle) {
  Wavenumbers wn = Wavenumbers::incidence(cfg.eval_k, cfg.theta);
  Table t;
  t.columns = {"xbar", "xd", "evaluator", "re", "im"};
  if (oracle) t.columns.push_back("abs_err_vs_oracle");
  for (const auto& p : cfg.points) {
    Complex ref(0.0, 0.0);
    if (oracle) ref = green_direct(cfg.lattice, wn, p, cfg.oracle_images, true);
    auto row = [&](const char* name, Complex g, bool with_oracle) {
      std::vector<std::string> r{fmt(p.x()), fmt(p.y()), name, fmt(g.real()), fmt(g.imag())};
      if (oracle) r.push_back(with_oracle ? fmt(std::abs(g - ref)) : "");
      t.rows.push_back(std::move(r));
    };
    auto error_row = [&](const char* name, const char* what) {
      std::vector<std::string> r{fmt(p.x()), fmt(p.y()), name, "error", what};
      if (oracle) r.push_back("");
      t.rows.push_back(std::move(r));
    };
    try {
      EwaldWorkspace ws(cfg.lattice, wn, cfg.ewald);
      row("ewald", ws.value(p), true);
    } catch (const std::exception& e) {
      error_row("ewald", e.what());
    }
    try {
      // truncation from the evanescent decay e^{-2 pi P |xd| / a}
      int modes = 4 * cfg.ewald.p_modes;
      if (p.y() != 0.0)
        modes = std::max<int>(modes,
                              static_cast<int>(std::ceil(28.0 * cfg.lattice.period /
                                                         (2.0 * M_PI * std::fabs(p.y())))));
      row("spectral", green_spectral(cfg.lattice, wn, p, std::min(modes, 4000)), true);
    } catch (const std::exception& e) {
      error_row("spectral", e.what());
    }
    try {
      Complex gp = halfspace_green(cfg.lattice, wn, p, cfg.source, cfg.ewald, Evaluator::ewald);
      row("halfspace-ewald", gp, false);
    } catch (const std::exception& e) {
      error_row("halfspace-ewald", e.what());
    }
  }
  write_table(cfg, "green_eval", t);
  return 0;
}

ResonanceReport run_report(const RunConfig& cfg, bool with_search) {
  DiscreteBoundary bdy = discretize(cfg.geometry, cfg.nodes);
  ReportOptions opts;
  opts.jobs = cfg.jobs;
  opts.run_char_search = with_search;
  opts.search.omega_lo = cfg.omega_lo;
  opts.search.omega_hi = cfg.omega_hi;
  opts.search.samples = cfg.omega_samples;
  opts.search.jobs = cfg.jobs;
  opts.search.track_eigenvalues = cfg.track_eigenvalues;
  return compute_resonance_report(bdy, cfg.lattice, cfg.media, cfg.theta, cfg.damping,
                                  cfg.ewald, opts);
}

void write_sv_curve(const RunConfig& cfg, const ResonanceReport& rep) {
  Table t;
  t.columns = {"omega", "sigma_min"};
  for (const auto& row : rep.sv_curve) t.rows.push_back({fmt(row[0]), fmt(row[1])});
  write_table(cfg, "sv_curve", t);
}

int cmd_resonance(const RunConfig& cfg) {
  ResonanceReport rep = run_report(cfg, cfg.char_search);
  auto out = open_output(cfg, "resonance_report.json");
  out << report_to_json(rep, cfg) << "\n";
  if (!rep.sv_curve.empty()) write_sv_curve(cfg, rep);
  std::cout << "omega_M = " << fmt(rep.omega_M) << "  C+ = " << fmt(rep.capacity)
            << "  M1 = " << fmt(rep.m1) << "\n";
  if (rep.omega_c) std::cout << "omega_c = " << fmt(*rep.omega_c) << "\n";
  return 0;
}

int cmd_char_search(const RunConfig& cfg) {
  DiscreteBoundary bdy = discretize(cfg.geometry, cfg.nodes);
  ReportOptions base;
  base.jobs = cfg.jobs;
  ResonanceReport rep = compute_resonance_report(bdy, cfg.lattice, cfg.media, cfg.theta,
                                                 cfg.damping, cfg.ewald, base);
  CharSearchOptions opts;
  opts.omega_lo = cfg.omega_lo > 0.0 ? cfg.omega_lo : 0.7 * rep.omega_M;
  opts.omega_hi = cfg.omega_hi > 0.0 ? cfg.omega_hi : 1.3 * rep.omega_M;
  opts.samples = cfg.omega_samples;
  opts.jobs = cfg.jobs;
  opts.track_eigenvalues = cfg.track_eigenvalues;
  CharSearchResult res =
      find_characteristic_value(bdy, cfg.lattice, cfg.media, cfg.theta, cfg.ewald, opts);
  Table t;
  t.columns = {"omega", "sigma_min"};
  if (!res.eig_curve.empty()) t.columns.push_back("eig_min");
  for (const auto& row : res.curve) {
    std::vector<std::string> r{fmt(row[0]), fmt(row[1])};
    if (!res.eig_curve.empty()) {
      std::string eig;
      for (const auto& e : res.eig_curve)
        if (e[0] == row[0]) eig = fmt(e[1]);
      r.push_back(eig);
    }
    t.rows.push_back(std::move(r));
  }
  write_table(cfg, "char_search", t);
  std::cout << "omega_M (formula) = " << fmt(rep.omega_M) << "\n";
  if (!res.omega_c)
    throw ConvergenceError("char search: no interior minimum in the scanned range");
  std::cout << "omega_c (operator) = " << fmt(*res.omega_c) << "  rel. gap = "
            << fmt(std::fabs(*res.omega_c - rep.omega_M) / rep.omega_M) << "\n";
  return 0;
}

int cmd_reflection_sweep(const RunConfig& cfg) {
  ResonanceReport rep = run_report(cfg, false);
  double lo = cfg.sweep_omega_lo > 0.0 ? cfg.sweep_omega_lo : 0.5 * rep.omega_M;
  double hi = cfg.sweep_omega_hi > lo ? cfg.sweep_omega_hi : 1.5 * rep.omega_M;
  const int M = cfg.sweep_samples;
  std::vector<Complex> vals(M);
  std::vector<double> omegas(M);
  for (int i = 0; i < M; ++i) omegas[i] = lo + (hi - lo) * i / (M - 1);
  parallel_for(M, cfg.jobs,
               [&](std::int64_t i) { vals[i] = reflection(omegas[i], rep, cfg.damping); });
  Table t;
  t.columns = {"omega", "re_R", "im_R", "abs_R", "phase"};
  for (int i = 0; i < M; ++i)
    t.rows.push_back({fmt(omegas[i]), fmt(vals[i].real()), fmt(vals[i].imag()),
                      fmt(std::abs(vals[i])), fmt(std::arg(vals[i]))});
  write_table(cfg, "reflection", t);
  std::cout << "omega_M = " << fmt(rep.omega_M) << ", swept " << M << " samples\n";
  return 0;
}

int cmd_trends(const RunConfig& cfg) {
  struct Row {
    const char* mode;
    double a, r, beta, c, m1, w;
  };
  struct Task {
    const char* mode;
    double a, r, beta;
  };
  std::vector<Task> tasks;
  for (double beta : cfg.trend_standoffs)
    for (double a : cfg.trend_periods) {
      if (beta <= cfg.trend_fixed_radius) continue;
      tasks.push_back({"period", a, cfg.trend_fixed_radius, beta});
    }
  for (double beta : cfg.trend_standoffs)
    for (double r : cfg.trend_radii) {
      if (r >= 0.95 * beta || 2.0 * r >= cfg.trend_fixed_period) continue;
      tasks.push_back({"radius", cfg.trend_fixed_period, r, beta});
    }

  std::vector<Row> rows(tasks.size());
  parallel_for(static_cast<std::int64_t>(tasks.size()), cfg.jobs, [&](std::int64_t i) {
    const Task& t = tasks[i];
    Lattice lat{t.a};
    BubbleGeometry geom;
    geom.shape = BubbleGeometry::Shape::circle;
    geom.radius = t.r;
    geom.standoff = t.beta;
    geom.validate(lat);
    DiscreteBoundary bdy = discretize(geom, cfg.nodes);
    MatrixXcd s0 = assemble_single_layer(bdy, lat, 0.0, 0.0, cfg.ewald,
                                         LayerKernel::halfspace_periodic, 1);
    MatrixXcd k0 = assemble_adjoint_neumann(bdy, lat, 0.0, 0.0, cfg.ewald,
                                            LayerKernel::halfspace_periodic, 1);
    double c = compute_capacity(bdy, s0);
    Eigen::VectorXd psi0 = compute_psi0(k0, bdy);
    auto [m1, psi1] = compute_m1_psi1(bdy, k0, psi0);
    (void)psi1;
    rows[i] = {t.mode, t.a, t.r, t.beta, c, m1, minnaert_frequency(c, bdy.area, cfg.media)};
  });
  Table t;
  t.columns = {"mode", "period", "radius", "standoff", "capacity", "m1", "omega_M"};
  for (const auto& r : rows)
    t.rows.push_back({r.mode, fmt(r.a), fmt(r.r), fmt(r.beta), fmt(r.c), fmt(r.m1), fmt(r.w)});
  write_table(cfg, "trends", t);
  std::cout << "computed " << rows.size() << " trend points\n";
  return 0;
}

int cmd_self_test(const RunConfig& cfg) {
  int failures = 0;
  auto check = [&](const char* name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  // three-evaluator agreement on a fixed pseudo-random sample
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> ux(0.05, 0.95), uk(0.1, 1.0), uth(1.0, M_PI / 2.0);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    Lattice lat{10.0};
    Wavenumbers wn = Wavenumbers::incidence(uk(rng) / lat.period, uth(rng));
    Vec2 d(ux(rng) * lat.period, 0.2 * lat.period + ux(rng) * lat.period);
    Complex ge = green_ewald(lat, wn, d, Vec2(0, 0), cfg.ewald);
    Complex gs = green_spectral(lat, wn, d, 4 * cfg.ewald.p_modes);
    Complex gd = green_direct(lat, wn, d, 4000, true);
    worst = std::max({worst, std::abs(ge - gs), std::abs(ge - gd)});
  }
  check("green evaluators agree (5 random triples)", worst < 1e-7, "max |diff| = " + fmt(worst));

  // unimodular reflection without extra damping
  ResonanceReport rep = run_report(cfg, false);
  DampingModel no_damp;
  double dev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    double w = rep.omega_M * (0.5 + i / 100.0);
    dev = std::max(dev, std::fabs(std::abs(reflection(w, rep, no_damp)) - 1.0));
  }
  check("|R| = 1 without non-radiative damping", dev < 1e-12, "max deviation = " + fmt(dev));

  // capacity route consistency
  double rel = std::fabs(rep.capacity - rep.capacity_alt) / rep.capacity;
  check("capacity route agreement", rel < 1e-6, "rel diff = " + fmt(rel));

  if (failures) throw ConvergenceError(std::to_string(failures) + " self-test check(s) failed");
  std::cout << "all self-tests passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-element solver and analysis toolkit for periodic bubble "
               "meta-screens above a sound-soft plane"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough();

  std::string config_path;
  int jobs = -1;
  std::string out_dir;
  std::string format;
  bool oracle = false;
  app.add_option("--config", config_path, "JSON config file (defaults used when omitted)");
  app.add_option("--jobs", jobs, "worker threads (default: available cores)");
  app.add_option("--out", out_dir, "output directory (default from config)");
  app.add_option("--format", format, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--oracle", oracle, "enable slow direct-sum cross-checks in green-eval");

  auto* green = app.add_subcommand("green-eval",
      "evaluate the quasi-periodic Green's function at configured points; "
      "CSV columns: xbar, xd, evaluator, re, im[, abs_err_vs_oracle]");
  auto* reso = app.add_subcommand("resonance",
      "capacity, dipole constant, Minnaert frequency and far-field constants; "
      "JSON report (schema metascreen.resonance_report/1) plus sv_curve.csv "
      "when the characteristic-value search is enabled");
  auto* chars = app.add_subcommand("char-search",
      "smallest-singular-value scan of the block operator; CSV columns: "
      "omega, sigma_min[, eig_min]");
  auto* refl = app.add_subcommand("reflection-sweep",
      "reflection coefficient over a frequency band; CSV columns: omega, "
      "re_R, im_R, abs_R, phase");
  auto* trends = app.add_subcommand("trends",
      "formula-frequency sweeps over period and radius; CSV columns: mode, "
      "period, radius, standoff, capacity, m1, omega_M");
  auto* print = app.add_subcommand("print-config", "print the resolved configuration");
  auto* selftest = app.add_subcommand("self-test", "quick internal consistency checks");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (jobs >= 0) cfg.jobs = jobs;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = format;
    cfg.resolve();

    if (*print) return cmd_print_config(cfg);
    if (*green) return cmd_green_eval(cfg, oracle);
    if (*reso) return cmd_resonance(cfg);
    if (*chars) return cmd_char_search(cfg);
    if (*refl) return cmd_reflection_sweep(cfg);
    if (*trends) return cmd_trends(cfg);
    if (*selftest) return cmd_self_test(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
