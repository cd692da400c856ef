#include "metascreen/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "metascreen/errors.hpp"
#include "metascreen/version.hpp"

namespace metascreen {

using json = nlohmann::ordered_json;

namespace {

json geometry_to_json(const BubbleGeometry& g) {
  json j;
  j["shape"] = g.shape == BubbleGeometry::Shape::circle ? "circle" : "ellipse";
  j["radius"] = g.radius;
  j["semi_x"] = g.semi_x;
  j["semi_y"] = g.semi_y;
  j["standoff"] = g.standoff;
  return j;
}

void geometry_from_json(const json& j, BubbleGeometry& g) {
  if (j.contains("shape")) {
    std::string s = j["shape"];
    if (s == "circle") g.shape = BubbleGeometry::Shape::circle;
    else if (s == "ellipse") g.shape = BubbleGeometry::Shape::ellipse;
    else throw ConfigError("geometry.shape must be 'circle' or 'ellipse'");
  }
  g.radius = j.value("radius", g.radius);
  g.semi_x = j.value("semi_x", g.semi_x);
  g.semi_y = j.value("semi_y", g.semi_y);
  g.standoff = j.value("standoff", g.standoff);
}

json config_json(const RunConfig& c) {
  json j;
  j["version"] = kVersion;
  j["lattice"]["period"] = c.lattice.period;
  j["geometry"] = geometry_to_json(c.geometry);
  j["media"]["rho"] = c.media.rho;
  j["media"]["rho_b"] = c.media.rho_b;
  j["media"]["kappa"] = c.media.kappa;
  j["media"]["kappa_b"] = c.media.kappa_b;
  j["theta"] = c.theta;
  j["nodes"] = c.nodes;
  j["ewald"]["splitting"] = c.ewald.splitting;
  j["ewald"]["n_images"] = c.ewald.n_images;
  j["ewald"]["q_terms"] = c.ewald.q_terms;
  j["ewald"]["p_modes"] = c.ewald.p_modes;
  j["damping"]["eta_other"] = c.damping.eta_other;
  j["u0"] = c.u0;
  j["epsilon"] = c.epsilon;
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back({p.x(), p.y()});
  j["green_eval"]["points"] = pts;
  j["green_eval"]["source"] = {c.source.x(), c.source.y()};
  j["green_eval"]["k"] = c.eval_k;
  j["green_eval"]["oracle_images"] = c.oracle_images;
  j["char_search"]["enabled"] = c.char_search;
  j["char_search"]["omega_lo"] = c.omega_lo;
  j["char_search"]["omega_hi"] = c.omega_hi;
  j["char_search"]["samples"] = c.omega_samples;
  j["char_search"]["track_eigenvalues"] = c.track_eigenvalues;
  j["reflection_sweep"]["omega_lo"] = c.sweep_omega_lo;
  j["reflection_sweep"]["omega_hi"] = c.sweep_omega_hi;
  j["reflection_sweep"]["samples"] = c.sweep_samples;
  j["trends"]["periods"] = c.trend_periods;
  j["trends"]["radii"] = c.trend_radii;
  j["trends"]["standoffs"] = c.trend_standoffs;
  j["trends"]["fixed_radius"] = c.trend_fixed_radius;
  j["trends"]["fixed_period"] = c.trend_fixed_period;
  j["jobs"] = c.jobs;
  j["out_dir"] = c.out_dir;
  j["format"] = c.format;
  return j;
}

}  // namespace

void RunConfig::resolve() {
  lattice.validate();
  ewald.validate();
  media.validate();
  geometry.validate(lattice);
  if (nodes < 16 || nodes % 2 != 0)
    throw ConfigError("nodes must be even and >= 16");
  if (!(theta > 0.0) || !(theta > 0.0 && theta <= M_PI))
    throw ConfigError("theta must lie in (0, pi]");
  if (damping.eta_other < 0.0) throw ConfigError("eta_other must be >= 0");
  if (format != "csv" && format != "json")
    throw ConfigError("format must be 'csv' or 'json'");
  if (sweep_samples < 2) throw ConfigError("reflection sweep needs >= 2 samples");
  if (trend_periods.empty()) {
    // log-spaced periods for the period trend
    for (int i = 0; i < 13; ++i)
      trend_periods.push_back(4.0 * std::pow(40.0 / 4.0, i / 12.0));
  }
  if (trend_radii.empty()) {
    double bmin = *std::min_element(trend_standoffs.begin(), trend_standoffs.end());
    for (int i = 0; i < 15; ++i)
      trend_radii.push_back(0.1 + (0.95 * bmin - 0.1) * i / 14.0);
  }
}

RunConfig default_config() {
  RunConfig c;
  c.resolve();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  try {
    if (j.contains("lattice")) c.lattice.period = j["lattice"].value("period", c.lattice.period);
    if (j.contains("geometry")) geometry_from_json(j["geometry"], c.geometry);
    if (j.contains("media")) {
      const auto& m = j["media"];
      if (m.contains("delta") || m.contains("v") || m.contains("v_b")) {
        c.media = MediaConfig::from_contrast(m.value("delta", 1e-3), m.value("v", 1.0),
                                             m.value("v_b", 1.0));
      } else {
        c.media.rho = m.value("rho", c.media.rho);
        c.media.rho_b = m.value("rho_b", c.media.rho_b);
        c.media.kappa = m.value("kappa", c.media.kappa);
        c.media.kappa_b = m.value("kappa_b", c.media.kappa_b);
      }
    }
    c.theta = j.value("theta", c.theta);
    c.nodes = j.value("nodes", c.nodes);
    if (j.contains("ewald")) {
      const auto& e = j["ewald"];
      c.ewald.splitting = e.value("splitting", c.ewald.splitting);
      c.ewald.n_images = e.value("n_images", c.ewald.n_images);
      c.ewald.q_terms = e.value("q_terms", c.ewald.q_terms);
      c.ewald.p_modes = e.value("p_modes", c.ewald.p_modes);
    }
    if (j.contains("damping")) c.damping.eta_other = j["damping"].value("eta_other", 0.0);
    c.u0 = j.value("u0", c.u0);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("green_eval")) {
      const auto& g = j["green_eval"];
      if (g.contains("points")) {
        c.points.clear();
        for (const auto& p : g["points"])
          c.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
      if (g.contains("source"))
        c.source = Vec2(g["source"].at(0).get<double>(), g["source"].at(1).get<double>());
      c.eval_k = g.value("k", c.eval_k);
      c.oracle_images = g.value("oracle_images", c.oracle_images);
    }
    if (j.contains("char_search")) {
      const auto& s = j["char_search"];
      c.char_search = s.value("enabled", c.char_search);
      c.omega_lo = s.value("omega_lo", c.omega_lo);
      c.omega_hi = s.value("omega_hi", c.omega_hi);
      c.omega_samples = s.value("samples", c.omega_samples);
      c.track_eigenvalues = s.value("track_eigenvalues", c.track_eigenvalues);
    }
    if (j.contains("reflection_sweep")) {
      const auto& s = j["reflection_sweep"];
      c.sweep_omega_lo = s.value("omega_lo", c.sweep_omega_lo);
      c.sweep_omega_hi = s.value("omega_hi", c.sweep_omega_hi);
      c.sweep_samples = s.value("samples", c.sweep_samples);
    }
    if (j.contains("trends")) {
      const auto& t = j["trends"];
      if (t.contains("periods")) c.trend_periods = t["periods"].get<std::vector<double>>();
      if (t.contains("radii")) c.trend_radii = t["radii"].get<std::vector<double>>();
      if (t.contains("standoffs")) c.trend_standoffs = t["standoffs"].get<std::vector<double>>();
      c.trend_fixed_radius = t.value("fixed_radius", c.trend_fixed_radius);
      c.trend_fixed_period = t.value("fixed_period", c.trend_fixed_period);
    }
    c.jobs = j.value("jobs", c.jobs);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.format = j.value("format", c.format);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  c.resolve();
  return c;
}

std::string config_to_json(const RunConfig& cfg) { return config_json(cfg).dump(2); }

std::string report_to_json(const ResonanceReport& rep, const RunConfig& cfg) {
  json j;
  j["schema"] = "metascreen.resonance_report/1";
  j["version"] = kVersion;
  j["config"] = json::parse(config_to_json(cfg));
  j["period"] = rep.period;
  j["theta"] = rep.theta;
  j["delta"] = rep.delta;
  j["v"] = rep.v;
  j["v_b"] = rep.v_b;
  j["area"] = rep.area;
  j["cell"] = rep.cell;
  j["capacity"] = rep.capacity;
  j["capacity_alt_route"] = rep.capacity_alt;
  j["m1"] = rep.m1;
  j["mu_M"] = rep.mu_M;
  j["omega_M"] = rep.omega_M;
  j["alpha0_inf"] = rep.alpha0_inf;
  j["alpha1_inf"] = rep.alpha1_inf;
  if (rep.omega_c) j["omega_c"] = *rep.omega_c;
  else j["omega_c"] = nullptr;
  j["eta_other"] = rep.eta_other;
  j["eta_rad_at_omega_M"] =
      radiative_damping(rep.omega_M / rep.v * std::sin(rep.theta), rep.m1, rep.capacity, rep.cell);
  j["psi0"] = std::vector<double>(rep.psi0.data(), rep.psi0.data() + rep.psi0.size());
  j["psi1"] = std::vector<double>(rep.psi1.data(), rep.psi1.data() + rep.psi1.size());
  if (!rep.sv_curve.empty()) {
    json curve = json::array();
    for (const auto& row : rep.sv_curve) curve.push_back({row[0], row[1]});
    j["sv_curve"] = curve;
  }
  return j.dump(2);
}

}  // namespace metascreen
