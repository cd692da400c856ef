#pragma once

#include <string>
#include <vector>

#include "metascreen/boundary.hpp"
#include "metascreen/resonance.hpp"

namespace metascreen {

// Resolved batch-run configuration. Loaded from a JSON file; every field has
// a default so `print-config` documents the full schema.
struct RunConfig {
  Lattice lattice;                 // period a
  BubbleGeometry geometry;         // shape, radius/semi-axes, standoff
  MediaConfig media;               // rho, rho_b, kappa, kappa_b
  double theta = M_PI / 2.0;       // incidence angle; pi/2 is normal incidence
  int nodes = 128;
  EwaldParams ewald;
  DampingModel damping;
  double u0 = 1.0;
  double epsilon = 1.0;

  // green-eval inputs: displacement points for the quasi-periodic function
  // and a source point for the half-space variant
  std::vector<Vec2> points{{3.0, 7.0}, {1.3, 0.9}, {0.7, 0.0}};
  Vec2 source{0.0, 1.0};
  double eval_k = 0.04;            // wavenumber for green-eval rows
  long oracle_images = 100000;

  // characteristic-value search
  bool char_search = false;
  double omega_lo = 0.0;           // 0: auto 0.7/1.3 band around omega_M
  double omega_hi = 0.0;
  int omega_samples = 40;
  bool track_eigenvalues = false;

  // reflection sweep
  double sweep_omega_lo = 0.0;     // 0: auto band around omega_M
  double sweep_omega_hi = 0.0;
  int sweep_samples = 1000;

  // trend sweeps
  std::vector<double> trend_periods;  // defaults set in resolve()
  std::vector<double> trend_radii;
  std::vector<double> trend_standoffs{1.5, 2.0, 3.0};
  double trend_fixed_radius = 1.0;
  double trend_fixed_period = 5.0;

  int jobs = 0;                    // 0: hardware concurrency
  std::string out_dir = "out";
  std::string format = "csv";

  void resolve();                  // fill derived defaults, validate
};

RunConfig load_config(const std::string& path);
RunConfig default_config();
std::string config_to_json(const RunConfig& cfg);

std::string report_to_json(const ResonanceReport& rep, const RunConfig& cfg);

}  // namespace metascreen
