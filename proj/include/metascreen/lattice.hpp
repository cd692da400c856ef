#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "metascreen/errors.hpp"

namespace metascreen {

using Vec2 = Eigen::Vector2d;

// 1D lattice a*Z along the tangential direction of the half-plane. The unit
// cell measure equals the period in 2D.
struct Lattice {
  double period = 10.0;

  double cell_measure() const { return period; }
  double reciprocal_step() const { return 2.0 * M_PI / period; }

  void validate() const {
    if (!(period > 0.0)) throw ConfigError("lattice period must be positive");
  }
};

// Total/tangential wavenumber pair of a plane wave. The supported branch has
// kbar^2 <= k^2 so the normal component kd is real.
struct Wavenumbers {
  double k = 0.0;
  double kbar = 0.0;

  double kd() const {
    double s = k * k - kbar * kbar;
    if (s < 0.0) throw RegimeError("wavenumbers: |kbar| > k is unsupported");
    return std::sqrt(s);
  }

  // theta is the incidence angle against the plane; normal incidence is
  // theta = pi/2 (kbar = 0).
  static Wavenumbers incidence(double k, double theta) {
    return Wavenumbers{k, k * std::cos(theta)};
  }
};

// Ewald truncation orders: n in [-N, N] spatial images, q in [0, Q] terms of
// the exponential-integral series, p in [-P, P] spectral modes. A splitting
// parameter <= 0 selects the default sqrt(pi)/a.
struct EwaldParams {
  double splitting = 0.0;
  int n_images = 5;
  int q_terms = 15;
  int p_modes = 5;

  double resolve_splitting(const Lattice& lat) const {
    return splitting > 0.0 ? splitting : std::sqrt(M_PI) / lat.period;
  }

  EwaldParams notched_up() const {
    return EwaldParams{splitting, n_images + 2, q_terms + 5, p_modes + 2};
  }

  void validate() const {
    if (n_images < 1 || q_terms < 1 || p_modes < 1)
      throw ConfigError("ewald truncation orders must be >= 1");
  }
};

inline bool below_first_diffraction(const Lattice& lat, const Wavenumbers& wn) {
  return wn.k > 0.0 && wn.k + std::fabs(wn.kbar) < lat.reciprocal_step();
}

// Throws when any Floquet mode is at cutoff (Wood anomaly) or when the
// configuration is at/above the first diffraction order.
inline void require_regime(const Lattice& lat, const Wavenumbers& wn, int p_modes) {
  if (!(wn.k > 0.0)) throw DomainError("wavenumber must be positive");
  if (!below_first_diffraction(lat, wn))
    throw RegimeError("configuration at or above the first diffraction order");
  for (int p = -p_modes; p <= p_modes; ++p) {
    double k1p = wn.kbar + lat.reciprocal_step() * p;
    if (std::fabs(wn.k * wn.k - k1p * k1p) < 1e-10 * wn.k * wn.k)
      throw RegimeError("Wood anomaly: a Floquet mode is at cutoff");
  }
}

}  // namespace metascreen
