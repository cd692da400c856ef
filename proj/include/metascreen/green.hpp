#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "metascreen/lattice.hpp"
#include "metascreen/specfun.hpp"

namespace metascreen {

using Vec2c = Eigen::Vector2cd;

// Quasi-periodic Helmholtz Green's function for a 1D lattice in 2D,
// satisfying G(xbar + a, xd) = e^{-i kbar a} G(xbar, xd), evaluated three
// interchangeable ways (image sum / modal series / Ewald split), plus the
// static (k = 0) closed form and the Dirichlet half-space combinations.

// 1D Green's function of d^2/dx^2 + alpha: |x|/2 for alpha = 0,
// e^{i sqrt(alpha)|x|}/(2 i sqrt(alpha)) for alpha > 0 and
// e^{sqrt(-alpha)|x|}/(2 sqrt(-alpha)) for alpha < 0.
Complex f_alpha(double alpha, double x);

// Truncated image sum over n in [-n_images, n_images]. The tail decays like
// n^{-1/2}; with accelerate=true a phase-aware tail extrapolation brings the
// truncation error below 1e-10 already for a few thousand images. Slow by
// design: this is the oracle the fast evaluators are validated against.
Complex green_direct(const Lattice& lat, const Wavenumbers& wn, const Vec2& d,
                     long n_images, bool accelerate = false);

// Modal (spectral) series truncated at |p| <= p_modes. Exponentially
// convergent for d.y() != 0; the plane of the sources is excluded.
Complex green_spectral(const Lattice& lat, const Wavenumbers& wn, const Vec2& d,
                       int p_modes);

// Ewald-split evaluator. The workspace caches image phases, series
// coefficients and Floquet mode data for one (lattice, wavenumbers, params)
// triple; value/gradient evaluations are then cheap and reentrant.
class EwaldWorkspace {
 public:
  EwaldWorkspace(const Lattice& lat, const Wavenumbers& wn, const EwaldParams& params);

  Complex value(const Vec2& d) const;
  Vec2c gradient(const Vec2& d) const;

  // Lattice self-interaction: lim_{d->0} [G(d) + (i/4) H0^(1)(k|d|)] and its
  // gradient. Used for diagonal quadrature corrections.
  Complex self_limit() const;
  Vec2c self_limit_gradient() const;

  const Lattice& lattice() const { return lat_; }
  const Wavenumbers& wavenumbers() const { return wn_; }
  double splitting() const { return split_; }

 private:
  struct Mode {
    double k1;       // kbar + 2 pi p / a
    Complex b;       // sqrt(k^2 - k1^2), Im >= 0 branch
    double kappa_e;  // |b| for evanescent modes (b = i kappa_e), else 0
  };

  Lattice lat_;
  Wavenumbers wn_;
  double split_;
  int q_terms_;
  std::vector<double> shifts_;   // n a
  std::vector<Complex> phases_;  // e^{-i kbar n a}
  std::vector<double> qcoef_;    // (k/2E)^{2q} / q!
  std::vector<Mode> modes_;
};

Complex green_ewald(const Lattice& lat, const Wavenumbers& wn, const Vec2& x,
                    const Vec2& y, const EwaldParams& params);

// Static (k = 0, kbar = 0) lattice Green's function in closed form:
// (1/4pi) log(4 (sin^2(pi xbar/a) + sinh^2(pi xd/a))).
double green_static(const Lattice& lat, const Vec2& d);
Vec2 green_static_gradient(const Lattice& lat, const Vec2& d);

// Dirichlet half-space combinations G_+(x, y) = G(x - y) - G(x - y*), where
// y* is the mirror image of y across the plane x_d = 0.
double halfspace_green_static(const Lattice& lat, const Vec2& x, const Vec2& y);
Vec2 halfspace_green_static_gradient(const Lattice& lat, const Vec2& x, const Vec2& y);

Complex halfspace_green_ewald(const EwaldWorkspace& ws, const Vec2& x, const Vec2& y);
Vec2c halfspace_green_ewald_gradient(const EwaldWorkspace& ws, const Vec2& x, const Vec2& y);

enum class Evaluator { direct, spectral, ewald };

Complex halfspace_green(const Lattice& lat, const Wavenumbers& wn, const Vec2& x,
                        const Vec2& y, const EwaldParams& params, Evaluator ev);

// First-order terms of the half-space Green's function expanded in the
// wavenumber scale: G_+^{eps k} = G0 + eps G1 + O(eps^2). g1_lattice is the
// k-independent lattice series entering G1; it is purely imaginary.
Complex g1_lattice(const Lattice& lat, const Vec2& d, int p_modes);

struct LowFreqTerms {
  double g0_plus = 0.0;     // static half-space value
  Complex g1_plus{0.0, 0.0};
  double tail_bound = 0.0;  // a-posteriori bound on the truncated g1 series
};

LowFreqTerms green_expansion_terms(const Lattice& lat, const Wavenumbers& wn,
                                   const Vec2& x, const Vec2& y, int p_modes = 20);

}  // namespace metascreen
