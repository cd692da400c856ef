#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "metascreen/boundary.hpp"
#include "metascreen/layer_ops.hpp"

namespace metascreen {

// Physical media of the background fluid and the bubble interior. The
// contrast delta = rho_b / rho is the small parameter of the high-contrast
// regime; wave speeds are derived from the bulk moduli.
struct MediaConfig {
  double rho = 1e3;
  double rho_b = 1.0;
  double kappa = 1e3;
  double kappa_b = 1.0;

  double delta() const { return rho_b / rho; }
  double v() const { return std::sqrt(kappa / rho); }
  double v_b() const { return std::sqrt(kappa_b / rho_b); }
  bool high_contrast() const { return delta() <= 0.1; }

  static MediaConfig from_contrast(double delta, double v, double v_b);
  void validate() const;
};

// Lumped non-radiative damping added to the radiative term in the reflection
// denominator.
struct DampingModel {
  double eta_other = 0.0;
};

// eta_rad(omega) = omega M1^2 C / (v_d |Gamma|) with v_d = omega / k_d.
inline double radiative_damping(double kd, double m1, double capacity, double cell) {
  return kd * m1 * m1 * capacity / cell;
}

struct ResonanceReport {
  // resolved inputs
  double period = 0.0;
  double theta = M_PI / 2.0;
  double delta = 0.0, v = 0.0, v_b = 0.0;
  double area = 0.0;
  double cell = 0.0;

  // computed constants
  double capacity = 0.0;      // C+
  double capacity_alt = 0.0;  // second route, -1/mean(S psi0)
  double m1 = 0.0;
  double mu_M = 0.0;          // evaluated at omega_M
  double omega_M = 0.0;
  double alpha0_inf = 0.0;
  double alpha1_inf = 0.0;
  Eigen::VectorXd psi0;
  Eigen::VectorXd psi1;

  std::optional<double> omega_c;
  std::vector<std::array<double, 2>> sv_curve;  // (omega, sigma_min)

  double eta_other = 0.0;
};

// Monopole eigendensity: eigenvector of the static adjoint Neumann-Poincare
// operator for the eigenvalue nearest 1/2, normalized to <1, psi0> = 1.
Eigen::VectorXd compute_psi0(const MatrixXcd& kstar, const DiscreteBoundary& bdy);

// Periodic capacity C+ = -<S^{-1} 1, 1> (first route).
double compute_capacity(const DiscreteBoundary& bdy, const MatrixXcd& s0);

// Cross-check route: S[psi0] is constant on the boundary and C+ = -1/const.
double capacity_from_psi0(const DiscreteBoundary& bdy, const MatrixXcd& s0,
                          const Eigen::VectorXd& psi0);

// Dipole data: M1 = <psi0, x_d> and the mean-zero solution of
// (-1/2 + K*) psi1 = nu_d.
std::pair<double, Eigen::VectorXd> compute_m1_psi1(const DiscreteBoundary& bdy,
                                                   const MatrixXcd& kstar,
                                                   const Eigen::VectorXd& psi0);

double minnaert_frequency(double capacity, double area, const MediaConfig& media);

struct CharSearchOptions {
  double omega_lo = 0.0;   // <= 0: derived from the formula frequency
  double omega_hi = 0.0;
  int samples = 40;
  double rel_tol = 1e-4;
  int jobs = 0;
  bool track_eigenvalues = false;
};

struct CharSearchResult {
  std::optional<double> omega_c;
  std::vector<std::array<double, 2>> curve;      // (omega, sigma_min), sorted
  std::vector<std::array<double, 2>> eig_curve;  // (omega, |lambda|_min) when tracked
};

// Grid scan of the smallest singular value of the physical block operator
// over omega, followed by golden-section refinement around the interior
// minimum. omega_c is empty when the scan finds no interior dip.
CharSearchResult find_characteristic_value(const DiscreteBoundary& bdy, const Lattice& lat,
                                           const MediaConfig& media, double theta,
                                           const EwaldParams& params,
                                           const CharSearchOptions& opts);

// Resonant scattering amplitude g_s(mu, eps).
Complex scattering_gs(double mu, double epsilon, double mu_M, double m1,
                      double capacity, double kd, double cell);

// Reflection coefficient of the screen at frequency omega.
Complex reflection(double omega, const ResonanceReport& rep, const DampingModel& damping);

// Far-field constants of the monopole/dipole boundary-layer profiles.
std::pair<double, double> alpha_infinity(const DiscreteBoundary& bdy,
                                         const Eigen::VectorXd& psi1, double m1,
                                         double capacity, double cell);

// Scattered-field perturbation (far-field plus boundary-layer part) at a
// microscopic point x with x_d above the bubble layer.
Complex scattered_field(const ResonanceReport& rep, const DiscreteBoundary& bdy,
                        const Lattice& lat, const Wavenumbers& wn, double epsilon,
                        const Vec2& x, double u0 = 1.0);

struct ReportOptions {
  bool run_char_search = false;
  CharSearchOptions search;
  int jobs = 0;
};

ResonanceReport compute_resonance_report(const DiscreteBoundary& bdy, const Lattice& lat,
                                         const MediaConfig& media, double theta,
                                         const DampingModel& damping,
                                         const EwaldParams& params,
                                         const ReportOptions& opts = {});

}  // namespace metascreen
