#pragma once

#include <complex>

#include <Eigen/Dense>

#include "metascreen/boundary.hpp"
#include "metascreen/green.hpp"
#include "metascreen/lattice.hpp"

namespace metascreen {

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

// Kernel selection for operator assembly. halfspace_periodic is the physical
// kernel (quasi-periodic + Dirichlet image); free_static replaces it by the
// free-space log kernel and exists so the quadrature core can be validated
// against closed-form disk spectra.
enum class LayerKernel { halfspace_periodic, free_static };

// Spectral quadrature weights for the 2 pi-periodic log kernel
// log(4 sin^2((t-s)/2)); entry d holds the weight for offset (i-j) mod N.
Eigen::VectorXd kress_log_weights(int n_nodes);

// Discrete single-layer operator acting on nodal density values. The log
// singularity of the free-space part is handled by the Kress split; the
// smooth periodic/image remainder goes through the plain trapezoid rule.
// kappa == 0 selects the static closed-form kernel (kbar is ignored).
MatrixXcd assemble_single_layer(const DiscreteBoundary& bdy, const Lattice& lat,
                                double kappa, double kbar, const EwaldParams& params,
                                LayerKernel kernel = LayerKernel::halfspace_periodic,
                                int jobs = 0);

// Discrete adjoint Neumann-Poincare operator (normal derivative at the
// target point of the single-layer kernel).
MatrixXcd assemble_adjoint_neumann(const DiscreteBoundary& bdy, const Lattice& lat,
                                   double kappa, double kbar, const EwaldParams& params,
                                   LayerKernel kernel = LayerKernel::halfspace_periodic,
                                   int jobs = 0);

// Off-boundary single-layer field at x. Quadrature accuracy degrades within
// about one node spacing of the boundary; a warning is emitted there.
Complex eval_field(const DiscreteBoundary& bdy, const VectorXcd& density,
                   const Lattice& lat, double kappa, double kbar,
                   const EwaldParams& params, const Vec2& x);

// 2x2 block operator of the coupled inside/outside scattering system,
// assembled at wavenumber arguments (eps k_b, eps k) with coupling `delta` on
// the lower-right block. The physical solve uses eps = 1 and the physical
// density contrast; the asymptotic-scaling solve uses delta = mu eps^2.
struct BlockOperator {
  MatrixXcd matrix;
  double k = 0.0, k_b = 0.0, kbar = 0.0;
  double epsilon = 1.0, delta = 0.0;
};

BlockOperator assemble_block(const DiscreteBoundary& bdy, const Lattice& lat,
                             double k, double k_b, double kbar, double epsilon,
                             double delta, const EwaldParams& params, int jobs = 0);

// Right-hand side of the block system for a plane wave mirrored by the
// Dirichlet plane: trace of the background field on the boundary, and mu
// times its scaled normal derivative.
VectorXcd incident_rhs(const DiscreteBoundary& bdy, double kd, double kbar,
                       double epsilon, double mu, Complex u0);

}  // namespace metascreen
