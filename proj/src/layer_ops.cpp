#include "metascreen/layer_ops.hpp"

#include <cmath>
#include <iostream>
#include <memory>

#include "metascreen/errors.hpp"
#include "metascreen/parallel.hpp"

namespace metascreen {

namespace {

constexpr double kPi = 3.14159265358979323846264338;
constexpr double kEulerGamma = 0.57721566490153286060651209;
const Complex kI(0.0, 1.0);

double log_kernel_arg(double ti, double tj) {
  double s = std::sin(0.5 * (ti - tj));
  return std::log(4.0 * s * s);
}

}  // namespace

Eigen::VectorXd kress_log_weights(int n_nodes) {
  if (n_nodes < 4 || n_nodes % 2 != 0)
    throw ConfigError("kress_log_weights: node count must be even and >= 4");
  const int n = n_nodes / 2;
  Eigen::VectorXd r(n_nodes);
  for (int d = 0; d < n_nodes; ++d) {
    double td = 2.0 * kPi * d / n_nodes;
    double acc = 0.0;
    for (int m = 1; m < n; ++m) acc += std::cos(m * td) / m;
    r[d] = -(2.0 * kPi / n) * acc - (kPi / (n * n)) * std::cos(n * td);
  }
  return r;
}

MatrixXcd assemble_single_layer(const DiscreteBoundary& bdy, const Lattice& lat,
                                double kappa, double kbar, const EwaldParams& params,
                                LayerKernel kernel, int jobs) {
  const int N = bdy.size();
  const Eigen::VectorXd R = kress_log_weights(N);
  const double trap = 2.0 * kPi / N;
  MatrixXcd S(N, N);

  std::shared_ptr<const EwaldWorkspace> ws;
  Complex self_limit(0.0, 0.0);
  const bool periodic = kernel == LayerKernel::halfspace_periodic;
  const bool helmholtz = periodic && kappa != 0.0;
  if (helmholtz) {
    ws = std::make_shared<const EwaldWorkspace>(lat, Wavenumbers{kappa, kbar}, params);
    self_limit = ws->self_limit();
  }

  parallel_for(N, jobs, [&](std::int64_t ii) {
    int i = static_cast<int>(ii);
    const Vec2 xi = bdy.nodes.col(i);
    for (int j = 0; j < N; ++j) {
      Complex aij, bij;
      if (i == j) {
        if (!periodic) {
          aij = 1.0 / (4.0 * kPi);
          bij = std::log(bdy.speeds[i]) / (2.0 * kPi);
        } else if (!helmholtz) {
          aij = 1.0 / (4.0 * kPi);
          bij = std::log(2.0 * kPi * bdy.speeds[i] / lat.period) / (2.0 * kPi) -
                green_static(lat, Vec2(0.0, 2.0 * xi.y()));
        } else {
          aij = 1.0 / (4.0 * kPi);
          bij = Complex((std::log(kappa * bdy.speeds[i] / 2.0) + kEulerGamma) / (2.0 * kPi),
                        -0.25) +
                self_limit - ws->value(Vec2(0.0, 2.0 * xi.y()));
        }
      } else {
        const Vec2 xj = bdy.nodes.col(j);
        const Vec2 d = xi - xj;
        const Vec2 m(xi.x() - xj.x(), xi.y() + xj.y());
        const double lg = log_kernel_arg(bdy.params[i], bdy.params[j]);
        if (!periodic) {
          aij = 1.0 / (4.0 * kPi);
          bij = std::log(d.norm()) / (2.0 * kPi) - aij * lg;
        } else if (!helmholtz) {
          aij = 1.0 / (4.0 * kPi);
          bij = green_static(lat, d) - green_static(lat, m) - aij * lg;
        } else {
          double r = d.norm();
          aij = bessel_j0(kappa * r) / (4.0 * kPi);
          bij = ws->value(d) - ws->value(m) - aij * lg;
        }
      }
      S(i, j) = (aij * R[(i - j + N) % N] + trap * bij) * bdy.speeds[j];
    }
  });
  return S;
}

MatrixXcd assemble_adjoint_neumann(const DiscreteBoundary& bdy, const Lattice& lat,
                                   double kappa, double kbar, const EwaldParams& params,
                                   LayerKernel kernel, int jobs) {
  const int N = bdy.size();
  const Eigen::VectorXd R = kress_log_weights(N);
  const double trap = 2.0 * kPi / N;
  MatrixXcd K(N, N);

  std::shared_ptr<const EwaldWorkspace> ws;
  Vec2c self_grad(Complex(0, 0), Complex(0, 0));
  const bool periodic = kernel == LayerKernel::halfspace_periodic;
  const bool helmholtz = periodic && kappa != 0.0;
  if (helmholtz) {
    ws = std::make_shared<const EwaldWorkspace>(lat, Wavenumbers{kappa, kbar}, params);
    self_grad = ws->self_limit_gradient();
  }

  parallel_for(N, jobs, [&](std::int64_t ii) {
    int i = static_cast<int>(ii);
    const Vec2 xi = bdy.nodes.col(i);
    const Vec2 nu = bdy.normals.col(i);
    for (int j = 0; j < N; ++j) {
      Complex aij(0.0, 0.0), bij;
      if (i == j) {
        bij = bdy.curvatures[i] / (4.0 * kPi);
        if (periodic) {
          if (!helmholtz) {
            Vec2 gm = green_static_gradient(lat, Vec2(0.0, 2.0 * xi.y()));
            bij -= nu.dot(gm);
          } else {
            Vec2c gm = ws->gradient(Vec2(0.0, 2.0 * xi.y()));
            bij += nu.x() * (self_grad.x() - gm.x()) + nu.y() * (self_grad.y() - gm.y());
          }
        }
      } else {
        const Vec2 xj = bdy.nodes.col(j);
        const Vec2 d = xi - xj;
        const Vec2 m(xi.x() - xj.x(), xi.y() + xj.y());
        const double lg = log_kernel_arg(bdy.params[i], bdy.params[j]);
        if (!periodic) {
          bij = nu.dot(d) / (2.0 * kPi * d.squaredNorm());
        } else if (!helmholtz) {
          bij = nu.dot(green_static_gradient(lat, d) - green_static_gradient(lat, m)) ;
        } else {
          double r = d.norm();
          aij = -kappa * bessel_j1(kappa * r) * nu.dot(d) / (4.0 * kPi * r);
          Vec2c g = ws->gradient(d) - ws->gradient(m);
          bij = nu.x() * g.x() + nu.y() * g.y() - aij * lg;
        }
      }
      K(i, j) = (aij * R[(i - j + N) % N] + trap * bij) * bdy.speeds[j];
    }
  });
  return K;
}

Complex eval_field(const DiscreteBoundary& bdy, const VectorXcd& density,
                   const Lattice& lat, double kappa, double kbar,
                   const EwaldParams& params, const Vec2& x) {
  if (density.size() != bdy.size())
    throw ConfigError("eval_field: density size does not match boundary");
  double min_dist = (bdy.nodes.colwise() - x).colwise().norm().minCoeff();
  double spacing = bdy.weights.maxCoeff();
  if (min_dist < spacing)
    std::cerr << "eval_field: target within one node spacing of the boundary; "
                 "quadrature accuracy degrades\n";
  Complex out(0.0, 0.0);
  if (kappa == 0.0) {
    for (int j = 0; j < bdy.size(); ++j)
      out += halfspace_green_static(lat, x, bdy.nodes.col(j)) * density[j] * bdy.weights[j];
  } else {
    EwaldWorkspace ws(lat, Wavenumbers{kappa, kbar}, params);
    for (int j = 0; j < bdy.size(); ++j)
      out += halfspace_green_ewald(ws, x, bdy.nodes.col(j)) * density[j] * bdy.weights[j];
  }
  return out;
}

BlockOperator assemble_block(const DiscreteBoundary& bdy, const Lattice& lat,
                             double k, double k_b, double kbar, double epsilon,
                             double delta, const EwaldParams& params, int jobs) {
  const int N = bdy.size();
  BlockOperator block;
  block.k = k;
  block.k_b = k_b;
  block.kbar = kbar;
  block.epsilon = epsilon;
  block.delta = delta;

  const double ek = epsilon * k;
  const double ekb = epsilon * k_b;
  const double ekbar = epsilon * kbar;

  MatrixXcd Sb = assemble_single_layer(bdy, lat, ekb, ekbar, params,
                                       LayerKernel::halfspace_periodic, jobs);
  MatrixXcd Kb = assemble_adjoint_neumann(bdy, lat, ekb, ekbar, params,
                                          LayerKernel::halfspace_periodic, jobs);
  const bool same_wavenumber = ek == ekb;
  MatrixXcd S = same_wavenumber
                    ? Sb
                    : assemble_single_layer(bdy, lat, ek, ekbar, params,
                                            LayerKernel::halfspace_periodic, jobs);
  MatrixXcd K = same_wavenumber
                    ? Kb
                    : assemble_adjoint_neumann(bdy, lat, ek, ekbar, params,
                                               LayerKernel::halfspace_periodic, jobs);

  MatrixXcd I = MatrixXcd::Identity(N, N);
  block.matrix.resize(2 * N, 2 * N);
  block.matrix.topLeftCorner(N, N) = Sb;
  block.matrix.topRightCorner(N, N) = -S;
  block.matrix.bottomLeftCorner(N, N) = -0.5 * I + Kb;
  block.matrix.bottomRightCorner(N, N) = -delta * (0.5 * I + K);
  return block;
}

VectorXcd incident_rhs(const DiscreteBoundary& bdy, double kd, double kbar,
                       double epsilon, double mu, Complex u0) {
  const int N = bdy.size();
  VectorXcd rhs(2 * N);
  const Complex amp = -2.0 * Complex(0.0, 1.0) * u0;
  for (int j = 0; j < N; ++j) {
    double xb = bdy.nodes(0, j), xd = bdy.nodes(1, j);
    Complex phase = std::exp(Complex(0.0, -epsilon * kbar * xb));
    rhs[j] = amp * phase * std::sin(epsilon * kd * xd);
    Complex dnormal = kd * bdy.normals(1, j) * std::cos(epsilon * kd * xd) -
                      Complex(0.0, kbar * bdy.normals(0, j)) * std::sin(epsilon * kd * xd);
    rhs[N + j] = amp * phase * (mu * epsilon * epsilon * epsilon) * dnormal;
  }
  return rhs;
}

}  // namespace metascreen
