#include "metascreen/resonance.hpp"

#include <algorithm>
#include <cmath>

#include "metascreen/errors.hpp"
#include "metascreen/parallel.hpp"

namespace metascreen {

namespace {

const Complex kI(0.0, 1.0);

double smallest_singular_value(const MatrixXcd& m) {
  Eigen::BDCSVD<MatrixXcd> svd(m);
  return svd.singularValues().tail(1)(0);
}

double smallest_eigen_magnitude(const MatrixXcd& m) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

double pairing_with_one(const DiscreteBoundary& bdy, const Eigen::VectorXd& psi) {
  return bdy.weights.dot(psi);
}

}  // namespace

MediaConfig MediaConfig::from_contrast(double delta, double v, double v_b) {
  if (!(delta > 0.0) || !(v > 0.0) || !(v_b > 0.0))
    throw ConfigError("media: contrast and wave speeds must be positive");
  MediaConfig m;
  m.rho = 1.0 / delta;
  m.rho_b = 1.0;
  m.kappa = v * v * m.rho;
  m.kappa_b = v_b * v_b * m.rho_b;
  return m;
}

void MediaConfig::validate() const {
  if (!(rho > 0.0) || !(rho_b > 0.0) || !(kappa > 0.0) || !(kappa_b > 0.0))
    throw ConfigError("media: densities and bulk moduli must be positive");
}

Eigen::VectorXd compute_psi0(const MatrixXcd& kstar, const DiscreteBoundary& bdy) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(kstar);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("compute_psi0: eigendecomposition failed");
  const auto& vals = es.eigenvalues();
  int best = -1, second = -1;
  double bestd = 1e30, secondd = 1e30;
  for (int i = 0; i < vals.size(); ++i) {
    double d = std::abs(vals[i] - Complex(0.5, 0.0));
    if (d < bestd) {
      second = best; secondd = bestd;
      best = i; bestd = d;
    } else if (d < secondd) {
      second = i; secondd = d;
    }
  }
  if (bestd > 0.05)
    throw ConvergenceError("compute_psi0: no eigenvalue within 0.05 of 1/2 (refine the mesh)");
  if (second >= 0 && std::abs(vals[best] - vals[second]) < 1e-8)
    throw ConvergenceError("compute_psi0: eigenvalue near 1/2 is degenerate");
  Eigen::VectorXcd v = es.eigenvectors().col(best);
  // static operator: the monopole mode is real up to a global phase
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::abs(v[imax]) / v[imax];
  Eigen::VectorXd psi = v.real();
  double s = pairing_with_one(bdy, psi);
  if (std::fabs(s) < 1e-12)
    throw ConvergenceError("compute_psi0: eigenvector has vanishing mean");
  return psi / s;
}

double compute_capacity(const DiscreteBoundary& bdy, const MatrixXcd& s0) {
  Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(bdy.size());
  Eigen::VectorXcd psi = s0.partialPivLu().solve(ones);
  double c = -bdy.weights.dot(psi.real().eval());
  if (!(c > 0.0)) throw ConvergenceError("compute_capacity: non-positive capacity");
  return c;
}

double capacity_from_psi0(const DiscreteBoundary&, const MatrixXcd& s0,
                          const Eigen::VectorXd& psi0) {
  Eigen::VectorXcd s = s0 * psi0.cast<Complex>();
  double mean = s.real().mean();
  if (!(mean < 0.0)) throw ConvergenceError("capacity_from_psi0: S psi0 not negative");
  return -1.0 / mean;
}

std::pair<double, Eigen::VectorXd> compute_m1_psi1(const DiscreteBoundary& bdy,
                                                   const MatrixXcd& kstar,
                                                   const Eigen::VectorXd& psi0) {
  const int N = bdy.size();
  double m1 = 0.0;
  for (int j = 0; j < N; ++j) m1 += bdy.weights[j] * psi0[j] * bdy.nodes(1, j);

  // Rank-one shift psi0 <1, .> makes (-1/2 + K*) invertible; the solution of
  // the shifted system is automatically the mean-zero one.
  MatrixXcd A = -0.5 * MatrixXcd::Identity(N, N) + kstar;
  A += psi0.cast<Complex>() * bdy.weights.transpose().cast<Complex>();
  Eigen::VectorXcd rhs = bdy.normals.row(1).transpose().cast<Complex>();
  Eigen::PartialPivLU<MatrixXcd> lu(A);
  Eigen::VectorXcd sol = lu.solve(rhs);
  double resid = (A * sol - rhs).norm() / rhs.norm();
  if (resid > 1e-8)
    throw ConvergenceError("compute_m1_psi1: restricted solve residual " + std::to_string(resid));
  Eigen::VectorXd psi1 = sol.real();
  psi1 -= pairing_with_one(bdy, psi1) * psi0;  // pin <1, psi1> = 0 exactly
  return {m1, psi1};
}

double minnaert_frequency(double capacity, double area, const MediaConfig& media) {
  if (!(capacity > 0.0) || !(area > 0.0))
    throw DomainError("minnaert_frequency: capacity and area must be positive");
  return media.v_b() * std::sqrt(media.delta() * capacity / area);
}

CharSearchResult find_characteristic_value(const DiscreteBoundary& bdy, const Lattice& lat,
                                           const MediaConfig& media, double theta,
                                           const EwaldParams& params,
                                           const CharSearchOptions& opts) {
  if (opts.samples < 2) throw ConfigError("char search: need at least 2 samples");
  if (!(opts.omega_lo > 0.0) || !(opts.omega_hi > opts.omega_lo))
    throw ConfigError("char search: invalid frequency range");

  const double v = media.v(), v_b = media.v_b(), delta = media.delta();
  auto block_at = [&](double omega) {
    double k = omega / v, k_b = omega / v_b;
    double kbar = k * std::cos(theta);
    return assemble_block(bdy, lat, k, k_b, kbar, 1.0, delta, params, 1);
  };
  auto sigma_at = [&](double omega) {
    return smallest_singular_value(block_at(omega).matrix);
  };

  CharSearchResult result;
  const int M = opts.samples;
  std::vector<double> omegas(M), sigmas(M), eigs(M);
  for (int i = 0; i < M; ++i)
    omegas[i] = opts.omega_lo + (opts.omega_hi - opts.omega_lo) * i / (M - 1);
  parallel_for(M, opts.jobs, [&](std::int64_t i) {
    BlockOperator block = block_at(omegas[i]);
    sigmas[i] = smallest_singular_value(block.matrix);
    if (opts.track_eigenvalues) eigs[i] = smallest_eigen_magnitude(block.matrix);
  });
  if (opts.track_eigenvalues)
    for (int i = 0; i < M; ++i) result.eig_curve.push_back({omegas[i], eigs[i]});
  for (int i = 0; i < M; ++i) result.curve.push_back({omegas[i], sigmas[i]});

  int imin = static_cast<int>(std::min_element(sigmas.begin(), sigmas.end()) - sigmas.begin());
  if (imin == 0 || imin == M - 1) return result;  // no interior dip: curve only

  // golden-section refinement on the bracketing interval
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = omegas[imin - 1], hi = omegas[imin + 1];
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = sigma_at(x1), f2 = sigma_at(x2);
  result.curve.push_back({x1, f1});
  result.curve.push_back({x2, f2});
  while ((hi - lo) > opts.rel_tol * 0.5 * (hi + lo)) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = sigma_at(x1);
      result.curve.push_back({x1, f1});
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = sigma_at(x2);
      result.curve.push_back({x2, f2});
    }
  }
  result.omega_c = 0.5 * (lo + hi);
  std::sort(result.curve.begin(), result.curve.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return result;
}

Complex scattering_gs(double mu, double epsilon, double mu_M, double m1,
                      double capacity, double kd, double cell) {
  if (!(mu > 0.0)) throw DomainError("scattering_gs: mu must be positive");
  if (epsilon < 0.0) throw DomainError("scattering_gs: epsilon must be >= 0");
  Complex denom = 1.0 - mu_M / mu - epsilon * kI * (m1 * m1 * kd * capacity / cell);
  if (std::abs(denom) == 0.0)
    throw DomainError("scattering_gs: pole hit (resonance)");
  return epsilon * m1 / denom;
}

Complex reflection(double omega, const ResonanceReport& rep, const DampingModel& damping) {
  if (!(omega > 0.0)) throw DomainError("reflection: omega must be positive");
  double k = omega / rep.v;
  double kd = k * std::sin(rep.theta);
  double eta_rad = radiative_damping(kd, rep.m1, rep.capacity, rep.cell);
  double ratio = omega / rep.omega_M;
  Complex denom = 1.0 - ratio * ratio - kI * (eta_rad + damping.eta_other);
  return -1.0 - 2.0 * (kI * eta_rad) / denom;
}

std::pair<double, double> alpha_infinity(const DiscreteBoundary& bdy,
                                         const Eigen::VectorXd& psi1, double m1,
                                         double capacity, double cell) {
  double a0 = m1 * capacity / cell;
  double yd_psi1 = 0.0;
  for (int j = 0; j < bdy.size(); ++j) yd_psi1 += bdy.weights[j] * psi1[j] * bdy.nodes(1, j);
  double a1 = -yd_psi1 / cell + m1 * m1 * capacity / cell;
  return {a0, a1};
}

Complex scattered_field(const ResonanceReport& rep, const DiscreteBoundary& bdy,
                        const Lattice& lat, const Wavenumbers& wn, double epsilon,
                        const Vec2& x, double u0) {
  double L = bdy.nodes.row(1).maxCoeff();
  if (x.y() < L)
    throw DomainError("scattered_field: point below the top of the bubble layer");
  if (u0 == 0.0) return Complex(0.0, 0.0);
  if (!(epsilon > 0.0)) throw DomainError("scattered_field: epsilon must be positive");

  double kd = wn.kd();
  double k_b = wn.k * rep.v / rep.v_b;
  double mu = rep.delta / (epsilon * epsilon);
  double mu_M = k_b * k_b * rep.area / rep.capacity;
  Complex gs = scattering_gs(mu, epsilon, mu_M, rep.m1, rep.capacity, kd, rep.cell);

  // boundary-layer profiles are static single-layer fields
  EwaldParams static_path;
  Eigen::VectorXcd p0 = rep.psi0.cast<Complex>();
  Eigen::VectorXcd pdip = (rep.psi1 - rep.m1 * rep.capacity * rep.psi0).cast<Complex>();
  Complex alpha0 = -rep.capacity * eval_field(bdy, p0, lat, 0.0, 0.0, static_path, x);
  Complex alpha1 = eval_field(bdy, pdip, lat, 0.0, 0.0, static_path, x);

  Complex amp = 2.0 * kI * u0 * kd;
  Complex u_far = amp * std::exp(kI * (epsilon * (kd * x.y() - wn.kbar * x.x()))) *
                  (epsilon * rep.alpha1_inf - gs * rep.alpha0_inf);
  Complex u_bl = amp * std::exp(-kI * (epsilon * wn.kbar * x.x())) *
                 (epsilon * (alpha1 - rep.alpha1_inf) - gs * (alpha0 - rep.alpha0_inf));
  return u_far + u_bl;
}

ResonanceReport compute_resonance_report(const DiscreteBoundary& bdy, const Lattice& lat,
                                         const MediaConfig& media, double theta,
                                         const DampingModel& damping,
                                         const EwaldParams& params,
                                         const ReportOptions& opts) {
  media.validate();
  ResonanceReport rep;
  rep.period = lat.period;
  rep.theta = theta;
  rep.delta = media.delta();
  rep.v = media.v();
  rep.v_b = media.v_b();
  rep.area = bdy.area;
  rep.cell = lat.cell_measure();
  rep.eta_other = damping.eta_other;

  MatrixXcd s0 = assemble_single_layer(bdy, lat, 0.0, 0.0, params,
                                       LayerKernel::halfspace_periodic, opts.jobs);
  MatrixXcd k0 = assemble_adjoint_neumann(bdy, lat, 0.0, 0.0, params,
                                          LayerKernel::halfspace_periodic, opts.jobs);
  rep.psi0 = compute_psi0(k0, bdy);
  rep.capacity = compute_capacity(bdy, s0);
  rep.capacity_alt = capacity_from_psi0(bdy, s0, rep.psi0);
  auto [m1, psi1] = compute_m1_psi1(bdy, k0, rep.psi0);
  rep.m1 = m1;
  rep.psi1 = psi1;
  rep.omega_M = minnaert_frequency(rep.capacity, rep.area, media);
  double kb_at_res = rep.omega_M / rep.v_b;
  rep.mu_M = kb_at_res * kb_at_res * rep.area / rep.capacity;
  auto [a0, a1] = alpha_infinity(bdy, rep.psi1, rep.m1, rep.capacity, rep.cell);
  rep.alpha0_inf = a0;
  rep.alpha1_inf = a1;

  if (opts.run_char_search) {
    CharSearchOptions search = opts.search;
    if (!(search.omega_lo > 0.0)) search.omega_lo = 0.7 * rep.omega_M;
    if (!(search.omega_hi > search.omega_lo)) search.omega_hi = 1.3 * rep.omega_M;
    if (search.jobs == 0) search.jobs = opts.jobs;
    CharSearchResult res = find_characteristic_value(bdy, lat, media, theta, params, search);
    rep.omega_c = res.omega_c;
    rep.sv_curve = res.curve;
  }
  return rep;
}

}  // namespace metascreen
