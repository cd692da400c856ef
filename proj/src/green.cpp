#include "metascreen/green.hpp"

#include <algorithm>
#include <cmath>

#include "metascreen/errors.hpp"

namespace metascreen {

namespace {

constexpr double kPi = 3.14159265358979323846264338;
constexpr double kEulerGamma = 0.57721566490153286060651209;
const Complex kI(0.0, 1.0);

Complex free_space_term(const Wavenumbers& wn, double shift, const Vec2& d) {
  double dx = d.x() - shift;
  double r = std::hypot(dx, d.y());
  if (r < 1e-12) throw DomainError("green_direct: displacement on a lattice point");
  Complex phase = std::exp(-kI * (wn.kbar * shift));
  return -0.25 * kI * phase * hankel1_0(wn.k * r);
}

// Extrapolates the one-sided tail sum_{n > n0} t_n where t_n ~ C lambda^n
// n^{-1/2} (1 + O(1/n)), lambda = e^{i (k -+ kbar) a}. Each averaging pass
// (S - lambda S_prev)/(1 - lambda) removes one power of 1/n from the tail.
Complex tail_extrapolated(const Lattice& lat, const Wavenumbers& wn, const Vec2& d,
                          long n0, int sign) {
  constexpr int kWindow = 64;
  constexpr int kLevels = 5;
  double phi = (wn.k - sign * wn.kbar) * lat.period;
  Complex lambda = std::exp(kI * phi);
  if (std::abs(1.0 - lambda) < 1e-6)
    throw DomainError("green_direct: tail phase degenerate (grazing configuration)");
  std::vector<Complex> partial(kWindow);
  Complex acc(0.0, 0.0);
  for (int m = 0; m < kWindow; ++m) {
    long n = sign * (n0 + 1 + m);
    acc += free_space_term(wn, n * lat.period, d);
    partial[m] = acc;
  }
  int len = kWindow;
  for (int lev = 0; lev < kLevels; ++lev) {
    for (int m = 0; m < len - 1; ++m)
      partial[m] = (partial[m + 1] - lambda * partial[m]) / (1.0 - lambda);
    --len;
  }
  return partial[len - 1];
}

}  // namespace

Complex f_alpha(double alpha, double x) {
  double ax = std::fabs(x);
  if (alpha == 0.0) return Complex(0.5 * ax, 0.0);
  if (alpha > 0.0) {
    double s = std::sqrt(alpha);
    return std::exp(kI * (s * ax)) / (2.0 * kI * s);
  }
  double s = std::sqrt(-alpha);
  return Complex(std::exp(s * ax) / (2.0 * s), 0.0);
}

Complex green_direct(const Lattice& lat, const Wavenumbers& wn, const Vec2& d,
                     long n_images, bool accelerate) {
  lat.validate();
  if (n_images < 1) throw DomainError("green_direct: n_images must be >= 1");
  if (!(wn.k > 0.0)) throw DomainError("green_direct: wavenumber must be positive");
  Complex sum(0.0, 0.0);
  for (long n = -n_images; n <= n_images; ++n)
    sum += free_space_term(wn, n * lat.period, d);
  if (accelerate) {
    sum += tail_extrapolated(lat, wn, d, n_images, +1);
    sum += tail_extrapolated(lat, wn, d, n_images, -1);
  }
  return sum;
}

Complex green_spectral(const Lattice& lat, const Wavenumbers& wn, const Vec2& d,
                       int p_modes) {
  lat.validate();
  if (p_modes < 1) throw DomainError("green_spectral: p_modes must be >= 1");
  if (std::fabs(d.y()) < 1e-12 * lat.period)
    throw DomainError("green_spectral: series not convergent on the source plane");
  require_regime(lat, wn, p_modes);
  double z = std::fabs(d.y());
  Complex sum(0.0, 0.0);
  for (int p = -p_modes; p <= p_modes; ++p) {
    double k1 = wn.kbar + lat.reciprocal_step() * p;
    double s = wn.k * wn.k - k1 * k1;
    Complex k2 = s >= 0.0 ? Complex(std::sqrt(s), 0.0) : Complex(0.0, std::sqrt(-s));
    sum += std::exp(-kI * (k1 * d.x())) * std::exp(kI * k2 * z) /
           (2.0 * kI * k2 * lat.cell_measure());
  }
  return sum;
}

EwaldWorkspace::EwaldWorkspace(const Lattice& lat, const Wavenumbers& wn,
                               const EwaldParams& params)
    : lat_(lat), wn_(wn) {
  lat_.validate();
  params.validate();
  require_regime(lat, wn, params.p_modes);
  split_ = params.resolve_splitting(lat);
  q_terms_ = params.q_terms;

  for (int n = -params.n_images; n <= params.n_images; ++n) {
    shifts_.push_back(n * lat.period);
    phases_.push_back(std::exp(-kI * (wn.kbar * n * lat.period)));
  }
  double c = wn.k / (2.0 * split_);
  double coef = 1.0;
  qcoef_.push_back(1.0);
  for (int q = 1; q <= q_terms_; ++q) {
    coef *= c * c / q;
    qcoef_.push_back(coef);
  }
  for (int p = -params.p_modes; p <= params.p_modes; ++p) {
    double k1 = wn.kbar + lat.reciprocal_step() * p;
    double s = wn.k * wn.k - k1 * k1;
    Mode m;
    m.k1 = k1;
    if (s >= 0.0) {
      m.b = Complex(std::sqrt(s), 0.0);
      m.kappa_e = 0.0;
    } else {
      m.kappa_e = std::sqrt(-s);
      m.b = Complex(0.0, m.kappa_e);
    }
    modes_.push_back(m);
  }
}

Complex EwaldWorkspace::value(const Vec2& d) const {
  const double E = split_;
  Complex spat(0.0, 0.0);
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    double dx = d.x() - shifts_[i];
    double p2 = dx * dx + d.y() * d.y();
    if (p2 < 1e-24) throw DomainError("green_ewald: coincident points");
    double x = p2 * E * E;
    if (x > 45.0) continue;  // E_1(45)*sum(qcoef) < 1e-18
    double emx = std::exp(-x);
    // E_{q+1} chain by upward recurrence; absolute errors stay below the
    // magnitude of the retained terms in this argument range.
    double eq = expint_en(1, x);
    double s = qcoef_[0] * eq;
    for (int q = 1; q <= q_terms_; ++q) {
      eq = (emx - x * eq) / q;
      s += qcoef_[q] * eq;
    }
    spat += phases_[i] * s;
  }
  spat *= -1.0 / (4.0 * kPi);

  const double z = std::fabs(d.y());
  const double a = lat_.cell_measure();
  // transverse mode phases by recurrence over p
  const Complex step = std::exp(-kI * (lat_.reciprocal_step() * d.x()));
  Complex phase = std::exp(-kI * (modes_.front().k1 * d.x()));
  Complex spec(0.0, 0.0);
  for (const Mode& m : modes_) {
    if (m.kappa_e > 0.0) {
      // evanescent: all erfc arguments are real
      double bracket = scaled_erfc_real(m.kappa_e * z, m.kappa_e / (2.0 * E) + z * E) +
                       scaled_erfc_real(-m.kappa_e * z, m.kappa_e / (2.0 * E) - z * E);
      spec += phase * (bracket / (-4.0 * m.kappa_e * a));
    } else {
      Complex wp = -kI * m.b / (2.0 * E) + z * E;
      Complex wm = -kI * m.b / (2.0 * E) - z * E;
      Complex bracket = scaled_erfc(-kI * m.b * z, wp) + scaled_erfc(kI * m.b * z, wm);
      spec += phase * bracket / (4.0 * kI * m.b * a);
    }
    phase *= step;
  }
  return spat + spec;
}

Vec2c EwaldWorkspace::gradient(const Vec2& d) const {
  const double E = split_;
  Vec2c g(Complex(0, 0), Complex(0, 0));
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    double dx = d.x() - shifts_[i];
    double p2 = dx * dx + d.y() * d.y();
    if (p2 < 1e-24) throw DomainError("green_ewald: coincident points");
    double x = p2 * E * E;
    if (x > 45.0) continue;
    double emx = std::exp(-x);
    // chain over E_q starting at E_0 = e^{-x}/x
    double eq = emx / x;
    double s = qcoef_[0] * eq;
    eq = expint_en(1, x);
    for (int q = 1; q <= q_terms_; ++q) {
      s += qcoef_[q] * eq;
      eq = (emx - x * eq) / q;
    }
    Complex c = phases_[i] * (s * E * E / (2.0 * kPi));
    g.x() += c * dx;
    g.y() += c * d.y();
  }
  const double z = std::fabs(d.y());
  const double sz = d.y() > 0.0 ? 1.0 : (d.y() < 0.0 ? -1.0 : 0.0);
  const double a = lat_.cell_measure();
  const Complex step = std::exp(-kI * (lat_.reciprocal_step() * d.x()));
  Complex phase = std::exp(-kI * (modes_.front().k1 * d.x()));
  for (const Mode& m : modes_) {
    Complex plus, minus, mode;
    if (m.kappa_e > 0.0) {
      plus = scaled_erfc_real(m.kappa_e * z, m.kappa_e / (2.0 * E) + z * E);
      minus = scaled_erfc_real(-m.kappa_e * z, m.kappa_e / (2.0 * E) - z * E);
      mode = (plus + minus) / (-4.0 * m.kappa_e * a);
    } else {
      Complex wp = -kI * m.b / (2.0 * E) + z * E;
      Complex wm = -kI * m.b / (2.0 * E) - z * E;
      plus = scaled_erfc(-kI * m.b * z, wp);
      minus = scaled_erfc(kI * m.b * z, wm);
      mode = (plus + minus) / (4.0 * kI * m.b * a);
    }
    g.x() += -kI * m.k1 * phase * mode;
    g.y() += phase * sz * (minus - plus) / (4.0 * a);
    phase *= step;
  }
  return g;
}

Complex EwaldWorkspace::self_limit() const {
  const double E = split_;
  const double k = wn_.k;
  Complex out = Complex(-kEulerGamma / (4.0 * kPi) + std::log(2.0 * E / k) / (2.0 * kPi), 0.25);
  double corr = 0.0;
  for (int q = 1; q <= q_terms_; ++q) corr += qcoef_[q] / q;
  out -= corr / (4.0 * kPi);
  Complex spat(0.0, 0.0);
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    if (shifts_[i] == 0.0) continue;
    double x = shifts_[i] * shifts_[i] * E * E;
    double emx = std::exp(-x);
    double eq = expint_en(1, x);
    double s = qcoef_[0] * eq;
    for (int q = 1; q <= q_terms_; ++q) {
      eq = (emx - x * eq) / q;
      s += qcoef_[q] * eq;
    }
    spat += phases_[i] * s;
  }
  out -= spat / (4.0 * kPi);
  for (const Mode& m : modes_)
    out += erfc_complex(-kI * m.b / (2.0 * E)) / (2.0 * kI * m.b * lat_.cell_measure());
  return out;
}

Vec2c EwaldWorkspace::self_limit_gradient() const {
  const double E = split_;
  Complex gx(0.0, 0.0);
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    if (shifts_[i] == 0.0) continue;
    double x = shifts_[i] * shifts_[i] * E * E;
    double emx = std::exp(-x);
    double eq = emx / x;
    double s = qcoef_[0] * eq;
    eq = expint_en(1, x);
    for (int q = 1; q <= q_terms_; ++q) {
      s += qcoef_[q] * eq;
      eq = (emx - x * eq) / q;
    }
    gx += phases_[i] * (-shifts_[i]) * s * E * E / (2.0 * kPi);
  }
  for (const Mode& m : modes_) {
    Complex mode = erfc_complex(-kI * m.b / (2.0 * E)) / (2.0 * kI * m.b * lat_.cell_measure());
    gx += -kI * m.k1 * mode;
  }
  return Vec2c(gx, Complex(0.0, 0.0));
}

Complex green_ewald(const Lattice& lat, const Wavenumbers& wn, const Vec2& x,
                    const Vec2& y, const EwaldParams& params) {
  EwaldWorkspace ws(lat, wn, params);
  return ws.value(x - y);
}

double green_static(const Lattice& lat, const Vec2& d) {
  double u = kPi * d.x() / lat.period;
  double v = kPi * d.y() / lat.period;
  if (std::fabs(v) > 300.0) return std::fabs(d.y()) / (2.0 * lat.cell_measure());
  double s = std::sin(u), sh = std::sinh(v);
  double q = s * s + sh * sh;
  if (q < 1e-30) throw DomainError("green_static: displacement on a lattice point");
  return std::log(4.0 * q) / (4.0 * kPi);
}

Vec2 green_static_gradient(const Lattice& lat, const Vec2& d) {
  double u = 2.0 * kPi * d.x() / lat.period;
  double v = 2.0 * kPi * d.y() / lat.period;
  if (std::fabs(v) > 600.0)
    return Vec2(0.0, (d.y() > 0 ? 1.0 : -1.0) / (2.0 * lat.cell_measure()));
  double denom = std::cosh(v) - std::cos(u);
  if (denom < 1e-30) throw DomainError("green_static: displacement on a lattice point");
  double c = 1.0 / (2.0 * lat.period * denom);
  return Vec2(c * std::sin(u), c * std::sinh(v));
}

double halfspace_green_static(const Lattice& lat, const Vec2& x, const Vec2& y) {
  Vec2 d(x.x() - y.x(), x.y() - y.y());
  Vec2 m(x.x() - y.x(), x.y() + y.y());
  if (x.y() == 0.0 || y.y() == 0.0) return 0.0;  // Dirichlet trace, exactly
  return green_static(lat, d) - green_static(lat, m);
}

Vec2 halfspace_green_static_gradient(const Lattice& lat, const Vec2& x, const Vec2& y) {
  Vec2 d(x.x() - y.x(), x.y() - y.y());
  Vec2 m(x.x() - y.x(), x.y() + y.y());
  return green_static_gradient(lat, d) - green_static_gradient(lat, m);
}

Complex halfspace_green_ewald(const EwaldWorkspace& ws, const Vec2& x, const Vec2& y) {
  if (x.y() == 0.0 || y.y() == 0.0) return Complex(0.0, 0.0);
  return ws.value(Vec2(x.x() - y.x(), x.y() - y.y())) -
         ws.value(Vec2(x.x() - y.x(), x.y() + y.y()));
}

Vec2c halfspace_green_ewald_gradient(const EwaldWorkspace& ws, const Vec2& x, const Vec2& y) {
  return ws.gradient(Vec2(x.x() - y.x(), x.y() - y.y())) -
         ws.gradient(Vec2(x.x() - y.x(), x.y() + y.y()));
}

Complex halfspace_green(const Lattice& lat, const Wavenumbers& wn, const Vec2& x,
                        const Vec2& y, const EwaldParams& params, Evaluator ev) {
  Vec2 d(x.x() - y.x(), x.y() - y.y());
  Vec2 m(x.x() - y.x(), x.y() + y.y());
  switch (ev) {
    case Evaluator::direct: {
      long n = 100000;
      return green_direct(lat, wn, d, n, true) - green_direct(lat, wn, m, n, true);
    }
    case Evaluator::spectral:
      return green_spectral(lat, wn, d, 4 * params.p_modes) -
             green_spectral(lat, wn, m, 4 * params.p_modes);
    case Evaluator::ewald:
    default: {
      EwaldWorkspace ws(lat, wn, params);
      return halfspace_green_ewald(ws, x, y);
    }
  }
}

Complex g1_lattice(const Lattice& lat, const Vec2& d, int p_modes) {
  double z = std::fabs(d.y());
  double sum = 0.0;
  // +m and -m terms coincide, so each m carries both
  for (int m = 1; m <= p_modes; ++m) {
    double l = lat.reciprocal_step() * m;
    sum += std::exp(-l * z) / (lat.cell_measure() * l) *
           ((1.0 / l + z) * std::sin(l * d.x()) - d.x() * std::cos(l * d.x()));
  }
  return kI * sum;  // purely imaginary
}

LowFreqTerms green_expansion_terms(const Lattice& lat, const Wavenumbers& wn,
                                   const Vec2& x, const Vec2& y, int p_modes) {
  if ((x - y).norm() < 1e-12) throw DomainError("green_expansion_terms: coincident points");
  LowFreqTerms out;
  out.g0_plus = halfspace_green_static(lat, x, y);
  double dx = x.x() - y.x();
  double kd = wn.kd();
  Complex first = -0.5 * kI / lat.cell_measure() *
                  (2.0 * kd * x.y() * y.y() +
                   wn.kbar * dx * (std::fabs(x.y() - y.y()) - std::fabs(x.y() + y.y())));
  Complex g1p = g1_lattice(lat, Vec2(dx, x.y() - y.y()), p_modes) -
                g1_lattice(lat, Vec2(dx, x.y() + y.y()), p_modes);
  out.g1_plus = first - wn.kbar * g1p;
  double zmin = std::min(std::fabs(x.y() - y.y()), std::fabs(x.y() + y.y()));
  out.tail_bound = std::exp(-lat.reciprocal_step() * p_modes * zmin);
  return out;
}

}  // namespace metascreen
