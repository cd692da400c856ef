#include "metascreen/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "metascreen/errors.hpp"

namespace metascreen {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kPi = 3.14159265358979323846264338;
constexpr double kBesselSeriesCut = 16.5;
const Complex kI(0.0, 1.0);

// exp with the result clamped to the largest finite double. Only reachable
// through the documented out-of-range branches of erfc_complex.
Complex exp_clamped(Complex z) {
  if (z.real() > 707.0) {
    double mag = std::numeric_limits<double>::max() / 4.0;
    return mag * Complex(std::cos(z.imag()), std::sin(z.imag()));
  }
  return std::exp(z);
}

// ---------------------------------------------------------------------------
// Bessel J0/Y0/J1: long-double power series for small argument.
// ---------------------------------------------------------------------------

long double j0_series(long double z) {
  long double q = z * z / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * m);
    sum += term;
    if (std::fabs(static_cast<double>(term)) < 1e-21 * (1.0 + std::fabs(static_cast<double>(sum)))) break;
  }
  return sum;
}

long double y0_series(long double z) {
  // Y0 = (2/pi) [ (ln(z/2)+gamma) J0 + sum_{m>=1} (-1)^{m+1} H_m q^m/(m!)^2 ]
  long double q = z * z / 4.0L;
  long double term = 1.0L, sum = 0.0L, harmonic = 0.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * m);
    harmonic += 1.0L / m;
    sum += -term * harmonic;
    if (std::fabs(static_cast<double>(term)) < 1e-21) break;
  }
  long double j0 = j0_series(z);
  return (2.0L / static_cast<long double>(kPi)) *
         ((std::log(z / 2.0L) + static_cast<long double>(kEulerGamma)) * j0 + sum);
}

long double j1_series(long double z) {
  long double q = z * z / 4.0L;
  long double term = z / 2.0L, sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * (m + 1));
    sum += term;
    if (std::fabs(static_cast<double>(term)) < 1e-21 * (1.0 + std::fabs(static_cast<double>(sum)))) break;
  }
  return sum;
}

// Hankel asymptotic expansion: H_nu^(1)(z) ~ sqrt(2/(pi z)) e^{i omega}
// sum_k i^k a_k(nu)/z^k, omega = z - nu pi/2 - pi/4. Truncated at the
// smallest term; optimal-truncation error ~ e^{-2z}, below 1e-13 for z > 16.
Complex hankel_asym(int nu, double z) {
  double fournu2 = 4.0 * nu * nu;
  Complex sum(1.0, 0.0);
  double ak = 1.0;
  double prev = 1.0;
  Complex ipow(0.0, 1.0);
  for (int k = 1; k <= 60; ++k) {
    double num = fournu2 - (2.0 * k - 1.0) * (2.0 * k - 1.0);
    ak *= num / (8.0 * k);
    double mag = std::fabs(ak) / std::pow(z, k);
    if (mag > prev) break;  // divergent tail reached
    sum += ipow * (ak / std::pow(z, k));
    prev = mag;
    ipow *= Complex(0.0, 1.0);
    if (mag < 1e-18) break;
  }
  double omega = z - 0.5 * nu * kPi - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * z)) * Complex(std::cos(omega), std::sin(omega)) * sum;
}

// ---------------------------------------------------------------------------
// Faddeeva function: Weideman rational approximation plus a Laplace continued
// fraction for large |z|. Coefficients are computed once at first use.
// ---------------------------------------------------------------------------

constexpr int kWeidemanN = 42;

const std::array<double, kWeidemanN>& weideman_coeffs() {
  static std::array<double, kWeidemanN> coeffs;
  static std::once_flag flag;
  std::call_once(flag, [] {
    const int N = kWeidemanN;
    const int M = 2 * N;
    const int M2 = 2 * M;
    const long double L = std::sqrt(static_cast<long double>(N) / std::sqrt(2.0L));
    // Sampled auxiliary function on the rotated grid, DC slot zeroed.
    std::vector<long double> f(M2, 0.0L);
    for (int idx = 0; idx < 2 * M - 1; ++idx) {
      int k = -M + 1 + idx;
      long double theta = static_cast<long double>(k) * static_cast<long double>(kPi) / M;
      long double t = L * std::tan(theta / 2.0L);
      f[idx + 1] = std::exp(-t * t) * (L * L + t * t);
    }
    // fftshift then real DFT; sizes are tiny so a direct transform suffices.
    std::vector<long double> g(M2);
    for (int i = 0; i < M2; ++i) g[i] = f[(i + M) % M2];
    for (int k = 0; k < N; ++k) {
      long double acc = 0.0L;
      for (int n = 0; n < M2; ++n)
        acc += g[n] * std::cos(2.0L * static_cast<long double>(kPi) * (k + 1) * n / M2);
      // polynomial coefficients ordered highest degree first
      coeffs[N - 1 - k] = static_cast<double>(acc / M2);
    }
  });
  return coeffs;
}

Complex faddeeva_weideman(Complex z) {
  const auto& a = weideman_coeffs();
  const double L = std::sqrt(static_cast<double>(kWeidemanN) / std::sqrt(2.0));
  Complex iz = kI * z;
  Complex Z = (L + iz) / (L - iz);
  Complex p(0.0, 0.0);
  for (int k = 0; k < kWeidemanN; ++k) p = p * Z + a[k];
  Complex denom = L - iz;
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(kPi)) / denom;
}

Complex faddeeva_cf(Complex z) {
  // Laplace continued fraction, adequate for |z| >= 7.5.
  Complex r(0.0, 0.0);
  for (int j = 14; j >= 1; --j) r = (0.5 * j) / (z - r);
  return (kI / std::sqrt(kPi)) / (z - r);
}

}  // namespace

double bessel_j0(double z) {
  double az = std::fabs(z);
  if (az <= kBesselSeriesCut) return static_cast<double>(j0_series(az));
  return hankel_asym(0, az).real();
}

double bessel_y0(double z) {
  if (!(z > 0.0)) throw DomainError("bessel_y0: argument must be positive");
  if (z <= kBesselSeriesCut) return static_cast<double>(y0_series(z));
  return hankel_asym(0, z).imag();
}

double bessel_j1(double z) {
  double az = std::fabs(z);
  double val = (az <= kBesselSeriesCut) ? static_cast<double>(j1_series(az))
                                        : hankel_asym(1, az).real();
  return z < 0.0 ? -val : val;
}

Complex hankel1_0(double z) {
  if (!std::isfinite(z) || z < 1e-8)
    throw DomainError("hankel1_0: argument must be >= 1e-8 (log singularity at 0)");
  if (z <= kBesselSeriesCut)
    return Complex(static_cast<double>(j0_series(z)), static_cast<double>(y0_series(z)));
  return hankel_asym(0, z);
}

double expint_en(int n, double x) {
  if (n < 1) throw DomainError("expint_en: order must be >= 1");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("expint_en: argument must be positive");
  if (x > 700.0) return 0.0;  // below double underflow after e^{-x}
  if (x <= 1.0) {
    // E1 series, then upward recurrence (stable here since x <= 1 <= n).
    long double e1 = -static_cast<long double>(kEulerGamma) - std::log(static_cast<long double>(x));
    long double term = 1.0L;
    for (int k = 1; k < 60; ++k) {
      term *= -static_cast<long double>(x) / k;
      e1 -= term / k;
      if (std::fabs(static_cast<double>(term)) < 1e-20) break;
    }
    long double e = e1;
    long double emx = std::exp(-static_cast<long double>(x));
    for (int j = 1; j < n; ++j) e = (emx - x * e) / j;
    return static_cast<double>(e);
  }
  // Modified Lentz continued fraction for E_n directly.
  const double tiny = 1e-300;
  double b = x + n;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    double an = -static_cast<double>(i) * (n - 1 + i);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

Complex faddeeva_w(Complex z) {
  double x = z.real(), y = z.imag();
  if (y < 0.0) throw DomainError("faddeeva_w: requires Im z >= 0");
  // On (or numerically on) the real axis the real part is e^{-x^2} exactly;
  // the rational approximation would lose it to cancellation for |x| > 4.
  if (y <= 1e-13 * std::max(1.0, std::fabs(x))) {
    Complex w = (std::norm(z) >= 56.25) ? faddeeva_cf(Complex(x, 0.0))
                                        : faddeeva_weideman(Complex(x, 0.0));
    double re = (x * x < 700.0) ? std::exp(-x * x) : 0.0;
    return Complex(re, w.imag());
  }
  if (std::norm(z) >= 56.25) return faddeeva_cf(z);
  return faddeeva_weideman(z);
}

Complex erfcx_complex(Complex z) {
  if (z.real() < 0.0) throw DomainError("erfcx_complex: requires Re z >= 0");
  return faddeeva_w(kI * z);
}

double erfcx_real(double x) {
  if (x < 0.0) throw DomainError("erfcx_real: requires x >= 0");
  // direct product is exact while both factors are representable
  if (x < 20.0) return std::exp(x * x) * std::erfc(x);
  double r = 0.0;
  for (int j = 16; j >= 1; --j) r = (0.5 * j) / (x + r);
  return (1.0 / std::sqrt(kPi)) / (x + r);
}

double scaled_erfc_real(double p, double w) {
  double q = p - w * w;
  auto expc = [](double t) {
    return t > 707.0 ? std::numeric_limits<double>::max() / 4.0 : std::exp(t);
  };
  if (w >= 0.0) return expc(q) * erfcx_real(w);
  return 2.0 * expc(p) - expc(q) * erfcx_real(-w);
}

double erfi_real(double y) {
  double ay = std::fabs(y);
  double val;
  if (ay <= 5.5) {
    long double t = ay, sum = ay;
    long double y2 = static_cast<long double>(ay) * ay;
    for (int n = 1; n < 200; ++n) {
      t *= y2 / n;
      sum += t / (2 * n + 1);
      if (t / (2 * n + 1) < 1e-20L * sum) break;
    }
    val = static_cast<double>(sum) * 2.0 / std::sqrt(kPi);
  } else {
    // erfi(y) ~ e^{y^2}/(y sqrt(pi)) (1 + 1/(2y^2) + 3/(4y^4) + ...)
    double inv2 = 1.0 / (y * y);
    double s = 1.0, term = 1.0;
    for (int k = 1; k <= 8; ++k) {
      term *= (2.0 * k - 1.0) * 0.5 * inv2;
      s += term;
    }
    double ex = (ay * ay < 707.0) ? std::exp(ay * ay)
                                  : std::numeric_limits<double>::max() / 4.0;
    val = ex / (ay * std::sqrt(kPi)) * s;
  }
  return y < 0.0 ? -val : val;
}

Complex erfc_complex(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("erfc_complex: non-finite argument");
  if (z.imag() < 0.0) return std::conj(erfc_complex(std::conj(z)));
  if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
  if (z.real() == 0.0) return Complex(1.0, -erfi_real(z.imag()));
  if (std::abs(z) >= 50.0) {
    // Asymptotic branch; clamped so it always returns finite values.
    Complex inv2 = 1.0 / (z * z);
    Complex s(1.0, 0.0), term(1.0, 0.0);
    for (int k = 1; k <= 8; ++k) {
      term *= -(2.0 * k - 1.0) * 0.5 * inv2;
      s += term;
    }
    return exp_clamped(-z * z) / (z * std::sqrt(kPi)) * s;
  }
  return exp_clamped(-z * z) * faddeeva_w(kI * z);
}

Complex scaled_erfc(Complex p, Complex w) {
  // e^p erfc(w) = e^{p - w^2} erfcx(w)            (Re w >= 0)
  //             = 2 e^p - e^{p - w^2} erfcx(-w)   (Re w <  0)
  if (w.real() >= 0.0) return exp_clamped(p - w * w) * erfcx_complex(w);
  return 2.0 * exp_clamped(p) - exp_clamped(p - w * w) * erfcx_complex(-w);
}

}  // namespace metascreen
